#pragma once

#include "cvqt/protocol.hpp"
#include "cvqt/qubit.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace simtool {

using Json = nlohmann::ordered_json;

struct SweepSection {
  std::vector<double> n_in;
  std::vector<double> t_cen;
  int n_phases = 16;
  double fixed_n_in = 1.3;
};

struct FitSection {
  std::string csv_path;  // resolved against the config file location
  std::string mode = "two_param";  // or "decomposed"
  double s_tms_db = 5.0;           // used by the decomposed mode
};

struct QubitSection {
  std::vector<cvqt::TemperatureFit> fits;
  double fitted_s_tms_db = 5.0;
  std::vector<double> target_s_tms_db = {5.0, 10.0};
};

struct TomoState {
  std::string type = "tms";  // tms | coherent | thermal | protocol_output
  double s_tms_db = 5.0;
  std::complex<double> alpha{0.0, 0.0};
  double n_occ = 0.0;
  double n_in = 1.3;
  double phase = 0.0;
};

struct TomoSection {
  TomoState state;
  std::uint64_t n_samples = 1'000'000;
  std::size_t batches = 100;
  int max_order = 4;
  double threshold = 4.0;
  bool write_samples = false;
  bool write_moments = true;
};

/// Parsed experiment description. Sections are optional in the file; each
/// subcommand demands the ones it needs.
struct ExperimentConfig {
  std::optional<cvqt::ProtocolConfig> protocol;
  bool gain_auto = false;  // protocol.gain_db was "auto"
  std::optional<SweepSection> sweep;
  std::optional<FitSection> fit;
  std::optional<QubitSection> qubit;
  std::optional<TomoSection> tomo;
  std::string output_dir = ".";
  std::uint64_t seed = 1;
};

/// Loads and validates a config file. Unknown keys anywhere are rejected.
/// Throws CliError with the schema/io category.
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace simtool
