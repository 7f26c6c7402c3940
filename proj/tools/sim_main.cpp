// sim: experiment harness for the teleportation simulator.
//
//   sim sweep-photon --config cfg.json --out results [--jobs 4]
//   sim sweep-temp   --config cfg.json --out results
//   sim fit          --config cfg.json --out results
//   sim qubit-predict --config cfg.json --out results
//   sim tomo         --config cfg.json --out results --seed 42
//   sim --check      runs the built-in acceptance suite
//
// All outputs are deterministic for a given config and seed; reruns are
// byte-identical regardless of --jobs.

#include "app_config.hpp"
#include "errors.hpp"
#include "table_io.hpp"

#include "cvqt/acceptance.hpp"
#include "cvqt/gaussian.hpp"
#include "cvqt/measures.hpp"
#include "cvqt/model.hpp"
#include "cvqt/ops.hpp"
#include "cvqt/protocol.hpp"
#include "cvqt/qubit.hpp"
#include "cvqt/tomography.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace simtool {
namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

ExperimentConfig load_with_overrides(const CommonArgs& args) {
  ExperimentConfig cfg = load_experiment_config(args.config_path);
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  if (args.seed) cfg.seed = *args.seed;
  return cfg;
}

cvqt::ProtocolConfig require_protocol(ExperimentConfig& cfg) {
  if (!cfg.protocol) {
    throw CliError{ErrorCategory::kSchema, "config: 'protocol' section is required"};
  }
  if (cfg.gain_auto) {
    try {
      cfg.protocol->gain_db = cvqt::calibrate_gain(*cfg.protocol);
    } catch (const std::runtime_error& e) {
      throw CliError{ErrorCategory::kNumeric, e.what()};
    }
    cfg.gain_auto = false;
  }
  return *cfg.protocol;
}

void write_json_report(const std::string& dir, const std::string& filename, const Json& doc) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string path = (std::filesystem::path(dir) / filename).string();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CliError{ErrorCategory::kIo, "cannot open " + path + " for writing"};
  out << doc.dump(2) << "\n";
  if (!out) throw CliError{ErrorCategory::kIo, "short write to " + path};
  std::printf("wrote %s\n", path.c_str());
}

int cmd_sweep_photon(const CommonArgs& args) {
  ExperimentConfig cfg = load_with_overrides(args);
  const cvqt::ProtocolConfig protocol = require_protocol(cfg);
  if (!cfg.sweep || cfg.sweep->n_in.empty()) {
    throw CliError{ErrorCategory::kSchema, "config: sweep.n_in must list photon numbers"};
  }
  const auto points = cvqt::sweep_photon_number(protocol, cfg.sweep->n_in,
                                                cfg.sweep->n_phases, args.jobs);
  CsvTable table;
  table.header = {"n_in", "fidelity", "stderr", "f_cl", "f_nc"};
  for (const auto& p : points) {
    table.rows.push_back({p.n_in, p.mean_fidelity, p.stderr_fidelity, 0.5, 2.0 / 3.0});
  }
  const std::string path = write_csv(cfg.output_dir, "photon_sweep.csv", table);
  std::printf("wrote %s (%zu points, gain %.4f dB)\n", path.c_str(), points.size(),
              protocol.gain_db);
  return 0;
}

int cmd_sweep_temp(const CommonArgs& args) {
  ExperimentConfig cfg = load_with_overrides(args);
  const cvqt::ProtocolConfig protocol = require_protocol(cfg);
  if (!cfg.sweep || cfg.sweep->t_cen.empty()) {
    throw CliError{ErrorCategory::kSchema, "config: sweep.t_cen must list temperatures"};
  }
  const auto points = cvqt::sweep_temperature(protocol, cfg.sweep->t_cen, cfg.sweep->fixed_n_in,
                                              cfg.sweep->n_phases, args.jobs);
  CsvTable table;
  table.header = {"t_cen", "fidelity", "negativity", "purity", "n_env", "n_th"};
  for (const auto& p : points) {
    table.rows.push_back({p.t_cen, p.fidelity, p.negativity, p.purity, p.n_env, p.n_th});
  }
  const std::string path = write_csv(cfg.output_dir, "temp_sweep.csv", table);
  std::printf("wrote %s (%zu points, n_in = %g)\n", path.c_str(), points.size(),
              cfg.sweep->fixed_n_in);
  return 0;
}

Json fit_result_to_json(const cvqt::FitResult& fit) {
  Json j;
  j["kappa"] = fit.params.kappa;
  j["zeta"] = fit.params.zeta;
  j["rms_residual"] = fit.rms_residual;
  j["n_points"] = fit.n_points;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["implied_attenuation_db"] = -10.0 * std::log10(fit.params.kappa);
  Json q;
  q["fidelity_ground"] = cvqt::fidelity_ground(fit.params.kappa, fit.params.zeta);
  q["fidelity_excited"] = cvqt::fidelity_excited(fit.params.kappa, fit.params.zeta);
  q["average_fidelity"] = cvqt::average_qubit_fidelity(fit.params.kappa, fit.params.zeta);
  j["qubit_predictions"] = q;
  return j;
}

int cmd_fit(const CommonArgs& args) {
  ExperimentConfig cfg = load_with_overrides(args);
  if (!cfg.fit) throw CliError{ErrorCategory::kSchema, "config: 'fit' section is required"};
  const auto data = read_fit_csv(cfg.fit->csv_path);
  cvqt::FitResult fit;
  try {
    fit = cfg.fit->mode == "decomposed"
              ? cvqt::fit_model_decomposed(data, cvqt::squeezing_db_to_r(cfg.fit->s_tms_db))
              : cvqt::fit_model(data);
  } catch (const std::invalid_argument& e) {
    throw CliError{ErrorCategory::kDomain, e.what()};
  }
  if (!fit.converged) {
    throw CliError{ErrorCategory::kNumeric,
                   "fit did not converge within the evaluation budget"};
  }
  Json report = fit_result_to_json(fit);
  report["mode"] = cfg.fit->mode;
  report["input"] = cfg.fit->csv_path;
  write_json_report(cfg.output_dir, "fit_report.json", report);
  std::printf("kappa = %.6f  zeta = %.6f  rms = %.3e\n", fit.params.kappa, fit.params.zeta,
              fit.rms_residual);
  return 0;
}

int cmd_qubit_predict(const CommonArgs& args) {
  ExperimentConfig cfg = load_with_overrides(args);
  if (!cfg.qubit) throw CliError{ErrorCategory::kSchema, "config: 'qubit' section is required"};
  CsvTable table;
  table.header = {"t_cen", "s_tms_db", "kappa", "zeta", "f_ground", "f_excited", "f_avg"};
  try {
    for (double target : cfg.qubit->target_s_tms_db) {
      const auto curve = cvqt::predict_vs_temperature(cfg.qubit->fits,
                                                      cfg.qubit->fitted_s_tms_db, target);
      for (const auto& p : curve) {
        table.rows.push_back({p.t_cen, target, p.kappa, p.zeta, p.fidelity_ground,
                              p.fidelity_excited, p.avg_fidelity});
      }
    }
  } catch (const std::domain_error& e) {
    throw CliError{ErrorCategory::kDomain, e.what()};
  }
  const std::string path = write_csv(cfg.output_dir, "qubit_predictions.csv", table);
  std::printf("wrote %s (%zu rows)\n", path.c_str(), table.rows.size());
  return 0;
}

cvqt::GaussianState tomo_input_state(const ExperimentConfig& cfg) {
  const TomoState& s = cfg.tomo->state;
  if (s.type == "tms") return cvqt::build_tms(s.s_tms_db);
  if (s.type == "coherent") return cvqt::coherent(s.alpha);
  if (s.type == "thermal") return cvqt::thermal(s.n_occ);
  // protocol_output
  ExperimentConfig copy = cfg;
  const cvqt::ProtocolConfig protocol = require_protocol(copy);
  const std::complex<double> alpha = std::polar(std::sqrt(s.n_in), s.phase);
  return cvqt::run_teleportation(protocol, alpha).output_state;
}

int cmd_tomo(const CommonArgs& args) {
  ExperimentConfig cfg = load_with_overrides(args);
  if (!cfg.tomo) throw CliError{ErrorCategory::kSchema, "config: 'tomo' section is required"};
  const cvqt::GaussianState state = tomo_input_state(cfg);

  const Eigen::MatrixXd samples = cvqt::sample_state(state, cfg.tomo->n_samples, cfg.seed);
  const cvqt::MomentSet moments =
      cvqt::compute_moments(samples, cfg.tomo->max_order, cfg.tomo->batches);
  const cvqt::ReconstructionResult rec = cvqt::reconstruct_gaussian(moments);
  const cvqt::GaussianityReport gauss = cvqt::gaussianity_test(moments, cfg.tomo->threshold);

  Json report;
  report["state_type"] = cfg.tomo->state.type;
  report["n_samples"] = cfg.tomo->n_samples;
  report["n_batches"] = cfg.tomo->batches;
  report["seed"] = cfg.seed;
  Json est;
  est["mean"] = std::vector<double>(rec.state_estimate.mean().data(),
                                    rec.state_estimate.mean().data() +
                                        rec.state_estimate.mean().size());
  Json cov = Json::array();
  Json cov_se = Json::array();
  for (Eigen::Index i = 0; i < rec.state_estimate.cov().rows(); ++i) {
    Json row = Json::array();
    Json row_se = Json::array();
    for (Eigen::Index j = 0; j < rec.state_estimate.cov().cols(); ++j) {
      row.push_back(rec.state_estimate.cov()(i, j));
      row_se.push_back(rec.cov_stderr(i, j));
    }
    cov.push_back(row);
    cov_se.push_back(row_se);
  }
  est["cov"] = cov;
  est["mean_stderr"] = std::vector<double>(rec.mean_stderr.data(),
                                           rec.mean_stderr.data() + rec.mean_stderr.size());
  est["cov_stderr"] = cov_se;
  est["cov_positive_definite"] = rec.cov_positive_definite;
  est["min_symplectic_eig"] = rec.min_symplectic_eig;
  report["estimate"] = est;

  if (state.num_modes() == 2) {
    const cvqt::DiagnosticsWithErrors diag = cvqt::jackknife_two_mode_diagnostics(moments);
    Json d;
    d["negativity"] = diag.value.negativity;
    d["negativity_stderr"] = diag.negativity_stderr;
    d["purity"] = diag.value.purity;
    d["purity_stderr"] = diag.purity_stderr;
    report["two_mode_diagnostics"] = d;
  } else if (state.num_modes() == 1) {
    report["purity"] = cvqt::purity(rec.state_estimate);
  }

  Json g;
  g["verdict"] = gauss.verdict == cvqt::GaussianityVerdict::kPass   ? "pass"
                 : gauss.verdict == cvqt::GaussianityVerdict::kFail ? "fail"
                                                                    : "inconclusive";
  g["max_abs_statistic"] = gauss.max_abs_statistic;
  g["threshold"] = gauss.threshold;
  Json stats = Json::array();
  for (const auto& s : gauss.stats) {
    Json item;
    item["quadrature"] = s.quadrature;
    item["order"] = s.order;
    item["cumulant"] = s.value;
    item["stderr"] = s.stderr_;
    item["standardized"] = s.standardized;
    stats.push_back(item);
  }
  g["stats"] = stats;
  report["gaussianity"] = g;
  write_json_report(cfg.output_dir, "tomography_report.json", report);

  if (cfg.tomo->write_moments) {
    CsvTable table;
    for (std::size_t q = 0; q < moments.dim; ++q) {
      table.header.push_back("e" + std::to_string(q));
    }
    table.header.push_back("value");
    table.header.push_back("stderr");
    for (const auto& entry : moments.entries) {
      std::vector<double> row;
      for (int e : entry.exponents) row.push_back(e);
      row.push_back(entry.value);
      double mean = 0.0;
      for (double b : entry.batch_values) mean += b;
      mean /= static_cast<double>(entry.batch_values.size());
      double var = 0.0;
      for (double b : entry.batch_values) var += (b - mean) * (b - mean);
      var /= static_cast<double>(entry.batch_values.size() - 1);
      row.push_back(std::sqrt(var / static_cast<double>(entry.batch_values.size())));
      table.rows.push_back(row);
    }
    write_csv(cfg.output_dir, "moments.csv", table);
  }
  if (cfg.tomo->write_samples) {
    CsvTable table;
    for (std::size_t m = 0; m < state.num_modes(); ++m) {
      table.header.push_back("x" + std::to_string(m + 1));
      table.header.push_back("p" + std::to_string(m + 1));
    }
    table.rows.reserve(samples.rows());
    for (Eigen::Index i = 0; i < samples.rows(); ++i) {
      std::vector<double> row(samples.cols());
      for (Eigen::Index j = 0; j < samples.cols(); ++j) row[j] = samples(i, j);
      table.rows.push_back(std::move(row));
    }
    write_csv(cfg.output_dir, "samples.csv", table);
  }
  std::printf("gaussianity: %s (max |z| = %.3f)\n", g["verdict"].get<std::string>().c_str(),
              gauss.max_abs_statistic);
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Continuous-variable teleportation simulator over thermal microwave links"};
  app.require_subcommand(0, 1);

  bool check = false;
  int check_jobs = 4;
  app.add_flag("--check", check, "Run the built-in acceptance suite and print a pass/fail table");
  app.add_option("--jobs", check_jobs, "Worker threads for --check");

  CommonArgs args;
  auto add_common = [&args](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "Experiment config (JSON)")->required();
    cmd->add_option("--out", args.out_dir, "Output directory (overrides output.dir)");
    cmd->add_option("--seed", args.seed, "RNG seed (overrides config seed)");
    cmd->add_option("--jobs", args.jobs, "Worker threads for sweep points")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* sweep_photon = app.add_subcommand(
      "sweep-photon", "Teleportation fidelity vs input photon number");
  add_common(sweep_photon);
  CLI::App* sweep_temp = app.add_subcommand(
      "sweep-temp", "Fidelity and resource diagnostics vs channel center temperature");
  add_common(sweep_temp);
  CLI::App* fit = app.add_subcommand("fit", "Fit the effective (kappa, zeta) model to CSV data");
  add_common(fit);
  CLI::App* qubit = app.add_subcommand(
      "qubit-predict", "Predicted qubit teleportation fidelities from fitted parameters");
  add_common(qubit);
  CLI::App* tomo = app.add_subcommand(
      "tomo", "Sample a state, reconstruct it from moments, verify Gaussianity");
  add_common(tomo);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check) {
      const auto results = cvqt::run_acceptance(check_jobs, 0);
      std::fputs(cvqt::format_acceptance_table(results).c_str(), stdout);
      for (const auto& r : results) {
        if (!r.pass) return 1;
      }
      return 0;
    }
    if (sweep_photon->parsed()) return cmd_sweep_photon(args);
    if (sweep_temp->parsed()) return cmd_sweep_temp(args);
    if (fit->parsed()) return cmd_fit(args);
    if (qubit->parsed()) return cmd_qubit_predict(args);
    if (tomo->parsed()) return cmd_tomo(args);
    std::fputs(app.help().c_str(), stdout);
    return 0;
  } catch (const CliError& e) {
    std::fprintf(stderr, "{\"error\":{\"category\":\"%s\",\"message\":%s}}\n",
                 category_name(e.category), Json(e.message).dump().c_str());
    return static_cast<int>(e.category);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "{\"error\":{\"category\":\"domain\",\"message\":%s}}\n",
                 Json(std::string(e.what())).dump().c_str());
    return static_cast<int>(ErrorCategory::kDomain);
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "{\"error\":{\"category\":\"domain\",\"message\":%s}}\n",
                 Json(std::string(e.what())).dump().c_str());
    return static_cast<int>(ErrorCategory::kDomain);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\":{\"category\":\"numeric\",\"message\":%s}}\n",
                 Json(std::string(e.what())).dump().c_str());
    return static_cast<int>(ErrorCategory::kNumeric);
  }
}

}  // namespace
}  // namespace simtool

int main(int argc, char** argv) { return simtool::run(argc, argv); }
