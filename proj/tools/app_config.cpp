#include "app_config.hpp"

#include "errors.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>

namespace simtool {

namespace {

[[noreturn]] void schema_error(const std::string& message) {
  throw CliError{ErrorCategory::kSchema, message};
}

void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path + ": expected an object");
}

// Strict key check: everything present must be known.
void check_keys(const Json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) schema_error(path + ": unknown key '" + key + "'");
  }
}

double get_number(const Json& j, const std::string& path, const char* key,
                  std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    schema_error(path + ": missing required key '" + std::string(key) + "'");
  }
  const Json& v = j.at(key);
  if (!v.is_number()) schema_error(path + "." + key + ": expected a number");
  return v.get<double>();
}

bool get_bool(const Json& j, const std::string& path, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) schema_error(path + "." + key + ": expected a boolean");
  return j.at(key).get<bool>();
}

std::string get_string(const Json& j, const std::string& path, const char* key,
                       std::optional<std::string> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    schema_error(path + ": missing required key '" + std::string(key) + "'");
  }
  if (!j.at(key).is_string()) schema_error(path + "." + key + ": expected a string");
  return j.at(key).get<std::string>();
}

std::vector<double> get_number_list(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) schema_error(path + ": expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

cvqt::ChannelConfig parse_channel(const Json& j, const std::string& path) {
  require_object(j, path);
  check_keys(j, path,
             {"length_m", "attenuation_db_per_km", "temperature_k", "carrier_frequency_hz",
              "explicit_eps"});
  cvqt::ChannelConfig ch;
  ch.length_m = get_number(j, path, "length_m", 0.0);
  ch.attenuation_db_per_km = get_number(j, path, "attenuation_db_per_km", 0.0);
  ch.temperature_k = get_number(j, path, "temperature_k", 0.17);
  ch.carrier_frequency_hz = get_number(j, path, "carrier_frequency_hz", 5.35e9);
  if (j.contains("explicit_eps") && !j.at("explicit_eps").is_null()) {
    if (!j.at("explicit_eps").is_number()) {
      schema_error(path + ".explicit_eps: expected a number or null");
    }
    ch.explicit_eps = j.at("explicit_eps").get<double>();
  }
  return ch;
}

std::vector<cvqt::LossStage> parse_stages(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path + ": expected an array of stages");
  std::vector<cvqt::LossStage> stages;
  std::size_t i = 0;
  for (const auto& s : j) {
    const std::string p = path + "[" + std::to_string(i++) + "]";
    require_object(s, p);
    check_keys(s, p, {"eps", "n_env"});
    stages.push_back({get_number(s, p, "eps"), get_number(s, p, "n_env", 0.0)});
  }
  return stages;
}

cvqt::PiecewiseLinear parse_map(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path + ": expected an array of [x, y] pairs");
  std::vector<std::pair<double, double>> points;
  std::size_t i = 0;
  for (const auto& pt : j) {
    const std::string p = path + "[" + std::to_string(i++) + "]";
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
      schema_error(p + ": expected [x, y]");
    }
    points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
  }
  return cvqt::PiecewiseLinear(points);
}

void parse_protocol(const Json& j, ExperimentConfig& out) {
  const std::string path = "protocol";
  require_object(j, path);
  check_keys(j, path,
             {"s_tms_db", "gain_db", "coupler_db", "n_dev", "jpa_input_loss",
              "jpa_ent_fraction", "entanglement_channel", "feedforward_channel",
              "alice_component_losses", "bob_component_losses", "t_mc_alice", "t_mc_bob",
              "compression"});
  cvqt::ProtocolConfig cfg;
  cfg.s_tms_db = get_number(j, path, "s_tms_db");
  if (j.contains("gain_db") && j.at("gain_db").is_string()) {
    if (j.at("gain_db").get<std::string>() != "auto") {
      schema_error("protocol.gain_db: expected a number or \"auto\"");
    }
    out.gain_auto = true;
  } else {
    cfg.gain_db = get_number(j, path, "gain_db");
  }
  cfg.coupler_db = get_number(j, path, "coupler_db");
  cfg.n_dev = get_number(j, path, "n_dev", 0.0);
  cfg.jpa_input_loss = get_number(j, path, "jpa_input_loss", 0.0);
  cfg.jpa_ent_fraction = get_number(j, path, "jpa_ent_fraction", 0.5);
  if (j.contains("entanglement_channel")) {
    cfg.entanglement_channel = parse_channel(j.at("entanglement_channel"),
                                             "protocol.entanglement_channel");
  }
  if (j.contains("feedforward_channel")) {
    cfg.feedforward_channel = parse_channel(j.at("feedforward_channel"),
                                            "protocol.feedforward_channel");
  }
  if (j.contains("alice_component_losses")) {
    cfg.alice_component_losses =
        parse_stages(j.at("alice_component_losses"), "protocol.alice_component_losses");
  }
  if (j.contains("bob_component_losses")) {
    cfg.bob_component_losses =
        parse_stages(j.at("bob_component_losses"), "protocol.bob_component_losses");
  }
  if (j.contains("t_mc_alice")) cfg.t_mc_alice = parse_map(j.at("t_mc_alice"), "protocol.t_mc_alice");
  if (j.contains("t_mc_bob")) cfg.t_mc_bob = parse_map(j.at("t_mc_bob"), "protocol.t_mc_bob");
  if (j.contains("compression")) {
    const Json& c = j.at("compression");
    require_object(c, "protocol.compression");
    check_keys(c, "protocol.compression", {"enabled", "n_1db"});
    cfg.compression.enabled = get_bool(c, "protocol.compression", "enabled", false);
    cfg.compression.n_1db = get_number(c, "protocol.compression", "n_1db", 1e4);
  }
  out.protocol = cfg;
}

SweepSection parse_sweep(const Json& j) {
  const std::string path = "sweep";
  require_object(j, path);
  check_keys(j, path, {"n_in", "t_cen", "n_phases", "fixed_n_in"});
  SweepSection s;
  if (j.contains("n_in")) {
    const Json& n = j.at("n_in");
    if (n.is_object()) {
      check_keys(n, "sweep.n_in", {"log_from", "log_to", "points"});
      const double lo = get_number(n, "sweep.n_in", "log_from");
      const double hi = get_number(n, "sweep.n_in", "log_to");
      const int count = static_cast<int>(get_number(n, "sweep.n_in", "points"));
      if (lo <= 0.0 || hi <= lo || count < 2) {
        schema_error("sweep.n_in: need 0 < log_from < log_to and points >= 2");
      }
      for (int i = 0; i < count; ++i) {
        s.n_in.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) *
                                                             i / (count - 1)));
      }
    } else {
      s.n_in = get_number_list(n, "sweep.n_in");
    }
  }
  if (j.contains("t_cen")) s.t_cen = get_number_list(j.at("t_cen"), "sweep.t_cen");
  s.n_phases = static_cast<int>(get_number(j, path, "n_phases", 16.0));
  s.fixed_n_in = get_number(j, path, "fixed_n_in", 1.3);
  return s;
}

FitSection parse_fit(const Json& j, const std::filesystem::path& base) {
  const std::string path = "fit";
  require_object(j, path);
  check_keys(j, path, {"csv", "mode", "s_tms_db"});
  FitSection f;
  const std::filesystem::path csv = get_string(j, path, "csv");
  f.csv_path = csv.is_absolute() ? csv.string() : (base / csv).string();
  f.mode = get_string(j, path, "mode", std::string("two_param"));
  if (f.mode != "two_param" && f.mode != "decomposed") {
    schema_error("fit.mode: expected 'two_param' or 'decomposed'");
  }
  f.s_tms_db = get_number(j, path, "s_tms_db", 5.0);
  return f;
}

QubitSection parse_qubit(const Json& j) {
  const std::string path = "qubit";
  require_object(j, path);
  check_keys(j, path, {"kappa", "zeta", "fits", "fitted_s_tms_db", "target_s_tms_db"});
  QubitSection q;
  if (j.contains("fits")) {
    if (j.contains("kappa") || j.contains("zeta")) {
      schema_error("qubit: give either 'fits' or 'kappa'/'zeta', not both");
    }
    const Json& fits = j.at("fits");
    if (!fits.is_array()) schema_error("qubit.fits: expected an array");
    std::size_t i = 0;
    for (const auto& f : fits) {
      const std::string p = "qubit.fits[" + std::to_string(i++) + "]";
      require_object(f, p);
      check_keys(f, p, {"t_cen", "kappa", "zeta"});
      q.fits.push_back({get_number(f, p, "t_cen"),
                        {get_number(f, p, "kappa"), get_number(f, p, "zeta")}});
    }
  } else {
    q.fits.push_back({0.0, {get_number(j, path, "kappa"), get_number(j, path, "zeta")}});
  }
  q.fitted_s_tms_db = get_number(j, path, "fitted_s_tms_db", 5.0);
  if (j.contains("target_s_tms_db")) {
    q.target_s_tms_db = get_number_list(j.at("target_s_tms_db"), "qubit.target_s_tms_db");
  }
  return q;
}

TomoSection parse_tomo(const Json& j) {
  const std::string path = "tomo";
  require_object(j, path);
  check_keys(j, path,
             {"state", "n_samples", "batches", "max_order", "threshold", "write_samples",
              "write_moments"});
  TomoSection t;
  if (j.contains("state")) {
    const Json& s = j.at("state");
    require_object(s, "tomo.state");
    check_keys(s, "tomo.state", {"type", "s_tms_db", "alpha", "n_occ", "n_in", "phase"});
    t.state.type = get_string(s, "tomo.state", "type", std::string("tms"));
    if (t.state.type != "tms" && t.state.type != "coherent" && t.state.type != "thermal" &&
        t.state.type != "protocol_output") {
      schema_error("tomo.state.type: expected tms | coherent | thermal | protocol_output");
    }
    t.state.s_tms_db = get_number(s, "tomo.state", "s_tms_db", 5.0);
    if (s.contains("alpha")) {
      const auto pair = get_number_list(s.at("alpha"), "tomo.state.alpha");
      if (pair.size() != 2) schema_error("tomo.state.alpha: expected [re, im]");
      t.state.alpha = {pair[0], pair[1]};
    }
    t.state.n_occ = get_number(s, "tomo.state", "n_occ", 0.0);
    t.state.n_in = get_number(s, "tomo.state", "n_in", 1.3);
    t.state.phase = get_number(s, "tomo.state", "phase", 0.0);
  }
  const double n = get_number(j, path, "n_samples", 1e6);
  if (n < 1.0) schema_error("tomo.n_samples: must be at least 1");
  t.n_samples = static_cast<std::uint64_t>(n);
  t.batches = static_cast<std::size_t>(get_number(j, path, "batches", 100.0));
  t.max_order = static_cast<int>(get_number(j, path, "max_order", 4.0));
  t.threshold = get_number(j, path, "threshold", 4.0);
  t.write_samples = get_bool(j, path, "write_samples", false);
  t.write_moments = get_bool(j, path, "write_moments", true);
  return t;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{ErrorCategory::kIo, "cannot open config " + path};
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw CliError{ErrorCategory::kSchema, path + ": " + e.what()};
  }
  require_object(doc, "config");
  check_keys(doc, "config", {"seed", "protocol", "sweep", "fit", "qubit", "tomo", "output"});

  ExperimentConfig cfg;
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) {
      schema_error("config.seed: expected an unsigned integer");
    }
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  if (doc.contains("protocol")) parse_protocol(doc.at("protocol"), cfg);
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc.at("sweep"));
  if (doc.contains("fit")) cfg.fit = parse_fit(doc.at("fit"), base);
  if (doc.contains("qubit")) cfg.qubit = parse_qubit(doc.at("qubit"));
  if (doc.contains("tomo")) cfg.tomo = parse_tomo(doc.at("tomo"));
  if (doc.contains("output")) {
    const Json& o = doc.at("output");
    require_object(o, "output");
    check_keys(o, "output", {"dir", "format"});
    cfg.output_dir = get_string(o, "output", "dir", std::string("."));
    const std::string format = get_string(o, "output", "format", std::string("csv"));
    if (format != "csv") schema_error("output.format: only 'csv' is supported");
  }

  // Validate protocol parameters up front so schema problems surface before
  // any computation.
  if (cfg.protocol) {
    try {
      cfg.protocol->validate();
    } catch (const std::invalid_argument& e) {
      throw CliError{ErrorCategory::kDomain, std::string("protocol: ") + e.what()};
    }
  }
  return cfg;
}

}  // namespace simtool
