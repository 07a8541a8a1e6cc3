#include "opcqkd/runners.hpp"

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace opcqkd::runners {

using nlohmann::json;

namespace {

constexpr std::uint64_t kVerifyStreamTag = 17;

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Line/column of a byte offset, for parse diagnostics.
std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json config_snapshot(const protocol::SessionConfig& cfg) {
  json j;
  j["n_cores"] = cfg.n_cores;
  j["q_perturbations"] = cfg.q_perturbations;
  j["kappa_scale"] = cfg.kappa_scale;
  j["kappa_l"] = cfg.kappa_l;
  for (const auto& pulse : cfg.intensities) {
    j[std::string("mu_") + states::pulse_role_name(pulse.role)] = pulse.mu;
  }
  j["n_rounds"] = cfg.n_rounds;
  j["eve"] = cfg.eve == protocol::EveModel::InterceptResend ? "intercept_resend"
                                                            : "none";
  j["seed"] = cfg.seed;
  j["perturbation"] =
      cfg.perturbation == channel::SegmentKind::GeneralSU2N ? "general"
                                                            : "symmetric";
  j["opc_enabled"] = cfg.opc_enabled;
  j["drift"] = cfg.drift;
  j["drift_scale"] = cfg.drift_scale;
  return j;
}

json manifest_header(const std::string& command, std::uint64_t seed,
                     bool include_timestamp) {
  json j;
  j["artifact"] = kArtifactName;
  j["version"] = kArtifactVersion;
  j["command"] = command;
  if (include_timestamp) j["timestamp"] = iso_timestamp();
  j["seed"] = seed;
  return j;
}

double gain_of(const protocol::SessionStats& stats, states::PulseRole role) {
  for (const auto& tally : stats.intensities) {
    if (tally.role == role) return tally.gain;
  }
  return 0.0;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opts) {
  if (opts.dim < 2 || opts.dim % 2 != 0) {
    throw std::invalid_argument("verify: --dim must be even and >= 2");
  }
  if (opts.q < 0) throw std::invalid_argument("verify: --q must be >= 0");
  if (opts.trials < 1) throw std::invalid_argument("verify: --trials must be >= 1");

  const int n_cores = opts.dim / 2;
  const CMat d = channel::hwp_matrix(n_cores);
  const RngSeed seed{opts.seed};

  VerifyReport report;
  for (int trial = 0; trial < opts.trials; ++trial) {
    auto rng = seed.stream(kVerifyStreamTag, static_cast<std::uint64_t>(trial));
    const auto seq = channel::random_sequence(n_cores, opts.q, opts.mode,
                                              opts.kappa_scale, rng);
    const double dev = linalg::max_abs(channel::round_trip_matrix(seq) - d);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.pass = report.max_deviation <= kVerifyTolerance;
  return report;
}

channel::SegmentKind parse_segment_kind(const std::string& name) {
  if (name == "symmetric") return channel::SegmentKind::SymmetricCoupling;
  if (name == "general") return channel::SegmentKind::GeneralSU2N;
  throw std::invalid_argument("unknown mode '" + name +
                              "' (expected symmetric|general)");
}

protocol::EveModel parse_eve_model(const std::string& name) {
  if (name == "none") return protocol::EveModel::None;
  if (name == "intercept_resend") return protocol::EveModel::InterceptResend;
  throw std::invalid_argument("unknown eve model '" + name +
                              "' (expected none|intercept_resend)");
}

protocol::SessionConfig parse_session_config(const std::string& text,
                                             const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    throw std::runtime_error(origin + ":" + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) {
    throw std::runtime_error(origin + ": config must be a JSON object");
  }

  protocol::SessionConfig cfg;
  double mu_signal = 0.5;
  double mu_decoy = 0.1;
  double mu_vacuum = 0.0;
  bool seed_given = false;

  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "n_cores") {
        cfg.n_cores = value.get<int>();
      } else if (key == "q_perturbations") {
        cfg.q_perturbations = value.get<int>();
      } else if (key == "kappa_scale") {
        cfg.kappa_scale = value.get<double>();
      } else if (key == "kappa_l") {
        cfg.kappa_l = value.get<double>();
      } else if (key == "mu_signal") {
        mu_signal = value.get<double>();
      } else if (key == "mu_decoy") {
        mu_decoy = value.get<double>();
      } else if (key == "mu_vacuum") {
        mu_vacuum = value.get<double>();
      } else if (key == "n_rounds") {
        cfg.n_rounds = value.get<std::uint64_t>();
      } else if (key == "eve") {
        cfg.eve = parse_eve_model(value.get<std::string>());
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
        seed_given = true;
      } else if (key == "perturbation") {
        cfg.perturbation = parse_segment_kind(value.get<std::string>());
      } else if (key == "opc_enabled") {
        cfg.opc_enabled = value.get<bool>();
      } else if (key == "drift") {
        cfg.drift = value.get<bool>();
      } else if (key == "drift_scale") {
        cfg.drift_scale = value.get<double>();
      } else {
        throw std::runtime_error(origin + ": unknown config field '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw std::runtime_error(origin + ": field '" + key + "': " + e.what());
    }
  }

  cfg.intensities = {{mu_signal, states::PulseRole::Signal},
                     {mu_decoy, states::PulseRole::Decoy},
                     {mu_vacuum, states::PulseRole::Vacuum}};
  if (!seed_given) {
    cfg.seed = std::random_device{}();
  }
  return cfg;
}

protocol::SessionConfig load_session_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_session_config(buf.str(), path);
}

std::string verify_manifest(const VerifyOptions& opts, const VerifyReport& report,
                            bool include_timestamp) {
  json j = manifest_header("verify", opts.seed, include_timestamp);
  j["config"] = {{"dim", opts.dim},
                 {"q", opts.q},
                 {"trials", opts.trials},
                 {"seed", opts.seed},
                 {"mode", opts.mode == channel::SegmentKind::GeneralSU2N
                              ? "general"
                              : "symmetric"},
                 {"kappa_scale", opts.kappa_scale}};
  j["results"] = {{"max_deviation", report.max_deviation},
                  {"tolerance", kVerifyTolerance},
                  {"pass", report.pass}};
  return j.dump(2) + "\n";
}

std::string session_manifest(const protocol::SessionConfig& cfg,
                             const protocol::SessionStats& stats,
                             bool include_timestamp) {
  json j = manifest_header("session", cfg.seed, include_timestamp);
  j["config"] = config_snapshot(cfg);

  json results;
  results["sent"] = stats.sent;
  results["detected"] = stats.detected;
  results["sifted"] = stats.sifted;
  results["errors"] = stats.errors;
  results["multi_photon"] = stats.multi_photon;
  results["qber"] = stats.qber;
  results["qber_by_basis"] = stats.qber_by_basis;
  results["sifted_by_basis"] = stats.sifted_by_basis;
  results["errors_by_basis"] = stats.errors_by_basis;
  results["sifted_fraction"] = stats.sifted_fraction;
  json intensities = json::array();
  for (const auto& tally : stats.intensities) {
    intensities.push_back({{"role", states::pulse_role_name(tally.role)},
                           {"mu", tally.mu},
                           {"sent", tally.sent},
                           {"detected", tally.detected},
                           {"gain", tally.gain}});
  }
  results["intensities"] = intensities;
  j["results"] = results;
  return j.dump(2) + "\n";
}

std::string session_summary(const protocol::SessionStats& stats) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %12" PRIu64 "\n", "sent", stats.sent);
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %12" PRIu64 "\n", "detected",
                stats.detected);
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %12" PRIu64 "\n", "sifted",
                stats.sifted);
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %12" PRIu64 "\n", "errors",
                stats.errors);
  out << line;
  std::snprintf(line, sizeof(line), "%-12s %12.6f  (basis 0: %.6f, basis 1: %.6f)\n",
                "qber", stats.qber, stats.qber_by_basis[0], stats.qber_by_basis[1]);
  out << line;
  out << "gain        ";
  for (const auto& tally : stats.intensities) {
    std::snprintf(line, sizeof(line), " %s=%.6f",
                  states::pulse_role_name(tally.role), tally.gain);
    out << line;
  }
  out << "\n";
  return out.str();
}

std::vector<std::string> sweep_axes() {
  return {"q_perturbations", "n_cores", "mu_signal", "kappa_l"};
}

std::string run_sweep_csv(const protocol::SessionConfig& base,
                          const std::string& axis,
                          const std::vector<double>& values) {
  const auto axes = sweep_axes();
  if (std::find(axes.begin(), axes.end(), axis) == axes.end()) {
    throw std::invalid_argument("unknown sweep axis '" + axis + "'");
  }
  if (values.empty()) {
    throw std::invalid_argument("sweep: values list must not be empty");
  }

  std::ostringstream csv;
  csv << "value,qber,gain_signal,gain_decoy,sifted_fraction\n";
  for (double value : values) {
    protocol::SessionConfig cfg = base;
    if (axis == "q_perturbations") {
      cfg.q_perturbations = static_cast<int>(value);
    } else if (axis == "n_cores") {
      cfg.n_cores = static_cast<int>(value);
    } else if (axis == "mu_signal") {
      for (auto& pulse : cfg.intensities) {
        if (pulse.role == states::PulseRole::Signal) pulse.mu = value;
      }
    } else {
      cfg.kappa_l = value;
    }
    const auto stats = protocol::run_session(cfg);
    csv << format_g(value) << ',' << format_g(stats.qber) << ','
        << format_g(gain_of(stats, states::PulseRole::Signal)) << ','
        << format_g(gain_of(stats, states::PulseRole::Decoy)) << ','
        << format_g(stats.sifted_fraction) << "\n";
  }
  return csv.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write output file '" + path + "'");
    }
    out << content;
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace opcqkd::runners
