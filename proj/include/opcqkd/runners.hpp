#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opcqkd/protocol.hpp"

namespace opcqkd::runners {

inline constexpr const char* kArtifactName = "opcqkd";
inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr double kVerifyTolerance = 1e-8;

struct VerifyOptions {
  int dim = 4;  // 2N, even and >= 2
  int q = 5;
  int trials = 100;
  std::uint64_t seed = 1;
  channel::SegmentKind mode = channel::SegmentKind::SymmetricCoupling;
  double kappa_scale = 1.0;
};

struct VerifyReport {
  double max_deviation = 0.0;
  bool pass = false;
};

/// Draw `trials` random perturbation sequences and report the worst
/// round-trip deviation ||M_T - D||_max.
VerifyReport run_verify(const VerifyOptions& opts);

channel::SegmentKind parse_segment_kind(const std::string& name);
protocol::EveModel parse_eve_model(const std::string& name);

/// Flat-JSON session config. Unknown keys are rejected; a missing seed is
/// auto-generated and always lands in the output manifest.
protocol::SessionConfig parse_session_config(const std::string& text,
                                             const std::string& origin);
protocol::SessionConfig load_session_config(const std::string& path);

std::string verify_manifest(const VerifyOptions& opts, const VerifyReport& report,
                            bool include_timestamp = true);
std::string session_manifest(const protocol::SessionConfig& cfg,
                             const protocol::SessionStats& stats,
                             bool include_timestamp = true);

/// Human-readable QBER summary for stdout.
std::string session_summary(const protocol::SessionStats& stats);

std::vector<std::string> sweep_axes();

/// One CSV row per axis value: value,qber,gain_signal,gain_decoy,sifted_fraction.
std::string run_sweep_csv(const protocol::SessionConfig& base,
                          const std::string& axis,
                          const std::vector<double>& values);

void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace opcqkd::runners
