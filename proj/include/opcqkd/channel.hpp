#pragma once

#include <vector>

#include "opcqkd/linalg.hpp"

namespace opcqkd::channel {

enum class Polarization { H, V };

/// Mode addressing: 2N modes ordered 1H, 1V, 2H, 2V, ..., NH, NV.
struct ModeLabel {
  int core = 1;  // 1-based
  Polarization pol = Polarization::H;

  int flat_index() const {
    return 2 * (core - 1) + (pol == Polarization::V ? 1 : 0);
  }
  static ModeLabel from_index(int flat, int n_cores);
};

enum class SegmentKind { SymmetricCoupling, GeneralSU2N };

/// One z-invariant stretch of the perturbed link. The matrix already folds
/// in the propagation length; z_length is metadata.
struct ChannelSegment {
  CMat forward;
  SegmentKind kind = SegmentKind::SymmetricCoupling;
  double z_length = 1.0;

  ChannelSegment(CMat fwd, SegmentKind k, double z = 1.0);
};

struct PerturbationSequence {
  std::vector<ChannelSegment> segments;
  int n_cores = 1;

  int dim() const { return 2 * n_cores; }
  int q() const { return static_cast<int>(segments.size()); }
};

/// Double-pass half-wave plate: I_N (x) sigma_z, +1 on H slots, -1 on V.
CMat hwp_matrix(int n_cores);

/// Back-propagation matrix of a segment: D S^T D. For the symmetric
/// coupling class this coincides with D S D.
CMat reflect(const CMat& s);
CMat reflect(const ChannelSegment& seg);

/// M = S_1 ... S_q acting on column vectors; empty sequence gives I.
CMat forward_matrix(const PerturbationSequence& seq);

/// R_q ... R_1 with R_k = reflect(S_k).
CMat backward_matrix(const PerturbationSequence& seq);

/// Full loop Bob -> conjugator -> Bob: R_q ... R_1 D S_1* ... S_q*.
/// Equals hwp_matrix(N) for any sequence of unitary segments.
CMat round_trip_matrix(const PerturbationSequence& seq);

CVec propagate(const CVec& amplitudes, const CMat& m);

/// OFD bookkeeping: per-mode launch delays, unwound on return. A component
/// launched in slot j and detected on mode k carries residual delay
/// tau_j - tau_k; only zero-residual components land in the detection bin.
struct ModalDelays {
  std::vector<double> tau;

  static ModalDelays uniform_spacing(int dim, double spacing = 1.0);
  double residual(int launch_mode, int detect_mode) const {
    return tau.at(launch_mode) - tau.at(detect_mode);
  }
};

ChannelSegment random_symmetric_segment(int n_cores, double kappa_scale,
                                        std::mt19937_64& rng, double z = 1.0);
ChannelSegment haar_segment(int n_cores, std::mt19937_64& rng);
PerturbationSequence random_sequence(int n_cores, int q, SegmentKind kind,
                                     double kappa_scale, std::mt19937_64& rng);

}  // namespace opcqkd::channel
