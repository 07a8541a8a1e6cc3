#pragma once

#include <vector>

#include "opcqkd/channel.hpp"
#include "opcqkd/linalg.hpp"

namespace opcqkd::states {

/// Multimode coherent amplitudes over the 2N flattened modes.
struct CoherentVector {
  CVec amps;

  CoherentVector() = default;
  explicit CoherentVector(CVec a) : amps(std::move(a)) {}

  int dim() const { return static_cast<int>(amps.size()); }
  double mean_photon_number() const { return amps.squaredNorm(); }
  channel::ModeLabel label(int flat) const {
    return channel::ModeLabel::from_index(flat, dim() / 2);
  }
};

/// Single-photon state over d modes; unit norm enforced on construction.
struct QuditState {
  CVec coeffs;

  explicit QuditState(CVec c);
  static QuditState normalized(const CVec& c);

  int dim() const { return static_cast<int>(coeffs.size()); }
};

enum class PulseRole { Signal, Decoy, Vacuum };

struct PulseIntensity {
  double mu = 0.0;
  PulseRole role = PulseRole::Signal;
};

const char* pulse_role_name(PulseRole role);

/// Uniform rescaling so the mean photon number becomes target_mu; relative
/// phases are untouched.
CoherentVector attenuate(const CoherentVector& v, double target_mu);

/// Poisson photon-number draw of a weak pulse.
int sample_photon_number(double mu, std::mt19937_64& rng);
int sample_photon_number(double mu, RngSeed seed);

/// Conditional single-photon wavefunction of a multimode pulse.
QuditState to_qudit(const CoherentVector& v);

/// |<basis_k|q>|^2 for every basis element; validates orthonormality.
std::vector<double> born_probabilities(const QuditState& q,
                                       const std::vector<QuditState>& basis);

/// Projective measurement outcome sampled from the Born probabilities.
int measure_in_basis(const QuditState& q, const std::vector<QuditState>& basis,
                     std::mt19937_64& rng);

}  // namespace opcqkd::states
