#include "opcqkd/states.hpp"

#include <cmath>
#include <stdexcept>

namespace opcqkd::states {

namespace {
constexpr double kNormTol = 1e-10;
constexpr double kBasisTol = 1e-8;
}  // namespace

QuditState::QuditState(CVec c) : coeffs(std::move(c)) {
  if (std::abs(coeffs.norm() - 1.0) > kNormTol) {
    throw std::invalid_argument("QuditState: coefficients are not unit norm");
  }
}

QuditState QuditState::normalized(const CVec& c) {
  const double norm = c.norm();
  if (norm == 0.0) {
    throw std::invalid_argument("QuditState::normalized: zero vector");
  }
  return QuditState(c / norm);
}

const char* pulse_role_name(PulseRole role) {
  switch (role) {
    case PulseRole::Signal: return "signal";
    case PulseRole::Decoy: return "decoy";
    case PulseRole::Vacuum: return "vacuum";
  }
  return "unknown";
}

CoherentVector attenuate(const CoherentVector& v, double target_mu) {
  if (target_mu < 0.0) {
    throw std::invalid_argument("attenuate: target_mu < 0");
  }
  if (target_mu == 0.0) {
    return CoherentVector(CVec::Zero(v.dim()));
  }
  const double mu = v.mean_photon_number();
  if (mu == 0.0) {
    throw std::invalid_argument("attenuate: zero input with target_mu > 0");
  }
  return CoherentVector(v.amps * std::sqrt(target_mu / mu));
}

int sample_photon_number(double mu, std::mt19937_64& rng) {
  if (mu < 0.0) throw std::invalid_argument("sample_photon_number: mu < 0");
  if (mu == 0.0) return 0;
  return std::poisson_distribution<int>(mu)(rng);
}

int sample_photon_number(double mu, RngSeed seed) {
  auto rng = seed.engine();
  return sample_photon_number(mu, rng);
}

QuditState to_qudit(const CoherentVector& v) {
  return QuditState::normalized(v.amps);
}

std::vector<double> born_probabilities(const QuditState& q,
                                       const std::vector<QuditState>& basis) {
  const auto d = basis.size();
  if (d == 0) throw std::invalid_argument("born_probabilities: empty basis");
  for (std::size_t k = 0; k < d; ++k) {
    if (basis[k].dim() != q.dim()) {
      throw std::invalid_argument("born_probabilities: dimension mismatch");
    }
    if (std::abs(basis[k].coeffs.norm() - 1.0) > kBasisTol) {
      throw std::invalid_argument("born_probabilities: basis vector not unit norm");
    }
    for (std::size_t l = k + 1; l < d; ++l) {
      if (std::abs(basis[k].coeffs.dot(basis[l].coeffs)) > kBasisTol) {
        throw std::invalid_argument("born_probabilities: basis is not orthogonal");
      }
    }
  }
  std::vector<double> probs(d);
  for (std::size_t k = 0; k < d; ++k) {
    probs[k] = std::norm(basis[k].coeffs.dot(q.coeffs));
  }
  return probs;
}

int measure_in_basis(const QuditState& q, const std::vector<QuditState>& basis,
                     std::mt19937_64& rng) {
  const auto probs = born_probabilities(q, basis);
  double total = 0.0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("measure_in_basis: probabilities do not sum to 1");
  }
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  double cum = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    cum += probs[k];
    if (u < cum) return static_cast<int>(k);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace opcqkd::states
