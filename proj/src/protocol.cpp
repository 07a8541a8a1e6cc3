#include "opcqkd/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace opcqkd::protocol {

namespace {

// Substream tags for the per-round RNG derivation.
constexpr std::uint64_t kChannelStream = 1;
constexpr std::uint64_t kAliceStream = 2;
constexpr std::uint64_t kBobStream = 3;
constexpr std::uint64_t kEveStream = 4;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
  int m = 0;
  while ((1 << m) < n) ++m;
  return m;
}

}  // namespace

MubSet build_mub_pair(int d) {
  if (d < 2 || !is_power_of_two(d)) {
    throw std::invalid_argument("build_mub_pair: d must be a power of two >= 2");
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  MubSet mubs;
  mubs.dim = d;
  for (int which = 0; which < 2; ++which) {
    mubs.bases[which].reserve(d);
    for (int k = 0; k < d; ++k) {
      CVec v(d);
      for (int j = 0; j < d; ++j) {
        double phase = 2.0 * std::numbers::pi * j * k / d;
        if (which == 1) {
          phase += std::numbers::pi * j * j / d;
        }
        v(j) = norm * std::exp(Cx(0.0, phase));
      }
      mubs.bases[which].emplace_back(std::move(v));
    }
  }
  return mubs;
}

states::CoherentVector csg_tree(Cx beta, int depth) {
  if (depth < 1) throw std::invalid_argument("csg_tree: depth must be >= 1");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Cx> amps{beta};
  for (int stage = 0; stage < depth; ++stage) {
    std::vector<Cx> next(amps.size() * 2);
    for (std::size_t k = 0; k < amps.size(); ++k) {
      // X(pi/4) coupler with a vacuum idle port.
      next[2 * k] = amps[k] * inv_sqrt2;
      next[2 * k + 1] = Cx(0.0, 1.0) * amps[k] * inv_sqrt2;
    }
    amps.swap(next);
  }
  CVec out(static_cast<int>(amps.size()));
  for (std::size_t k = 0; k < amps.size(); ++k) out(static_cast<int>(k)) = amps[k];
  return states::CoherentVector(std::move(out));
}

Equalized equalize_phases(const states::CoherentVector& v) {
  Equalized out;
  out.theta.resize(v.dim());
  CVec eq(v.dim());
  for (int k = 0; k < v.dim(); ++k) {
    const Cx a = v.amps(k);
    if (a == Cx(0.0, 0.0)) {
      throw std::invalid_argument("equalize_phases: zero component");
    }
    out.theta[k] = -std::arg(a);
    eq(k) = std::abs(a);
  }
  out.vec = states::CoherentVector(std::move(eq));
  return out;
}

CVec canonical_return_template(int d) {
  if (d < 2 || d % 2 != 0) {
    throw std::invalid_argument("canonical_return_template: d must be even >= 2");
  }
  CVec t(d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    t(j) = Cx(0.0, j % 2 == 0 ? -norm : norm);  // -i D / sqrt(d)
  }
  return t;
}

std::vector<double> encode_against(const EncodingChoice& choice,
                                   const MubSet& mubs, const CVec& ret_template) {
  if (choice.basis_id < 0 || choice.basis_id > 1) {
    throw std::invalid_argument("encode: basis_id must be 0 or 1");
  }
  if (choice.symbol < 0 || choice.symbol >= mubs.dim) {
    throw std::invalid_argument("encode: symbol outside [0, d)");
  }
  if (ret_template.size() != mubs.dim) {
    throw std::invalid_argument("encode: template dimension mismatch");
  }
  const CVec& target = mubs.bases[choice.basis_id][choice.symbol].coeffs;
  std::vector<double> theta(mubs.dim);
  for (int j = 0; j < mubs.dim; ++j) {
    if (std::abs(ret_template(j)) == 0.0) {
      throw std::invalid_argument("encode: template has a zero component");
    }
    theta[j] = std::arg(target(j)) - std::arg(ret_template(j));
  }
  // Phases can only redirect, not reshape: verify the post-condition.
  CVec reached(mubs.dim);
  for (int j = 0; j < mubs.dim; ++j) {
    reached(j) = std::exp(Cx(0.0, theta[j])) * ret_template(j);
  }
  reached /= reached.norm();
  if ((reached - target).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument(
        "encode: target state is not reachable by phases alone");
  }
  return theta;
}

std::vector<double> encode(const EncodingChoice& choice, const MubSet& mubs) {
  return encode_against(choice, mubs, canonical_return_template(mubs.dim));
}

states::QuditState eve_intercept_resend(const states::QuditState& state,
                                        const MubSet& mubs,
                                        std::mt19937_64& rng) {
  const int basis = static_cast<int>(std::uniform_int_distribution<int>(0, 1)(rng));
  const int outcome = states::measure_in_basis(state, mubs.bases[basis], rng);
  return mubs.bases[basis][outcome];
}

CVec transmit_encoded(const states::CoherentVector& source,
                      const std::vector<double>& slot_phases,
                      const channel::PerturbationSequence& seq,
                      const OpcPipeline& pipeline) {
  const int d = seq.dim();
  if (source.dim() != d || static_cast<int>(slot_phases.size()) != d) {
    throw std::invalid_argument("transmit_encoded: dimension mismatch");
  }
  const CMat forward = channel::forward_matrix(seq);
  const CMat backward = channel::backward_matrix(seq);
  const CMat hwp = channel::hwp_matrix(seq.n_cores);
  const auto delays = channel::ModalDelays::uniform_spacing(d);

  // Each mode travels in its own delay slot; within a slot Alice's phase is
  // a plain scalar, which is what lets it commute past the return channel.
  std::vector<CVec> slots(d);
  double energy = 0.0;
  for (int j = 0; j < d; ++j) {
    CVec w = forward * (source.amps(j) * CVec::Unit(d, j));
    if (pipeline.enabled) {
      w = Cx(0.0, -pipeline.params.t()) * w.conjugate();
      w = hwp * w;
    }
    w *= std::exp(Cx(0.0, slot_phases[j]));
    energy += w.squaredNorm();
    slots[j] = std::move(w);
  }

  const double scale = (energy > 0.0 && pipeline.target_mu > 0.0)
                           ? std::sqrt(pipeline.target_mu / energy)
                           : 0.0;

  // Return trip and OFD unwinding: component k of slot j carries residual
  // delay tau_j - tau_k, so only the diagonal lands in the detection bin.
  CVec bin = CVec::Zero(d);
  for (int j = 0; j < d; ++j) {
    const CVec y = backward * (scale * slots[j]);
    for (int k = 0; k < d; ++k) {
      if (delays.residual(j, k) == 0.0) bin(k) += y(k);
    }
  }
  return bin;
}

SessionStats run_session(const SessionConfig& cfg) {
  if (cfg.n_rounds < 1) {
    throw std::invalid_argument("run_session: n_rounds must be >= 1");
  }
  const int d = cfg.dim();
  if (!is_power_of_two(d) || d < 2) {
    throw std::invalid_argument("run_session: 2*n_cores must be a power of two >= 2");
  }
  if (cfg.intensities.empty()) {
    throw std::invalid_argument("run_session: at least one pulse intensity required");
  }
  if (cfg.q_perturbations < 0) {
    throw std::invalid_argument("run_session: q_perturbations must be >= 0");
  }

  const MubSet mubs = build_mub_pair(d);
  const states::CoherentVector source = csg_tree(Cx(1.0, 0.0), log2_exact(d));
  const RngSeed seed{cfg.seed};

  SessionStats stats;
  stats.intensities.reserve(cfg.intensities.size());
  for (const auto& pulse : cfg.intensities) {
    stats.intensities.push_back({pulse.role, pulse.mu, 0, 0, 0.0});
  }

  channel::PerturbationSequence seq;
  seq.n_cores = cfg.n_cores;

  for (std::uint64_t round = 0; round < cfg.n_rounds; ++round) {
    auto channel_rng = seed.stream(kChannelStream, round);
    auto alice_rng = seed.stream(kAliceStream, round);
    auto bob_rng = seed.stream(kBobStream, round);

    if (cfg.drift && round > 0) {
      for (auto& seg : seq.segments) {
        const CMat dc = linalg::random_symmetric_coupling(
            d, cfg.kappa_scale, cfg.kappa_scale, channel_rng);
        const CMat step = linalg::mat_exp(dc, cfg.drift_scale);
        if (seg.kind == channel::SegmentKind::SymmetricCoupling) {
          // A S A keeps both symmetry and unitarity.
          seg = channel::ChannelSegment(step * seg.forward * step, seg.kind);
        } else {
          seg = channel::ChannelSegment(seg.forward * step, seg.kind);
        }
      }
    } else {
      seq = channel::random_sequence(cfg.n_cores, cfg.q_perturbations,
                                     cfg.perturbation, cfg.kappa_scale,
                                     channel_rng);
    }

    // Alice's choices.
    EncodingChoice choice;
    choice.basis_id = std::uniform_int_distribution<int>(0, 1)(alice_rng);
    choice.symbol = std::uniform_int_distribution<int>(0, d - 1)(alice_rng);
    const std::size_t pulse_idx = std::uniform_int_distribution<std::size_t>(
        0, cfg.intensities.size() - 1)(alice_rng);
    const auto& pulse = cfg.intensities[pulse_idx];
    choice.theta = encode(choice, mubs);

    // The same phase pass also cancels the coupler-tree phases, which arrive
    // at Alice conjugated.
    std::vector<double> slot_phases(d);
    for (int j = 0; j < d; ++j) {
      slot_phases[j] = choice.theta[j] + std::arg(source.amps(j));
    }

    OpcPipeline pipeline{opc::OpcParams(cfg.kappa_l), cfg.opc_enabled, pulse.mu};
    const CVec bin = transmit_encoded(source, slot_phases, seq, pipeline);

    ++stats.sent;
    ++stats.intensities[pulse_idx].sent;

    const double mu_bin = bin.squaredNorm();
    const int photons = states::sample_photon_number(mu_bin, bob_rng);
    if (photons == 0) continue;

    ++stats.detected;
    ++stats.intensities[pulse_idx].detected;
    if (photons >= 2) ++stats.multi_photon;

    states::QuditState qudit = states::to_qudit(states::CoherentVector(bin));
    if (cfg.eve == EveModel::InterceptResend) {
      auto eve_rng = seed.stream(kEveStream, round);
      qudit = eve_intercept_resend(qudit, mubs, eve_rng);
    }

    const int bob_basis = std::uniform_int_distribution<int>(0, 1)(bob_rng);
    const int outcome =
        states::measure_in_basis(qudit, mubs.bases[bob_basis], bob_rng);

    if (bob_basis == choice.basis_id) {
      ++stats.sifted;
      ++stats.sifted_by_basis[bob_basis];
      if (outcome != choice.symbol) {
        ++stats.errors;
        ++stats.errors_by_basis[bob_basis];
      }
    }
  }

  stats.qber = stats.sifted > 0
                   ? static_cast<double>(stats.errors) / stats.sifted
                   : 0.0;
  for (int b = 0; b < 2; ++b) {
    stats.qber_by_basis[b] =
        stats.sifted_by_basis[b] > 0
            ? static_cast<double>(stats.errors_by_basis[b]) / stats.sifted_by_basis[b]
            : 0.0;
  }
  stats.sifted_fraction =
      stats.sent > 0 ? static_cast<double>(stats.sifted) / stats.sent : 0.0;
  for (auto& tally : stats.intensities) {
    tally.gain = tally.sent > 0
                     ? static_cast<double>(tally.detected) / tally.sent
                     : 0.0;
  }
  return stats;
}

}  // namespace opcqkd::protocol
