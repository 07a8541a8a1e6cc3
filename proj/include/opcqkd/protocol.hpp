#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "opcqkd/channel.hpp"
#include "opcqkd/opc.hpp"
#include "opcqkd/states.hpp"

namespace opcqkd::protocol {

/// A pair of mutually unbiased bases over d = 2N modes, both realizable as
/// pure phase patterns on the equal-amplitude template.
struct MubSet {
  int dim = 2;
  std::array<std::vector<states::QuditState>, 2> bases;
};

/// Basis 0 is the discrete Fourier basis; basis 1 adds the quadratic phase
/// ladder e^{i pi j^2 / d}, which for even d makes every cross overlap
/// exactly 1/d (quadratic Gauss sum). d must be a power of two here.
MubSet build_mub_pair(int d);

/// Binary tree of X(pi/4) couplers with vacuum idle ports: depth m maps a
/// single amplitude beta to 2^m outputs of equal magnitude |beta| 2^{-m/2}.
states::CoherentVector csg_tree(Cx beta, int depth);

/// Per-mode phases that rotate every component onto the positive real axis,
/// and the resulting equal-phase vector.
struct Equalized {
  states::CoherentVector vec;
  std::vector<double> theta;
};
Equalized equalize_phases(const states::CoherentVector& v);

struct EncodingChoice {
  int basis_id = 0;
  int symbol = 0;
  std::vector<double> theta;  // filled by encode()
};

/// The mode pattern a zero-phase pulse exhibits back at Bob:
/// -i D (1,...,1)/sqrt(d), i.e. -i on H slots and +i on V slots.
CVec canonical_return_template(int d);

/// Phase-shifter settings turning `ret_template` into the chosen MUB state.
/// Fails if the target is not reachable by phases alone.
std::vector<double> encode_against(const EncodingChoice& choice, const MubSet& mubs,
                                   const CVec& ret_template);

/// encode_against() on the canonical equal-amplitude return template.
std::vector<double> encode(const EncodingChoice& choice, const MubSet& mubs);

/// Intercept-resend attack: measure in a uniformly chosen basis and resend
/// the observed basis state.
states::QuditState eve_intercept_resend(const states::QuditState& state,
                                        const MubSet& mubs, std::mt19937_64& rng);

enum class EveModel { None, InterceptResend };

struct SessionConfig {
  int n_cores = 1;
  int q_perturbations = 5;
  double kappa_scale = 1.0;
  double kappa_l = 0.6;
  std::vector<states::PulseIntensity> intensities = {
      {0.5, states::PulseRole::Signal},
      {0.1, states::PulseRole::Decoy},
      {0.0, states::PulseRole::Vacuum}};
  std::uint64_t n_rounds = 1000;
  EveModel eve = EveModel::None;
  std::uint64_t seed = 1;
  channel::SegmentKind perturbation = channel::SegmentKind::SymmetricCoupling;
  bool opc_enabled = true;   // false swaps the conjugator for a plain mirror
  bool drift = false;        // perturb segments between rounds instead of redrawing
  double drift_scale = 0.05;

  int dim() const { return 2 * n_cores; }
};

struct IntensityTally {
  states::PulseRole role = states::PulseRole::Signal;
  double mu = 0.0;
  std::uint64_t sent = 0;
  std::uint64_t detected = 0;
  double gain = 0.0;
};

struct SessionStats {
  std::uint64_t sent = 0;
  std::uint64_t detected = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  std::uint64_t multi_photon = 0;
  std::array<std::uint64_t, 2> sifted_by_basis{0, 0};
  std::array<std::uint64_t, 2> errors_by_basis{0, 0};
  double qber = 0.0;
  std::array<double, 2> qber_by_basis{0.0, 0.0};
  double sifted_fraction = 0.0;
  std::vector<IntensityTally> intensities;
};

struct OpcPipeline {
  opc::OpcParams params{0.6};
  bool enabled = true;       // false swaps the conjugator for a plain mirror
  double target_mu = 0.5;
};

/// One full excursion of the delayed slots: forward propagation, reflection
/// (conjugating or plain), the local HWP, Alice's per-slot phases, uniform
/// attenuation to target_mu, back propagation, and collection of the
/// zero-residual detection bin.
CVec transmit_encoded(const states::CoherentVector& source,
                      const std::vector<double>& slot_phases,
                      const channel::PerturbationSequence& seq,
                      const OpcPipeline& pipeline);

/// Full HD-BB84 session over the autocompensated loop.
SessionStats run_session(const SessionConfig& cfg);

}  // namespace opcqkd::protocol
