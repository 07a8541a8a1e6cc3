#pragma once

#include "opcqkd/states.hpp"

namespace opcqkd::opc {

/// Four-wave-mixing conjugator strength. s = sec(kappa*l), t = tan(kappa*l);
/// the Bogoliubov normalization s^2 - t^2 = 1 holds for |kappa*l| < pi/2.
class OpcParams {
 public:
  explicit OpcParams(double kappa_l);

  double kappa_l() const { return kappa_l_; }
  double s() const { return s_; }
  double t() const { return t_; }

 private:
  double kappa_l_;
  double s_;
  double t_;
};

/// Reflected-arm amplitude of the conjugating mirror: -i t alpha*.
Cx opc_reflect_coherent(Cx alpha, const OpcParams& p);

/// Transmitted-arm amplitude: s alpha (tracked for accounting only).
Cx opc_transmit_coherent(Cx alpha, const OpcParams& p);

/// Componentwise conjugating reflection; mode labels are preserved.
states::CoherentVector opc_reflect_multimode(const states::CoherentVector& v,
                                             const OpcParams& p);

/// Single-photon reflection. The reflected branch carries i t c_j without
/// conjugation, i.e. the input state up to the global phase i; the
/// transmitted branch weight s^2/(s^2+t^2) is returned for accounting.
struct QuditReflection {
  double transmitted_weight;
  states::QuditState reflected;
};
QuditReflection opc_reflect_qudit(const states::QuditState& c, const OpcParams& p);

/// Double pass of the HWP local to the conjugator: multiply by I_N (x) sigma_z.
states::CoherentVector apply_local_hwp(const states::CoherentVector& v, int n_cores);
states::QuditState apply_local_hwp(const states::QuditState& q, int n_cores);

}  // namespace opcqkd::opc
