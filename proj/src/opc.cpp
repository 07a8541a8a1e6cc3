#include "opcqkd/opc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace opcqkd::opc {

OpcParams::OpcParams(double kappa_l) : kappa_l_(kappa_l) {
  if (!(std::abs(kappa_l) < std::numbers::pi / 2.0)) {
    throw std::domain_error("OpcParams: |kappa_l| must be < pi/2");
  }
  s_ = 1.0 / std::cos(kappa_l);
  t_ = std::tan(kappa_l);
}

Cx opc_reflect_coherent(Cx alpha, const OpcParams& p) {
  return Cx(0.0, -p.t()) * std::conj(alpha);
}

Cx opc_transmit_coherent(Cx alpha, const OpcParams& p) {
  return p.s() * alpha;
}

states::CoherentVector opc_reflect_multimode(const states::CoherentVector& v,
                                             const OpcParams& p) {
  CVec out(v.dim());
  for (int k = 0; k < v.dim(); ++k) {
    out(k) = opc_reflect_coherent(v.amps(k), p);
  }
  return states::CoherentVector(std::move(out));
}

QuditReflection opc_reflect_qudit(const states::QuditState& c,
                                  const OpcParams& p) {
  const double s2 = p.s() * p.s();
  const double t2 = p.t() * p.t();
  // i t c_j, renormalized: t > 0 drops out and only the phase i remains.
  const CVec reflected = Cx(0.0, 1.0) * c.coeffs;
  return QuditReflection{s2 / (s2 + t2), states::QuditState(reflected)};
}

states::CoherentVector apply_local_hwp(const states::CoherentVector& v,
                                       int n_cores) {
  if (v.dim() != 2 * n_cores) {
    throw std::invalid_argument("apply_local_hwp: dimension mismatch");
  }
  CVec out = v.amps;
  for (int k = 1; k < v.dim(); k += 2) out(k) = -out(k);
  return states::CoherentVector(std::move(out));
}

states::QuditState apply_local_hwp(const states::QuditState& q, int n_cores) {
  if (q.dim() != 2 * n_cores) {
    throw std::invalid_argument("apply_local_hwp: dimension mismatch");
  }
  CVec out = q.coeffs;
  for (int k = 1; k < q.dim(); k += 2) out(k) = -out(k);
  return states::QuditState(std::move(out));
}

}  // namespace opcqkd::opc
