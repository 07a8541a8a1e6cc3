#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace opcqkd {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Seed for every randomized generator in the library. Independent
/// substreams are derived by splitmix64 mixing so that distinct
/// (tag, index) pairs never share engine state.
struct RngSeed {
  std::uint64_t value = 1;

  std::mt19937_64 engine() const;
  std::mt19937_64 stream(std::uint64_t tag, std::uint64_t index = 0) const;
};

namespace linalg {

/// One SU(2) factor acting on the (i, j) plane:
///   Z(alpha) Z(delta) X(theta) Z(-delta)
/// with Z(phi) = diag(1, e^{i phi}) and X(theta) the symmetric coupler
/// (cos theta on the diagonal, i sin theta off it). The alpha retarder
/// sits on index j, so a factor with theta = 0 is a single-mode phase.
struct Su2Params {
  double theta = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  int i = 0;
  int j = 1;
};

/// Entrywise max-modulus norm.
double max_abs(const CMat& m);

/// exp(i * scale * a). Hermitian input goes through an eigendecomposition,
/// anything else through scaling-and-squaring on the truncated series.
CMat mat_exp(const CMat& a, double scale);

/// ||U^dag U - I||_max <= tol
bool is_unitary(const CMat& u, double tol);

/// ||U - U^T||_max <= tol
bool is_symmetric(const CMat& u, double tol);

/// Real symmetric coupling matrix: diagonal entries uniform on
/// (-beta_scale, beta_scale), off-diagonal pairs uniform on
/// (-kappa_scale, kappa_scale).
CMat random_symmetric_coupling(int dim, double kappa_scale, double beta_scale,
                               std::mt19937_64& rng);
CMat random_symmetric_coupling(int dim, double kappa_scale, RngSeed seed);

/// Haar-distributed special unitary via QR of a Ginibre matrix with the
/// R-diagonal phase correction; determinant normalized to 1.
CMat haar_unitary(int dim, std::mt19937_64& rng);
CMat haar_unitary(int dim, RngSeed seed);

/// Identity except for the 2x2 block of p on the (p.i, p.j) plane.
CMat su2_embed(const Su2Params& p, int dim);

/// Ordered product su2_embed(f[0]) * su2_embed(f[1]) * ...
CMat su2_product(const std::vector<Su2Params>& factors, int dim);

/// Factor a unitary into embedded SU(2) blocks by Givens-style column
/// elimination (lexicographic pivot order), followed by single-mode
/// retarders carrying the residual diagonal phases. The su2_product of
/// the result reproduces the input.
std::vector<Su2Params> factor_su2n(const CMat& u, double tol);

}  // namespace linalg
}  // namespace opcqkd
