#include "opcqkd/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace opcqkd {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 RngSeed::engine() const {
  return std::mt19937_64(value);
}

std::mt19937_64 RngSeed::stream(std::uint64_t tag, std::uint64_t index) const {
  std::uint64_t state = value;
  (void)splitmix64(state);
  state ^= splitmix64(state) + tag;
  state ^= splitmix64(state) + index;
  return std::mt19937_64(splitmix64(state));
}

namespace linalg {

namespace {

void require_square(const CMat& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  }
}

bool is_hermitian(const CMat& a, double tol) {
  return max_abs(a - a.adjoint()) <= tol;
}

// exp(X) by scaling-and-squaring on the Taylor series.
CMat series_exp(const CMat& x) {
  const int n = static_cast<int>(x.rows());
  double norm = x.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm
  int squarings = 0;
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  const CMat y = x / std::pow(2.0, squarings);
  CMat acc = CMat::Identity(n, n);
  CMat term = CMat::Identity(n, n);
  for (int k = 1; k <= 64; ++k) {
    term = (term * y) / static_cast<double>(k);
    acc += term;
    if (max_abs(term) < 1e-18 * std::max(1.0, max_abs(acc))) break;
  }
  for (int k = 0; k < squarings; ++k) acc = acc * acc;
  return acc;
}

}  // namespace

double max_abs(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

CMat mat_exp(const CMat& a, double scale) {
  require_square(a, "mat_exp");
  const int n = static_cast<int>(a.rows());
  if (max_abs(a) == 0.0) return CMat::Identity(n, n);
  const double htol = 1e-12 * std::max(1.0, max_abs(a));
  if (is_hermitian(a, htol)) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("mat_exp: eigendecomposition failed");
    }
    CVec phases(n);
    for (int k = 0; k < n; ++k) {
      phases(k) = std::exp(Cx(0.0, scale * es.eigenvalues()(k)));
    }
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
  }
  return series_exp(Cx(0.0, scale) * a);
}

bool is_unitary(const CMat& u, double tol) {
  require_square(u, "is_unitary");
  const int n = static_cast<int>(u.rows());
  return max_abs(u.adjoint() * u - CMat::Identity(n, n)) <= tol;
}

bool is_symmetric(const CMat& u, double tol) {
  require_square(u, "is_symmetric");
  return max_abs(u - u.transpose()) <= tol;
}

CMat random_symmetric_coupling(int dim, double kappa_scale, double beta_scale,
                               std::mt19937_64& rng) {
  if (dim < 1) throw std::invalid_argument("random_symmetric_coupling: dim < 1");
  auto draw = [&rng](double scale) {
    if (scale == 0.0) return 0.0;
    return std::uniform_real_distribution<double>(-scale, scale)(rng);
  };
  CMat c = CMat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    c(i, i) = draw(beta_scale);
    for (int j = i + 1; j < dim; ++j) {
      const double kappa = draw(kappa_scale);
      c(i, j) = kappa;
      c(j, i) = kappa;
    }
  }
  return c;
}

CMat random_symmetric_coupling(int dim, double kappa_scale, RngSeed seed) {
  auto rng = seed.engine();
  return random_symmetric_coupling(dim, kappa_scale, kappa_scale, rng);
}

CMat haar_unitary(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim < 1");
  if (dim == 1) return CMat::Ones(1, 1);  // SU(1) = {1}
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      z(i, j) = Cx(gauss(rng), gauss(rng));
    }
  }
  Eigen::HouseholderQR<CMat> qr(z);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Cx d = r(k, k);
    q.col(k) *= (d == Cx(0.0, 0.0)) ? Cx(1.0, 0.0) : d / std::abs(d);
  }
  // Force det = 1: spread the determinant phase evenly over the columns.
  const double det_arg = std::arg(q.determinant());
  q *= std::exp(Cx(0.0, -det_arg / dim));
  return q;
}

CMat haar_unitary(int dim, RngSeed seed) {
  auto rng = seed.engine();
  return haar_unitary(dim, rng);
}

CMat su2_embed(const Su2Params& p, int dim) {
  if (p.i == p.j || p.i < 0 || p.j < 0 || p.i >= dim || p.j >= dim) {
    throw std::out_of_range("su2_embed: invalid subspace indices");
  }
  const Cx retard = std::exp(Cx(0.0, p.alpha));
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  CMat e = CMat::Identity(dim, dim);
  e(p.i, p.i) = c;
  e(p.i, p.j) = Cx(0.0, s) * std::exp(Cx(0.0, -p.delta));
  e(p.j, p.i) = retard * Cx(0.0, s) * std::exp(Cx(0.0, p.delta));
  e(p.j, p.j) = retard * c;
  return e;
}

CMat su2_product(const std::vector<Su2Params>& factors, int dim) {
  CMat p = CMat::Identity(dim, dim);
  for (const auto& f : factors) p = p * su2_embed(f, dim);
  return p;
}

std::vector<Su2Params> factor_su2n(const CMat& u, double tol) {
  require_square(u, "factor_su2n");
  if (!is_unitary(u, tol)) {
    throw std::invalid_argument("factor_su2n: input is not unitary within tolerance");
  }
  const int n = static_cast<int>(u.rows());
  CMat w = u;
  std::vector<Su2Params> rotations;

  // Null the subdiagonal column by column; each step left-multiplies by a
  // block on the (pivot, row) plane chosen so the row entry cancels:
  //   tan(theta) e^{i delta} = i w(r,c) / w(c,c).
  for (int c = 0; c < n - 1; ++c) {
    for (int r = c + 1; r < n; ++r) {
      const Cx a = w(c, c);
      const Cx b = w(r, c);
      if (std::abs(b) <= 1e-15) {
        w(r, c) = 0.0;
        continue;
      }
      const double theta = std::atan2(std::abs(b), std::abs(a));
      const double delta =
          (std::abs(a) <= 1e-15) ? 0.0 : std::arg(Cx(0.0, 1.0) * b / a);
      const Su2Params g{theta, delta, 0.0, c, r};
      const double cc = std::cos(theta);
      const double ss = std::sin(theta);
      const Cx g01 = Cx(0.0, ss) * std::exp(Cx(0.0, -delta));
      const Cx g10 = Cx(0.0, ss) * std::exp(Cx(0.0, delta));
      for (int k = 0; k < n; ++k) {
        const Cx top = w(c, k);
        const Cx bot = w(r, k);
        w(c, k) = cc * top + g01 * bot;
        w(r, k) = g10 * top + cc * bot;
      }
      w(r, c) = 0.0;
      rotations.push_back(g);
    }
  }

  // w is now diagonal with unit-modulus entries: u = G_1^dag ... G_m^dag w,
  // and G(theta, delta)^dag = G(-theta, delta).
  std::vector<Su2Params> factors;
  factors.reserve(rotations.size() + n);
  for (const auto& g : rotations) {
    factors.push_back({-g.theta, g.delta, 0.0, g.i, g.j});
  }
  for (int k = 0; k < n; ++k) {
    const double phi = std::arg(w(k, k));
    if (std::abs(phi) > 1e-15) {
      factors.push_back({0.0, 0.0, phi, (k + 1) % n, k});
    }
  }
  return factors;
}

}  // namespace linalg
}  // namespace opcqkd
