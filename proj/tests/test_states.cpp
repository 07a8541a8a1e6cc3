#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "opcqkd/states.hpp"

using namespace opcqkd;
using namespace opcqkd::states;

namespace {

// Upper 0.999 chi-square quantiles, dof -> threshold.
double chi2_threshold(int dof) {
  switch (dof) {
    case 1: return 10.828;
    case 3: return 16.266;
    case 7: return 24.322;
    case 15: return 37.697;
    default: return 10.828 + 2.8 * dof;
  }
}

std::vector<QuditState> computational_basis(int d) {
  std::vector<QuditState> basis;
  basis.reserve(d);
  for (int k = 0; k < d; ++k) {
    CVec v = CVec::Zero(d);
    v(k) = 1.0;
    basis.emplace_back(std::move(v));
  }
  return basis;
}

}  // namespace

TEST_CASE("qudit construction enforces unit norm") {
  CVec v(2);
  v << Cx(1.0, 0.0), Cx(1.0, 0.0);
  CHECK_THROWS_AS(QuditState{v}, std::invalid_argument);
  CHECK_NOTHROW(QuditState::normalized(v));
  CHECK_THROWS_AS(QuditState::normalized(CVec::Zero(3)), std::invalid_argument);
}

TEST_CASE("attenuate rescales to the target mean photon number") {
  CVec v(2);
  v << Cx(1.0, 0.0), Cx(0.0, 1.0);
  const CoherentVector cv(v);

  const auto same = attenuate(cv, cv.mean_photon_number());
  CHECK((same.amps - v).norm() < 1e-15);

  const auto off = attenuate(cv, 0.0);
  CHECK(off.amps.norm() == 0.0);

  const auto weak = attenuate(cv, 0.1);
  CHECK(std::abs(weak.mean_photon_number() - 0.1) < 1e-14);
  const double scale = std::sqrt(0.05);
  CHECK(std::abs(weak.amps(0) - scale * v(0)) < 1e-15);
  CHECK(std::abs(weak.amps(1) - scale * v(1)) < 1e-15);

  CHECK_THROWS_AS(attenuate(CoherentVector(CVec::Zero(2)), 0.5),
                  std::invalid_argument);
}

TEST_CASE("attenuate preserves component ratios exactly") {
  auto rng = RngSeed{51}.engine();
  std::normal_distribution<double> g(0.0, 1.0);
  CVec v(4);
  for (int k = 0; k < 4; ++k) v(k) = Cx(g(rng), g(rng));
  const auto scaled = attenuate(CoherentVector(v), 0.37);
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      CHECK(std::abs(scaled.amps(a) * v(b) - scaled.amps(b) * v(a)) < 1e-14);
    }
  }
}

TEST_CASE("photon sampling follows the Poisson law") {
  auto rng = RngSeed{52}.engine();
  for (int k = 0; k < 100; ++k) {
    CHECK(sample_photon_number(0.0, rng) == 0);
  }

  const int shots = 1'000'000;
  int singles = 0;
  double total = 0.0;
  auto rng1 = RngSeed{53}.engine();
  for (int k = 0; k < shots; ++k) {
    if (sample_photon_number(0.1, rng1) == 1) ++singles;
  }
  const double p1 = 0.1 * std::exp(-0.1);
  const double sigma1 = std::sqrt(p1 * (1 - p1) / shots);
  CHECK(std::abs(double(singles) / shots - p1) < 3 * sigma1);

  auto rng2 = RngSeed{54}.engine();
  for (int k = 0; k < shots; ++k) total += sample_photon_number(0.5, rng2);
  const double sigma_mean = std::sqrt(0.5 / shots);
  CHECK(std::abs(total / shots - 0.5) < 3 * sigma_mean);

  CHECK(sample_photon_number(0.3, RngSeed{55}) ==
        sample_photon_number(0.3, RngSeed{55}));
}

TEST_CASE("to_qudit normalizes and is scale invariant") {
  CVec e(3);
  e << Cx(2.5, 0.0), Cx(0.0, 0.0), Cx(0.0, 0.0);
  const auto q = to_qudit(CoherentVector(e));
  CHECK(std::abs(q.coeffs(0) - Cx(1.0, 0.0)) < 1e-15);

  CVec pair(2);
  pair << Cx(1.0, 0.0), Cx(1.0, 0.0);
  for (double w : {0.01, 3.0, 250.0}) {
    const auto qs = to_qudit(CoherentVector(pair * w));
    CHECK(std::abs(qs.coeffs(0) - Cx(1.0 / std::sqrt(2.0), 0.0)) < 1e-14);
    CHECK(std::abs(qs.coeffs(1) - Cx(1.0 / std::sqrt(2.0), 0.0)) < 1e-14);
  }

  CVec pattern(2);
  pattern << Cx(0.0, -1.0), Cx(0.0, 1.0);
  const auto qp = to_qudit(CoherentVector(pattern * 0.05));
  CHECK(std::abs(qp.coeffs(0) - Cx(0.0, -1.0 / std::sqrt(2.0))) < 1e-14);
  CHECK(std::abs(qp.coeffs(1) - Cx(0.0, 1.0 / std::sqrt(2.0))) < 1e-14);

  CHECK_THROWS_AS(to_qudit(CoherentVector(CVec::Zero(2))), std::invalid_argument);
}

TEST_CASE("to_qudit commutes with unitary propagation") {
  auto rng = RngSeed{56}.engine();
  std::normal_distribution<double> g(0.0, 1.0);
  const CMat u = linalg::haar_unitary(4, rng);
  CVec v(4);
  for (int k = 0; k < 4; ++k) v(k) = Cx(g(rng), g(rng));

  const auto left = to_qudit(CoherentVector(channel::propagate(v, u)));
  const CVec right = u * to_qudit(CoherentVector(v)).coeffs;
  CHECK((left.coeffs - right).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("measurement on an eigenstate is deterministic") {
  const auto basis = computational_basis(4);
  auto rng = RngSeed{57}.engine();
  for (int trial = 0; trial < 50; ++trial) {
    CHECK(measure_in_basis(basis[2], basis, rng) == 2);
  }
}

TEST_CASE("measurement of a uniform state is uniform (chi-square)") {
  const int d = 4;
  const auto basis = computational_basis(d);
  const auto uniform =
      QuditState(CVec::Constant(d, Cx(1.0 / std::sqrt(double(d)), 0.0)));

  const int shots = 100'000;
  std::vector<int> counts(d, 0);
  auto rng = RngSeed{58}.engine();
  for (int k = 0; k < shots; ++k) {
    ++counts[measure_in_basis(uniform, basis, rng)];
  }
  const double expected = double(shots) / d;
  double chi2 = 0.0;
  for (int k = 0; k < d; ++k) {
    chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
  }
  CHECK(chi2 < chi2_threshold(d - 1));
}

TEST_CASE("non-orthonormal bases are rejected") {
  CVec a(2);
  a << Cx(1.0, 0.0), Cx(0.0, 0.0);
  CVec b(2);
  b << Cx(1.0 / std::sqrt(2.0), 0.0), Cx(1.0 / std::sqrt(2.0), 0.0);
  const std::vector<QuditState> skewed{QuditState(a), QuditState(b)};

  auto rng = RngSeed{59}.engine();
  CHECK_THROWS_AS(measure_in_basis(QuditState(a), skewed, rng),
                  std::invalid_argument);
}
