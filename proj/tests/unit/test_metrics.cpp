#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "mfcert/metrics.hpp"
#include "mfcert/model.hpp"
#include "mfcert/property_checks.hpp"
#include "mfcert/random.hpp"

using namespace mfcert;

namespace {

DensityMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return DensityMatrix(m, TensorShape{2});
}

DensityMatrix pure(const ComplexVector& v, TensorShape shape) { return DensityMatrix::from_pure(PureState(v, shape)); }

}  // namespace

TEST(Fidelity, RankOneSecondArgument) {
  Rng rng(1);
  const DensityMatrix rho = random_density(4, 4, rng);
  const ComplexVector u = random_unit_vector(4, rng);
  const double expected = u.dot(rho.matrix() * u).real();
  EXPECT_NEAR(fidelity(rho, pure(u, TensorShape{4})), expected, 1e-12);
}

TEST(Fidelity, CommutingCase) {
  const double expected = std::pow(std::sqrt(0.28) + std::sqrt(0.18), 2);
  EXPECT_NEAR(fidelity(diag2(0.7, 0.3), diag2(0.4, 0.6)), expected, 1e-14);
  EXPECT_NEAR(expected, 0.90900, 5e-6);
}

TEST(Fidelity, SymmetricAndBounded) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix a = random_density(5, 1 + i % 5, rng), b = random_density(5, 5 - i % 5, rng);
    const double f = fidelity(a, b);
    EXPECT_NEAR(f, fidelity(b, a), 1e-12);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
  }
  const DensityMatrix a = random_density(3, 2, rng);
  EXPECT_NEAR(fidelity(a, a), 1.0, 1e-12);
}

TEST(TraceDistance, Examples) {
  const DensityMatrix a = diag2(0.7, 0.3);
  EXPECT_EQ(trace_distance(a, a), 0.0);
  EXPECT_NEAR(trace_distance(diag2(1.0, 0.0), diag2(0.0, 1.0)), 2.0, 1e-15);
  EXPECT_NEAR(trace_distance(a, diag2(0.4, 0.6)), 0.6, 1e-15);
}

TEST(Fvdg, Examples) {
  const DensityMatrix a = diag2(0.7, 0.3);
  EXPECT_NEAR(fvdg_margin(a, a), 0.0, 1e-7);
  const double m = fvdg_margin(a, diag2(0.4, 0.6));
  EXPECT_NEAR(m, std::sqrt(1.0 - std::pow(std::sqrt(0.28) + std::sqrt(0.18), 2)) - 0.3, 1e-12);
  EXPECT_NEAR(m, 0.00166, 1e-5);
  EXPECT_GE(m, 0.0);
}

TEST(Dpi, SharedSecondFactorGivesZeroMargin) {
  Rng rng(3);
  const DensityMatrix r1 = random_density(3, 3, rng), s1 = random_density(3, 2, rng), tau = random_density(3, 3, rng);
  const DensityMatrix rho(kron(r1.matrix(), tau.matrix()), TensorShape{3, 3});
  const DensityMatrix sigma(kron(s1.matrix(), tau.matrix()), TensorShape{3, 3});
  EXPECT_NEAR(dpi_margin(rho, sigma, 1), 0.0, 1e-9);
  EXPECT_NEAR(dpi_margin(rho, rho, 0), 0.0, 1e-9);
}

TEST(Dpi, BellPairsSaturate) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector plus = ComplexVector::Zero(4), minus = ComplexVector::Zero(4);
  plus(0) = r, plus(3) = r;
  minus(0) = r, minus(3) = -r;
  const DensityMatrix a = pure(plus, TensorShape{2, 2}), b = pure(minus, TensorShape{2, 2});
  EXPECT_NEAR(fidelity(a, b), 0.0, 1e-14);
  EXPECT_NEAR(dpi_margin(a, b, 1), 1.0 - fidelity(a, b), 1e-12);
}

TEST(LpNorm, Values) {
  RealVector v(3);
  v << 3.0, -4.0, 0.0;
  EXPECT_NEAR(lp_norm(v, 1.0), 7.0, 1e-15);
  EXPECT_NEAR(lp_norm(v, 2.0), 5.0, 1e-15);
  EXPECT_NEAR(lp_norm(v, std::numeric_limits<double>::infinity()), 4.0, 1e-15);
}

TEST(Holder, BoundHoldsOnHandCase) {
  RealVector v(4);
  v << 0.0, 1.0, 0.0, 1.0;
  const RealVector rho = RealVector::Constant(4, 0.25);
  const TorusModel m(ComplexMatrix::Zero(4, 4), v);
  const double lambda = lambda_of(m, DensityProfile(rho));
  for (double r : {1.0, 2.0, 8.0}) EXPECT_GE(holder_lambda_bound(v, rho, r), lambda);
  // r = 1: 2 ||V||_2 ||rho||_inf^{1/2} = 2 sqrt(2) / 2.
  EXPECT_NEAR(holder_lambda_bound(v, rho, 1.0), std::sqrt(2.0), 1e-14);
}

TEST(PropertySuites, AllPass) {
  for (const auto& r : run_property_suites(424242)) EXPECT_TRUE(r.passed) << r.name << " worst " << r.worst;
}
