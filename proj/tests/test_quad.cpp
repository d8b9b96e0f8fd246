#include <gtest/gtest.h>

#include <cmath>
#include <array>
#include <cstdlib>
#include <stdexcept>

#include "flatphase/quad.hpp"
#include "flatphase/specfun.hpp"

using namespace flatphase;

namespace {

// int_a^b e^{iwx} x dx in closed form.
Complex linear_moment(double w, double a, double b) {
  const Complex I(0, 1);
  auto prim = [&](double x) { return std::exp(I * w * x) * (x / (I * w) + 1.0 / (w * w)); };
  return prim(b) - prim(a);
}

ToleranceConfig tight() {
  ToleranceConfig t;
  t.abs_tol = 1e-15;
  t.rel_tol = 1e-13;
  return t;
}

}  // namespace

TEST(Adaptive, PolynomialExact) {
  const auto r = integrate_adaptive([](double x) { return Complex(x * x * x, 1.0); }, {0.0, 2.0}, tight());
  EXPECT_NEAR(r.value.real(), 4.0, 1e-14);
  EXPECT_NEAR(r.value.imag(), 2.0, 1e-14);
  EXPECT_TRUE(r.converged);
}

TEST(Adaptive, EndpointSingularity) {
  const auto r = integrate_adaptive([](double x) { return Complex(1.0 / std::sqrt(x)); }, {0.0, 1.0}, tight());
  EXPECT_NEAR(r.value.real(), 2.0, 1e-10);
}

TEST(Adaptive, ConvergedImpliesWithinTolerance) {
  for (double w : {1.0, 10.0, 100.0}) {
    ToleranceConfig tol;
    tol.rel_tol = 1e-9;
    const auto r = integrate_adaptive([w](double x) { return std::polar(std::exp(-x), w * x); }, {0.0, 5.0}, tol);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.abs_error_estimate, std::max(tol.abs_tol, tol.rel_tol * std::abs(r.value)));
    const Complex exact = (std::exp(Complex(-1, w) * 5.0) - 1.0) / Complex(-1, w);
    EXPECT_LT(std::abs(r.value - exact), 1e-9 * std::abs(exact) + 1e-13);
  }
}

TEST(Adaptive, BudgetExhaustionIsReported) {
  ToleranceConfig tol;
  tol.max_subdivisions = 3;
  const auto r = integrate_adaptive([](double x) { return Complex(std::sin(1000 * x * x)); }, {0.0, 3.0}, tol);
  EXPECT_FALSE(r.converged);
}

TEST(Adaptive, EnvironmentCapsEvaluations) {
  ::setenv("FLATPHASE_MAX_EVALS", "200", 1);
  const auto r = integrate_adaptive([](double x) { return Complex(std::sin(1000 * x * x)); }, {0.0, 3.0}, {});
  ::unsetenv("FLATPHASE_MAX_EVALS");
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.n_evals, 200 + 2 * 21);
}

TEST(Adaptive, RejectsBadInput) {
  EXPECT_THROW(integrate_adaptive([](double) { return Complex(1); }, {1.0, 0.0}, {}), std::invalid_argument);
  EXPECT_THROW(integrate_adaptive([](double) { return Complex(1); }, {0.0, kInf}, {}), std::invalid_argument);
  ToleranceConfig bad;
  bad.rel_tol = -1;
  EXPECT_THROW(integrate_adaptive([](double) { return Complex(1); }, {0.0, 1.0}, bad), std::invalid_argument);
}

class FilonFrequency : public ::testing::TestWithParam<double> {};

// The interpolant reproduces a linear amplitude, so the result is exact at
// every frequency.
TEST_P(FilonFrequency, LinearAmplitudeExact) {
  const double w = GetParam();
  const auto r = integrate_filon([](double x) { return Complex(x); }, w, {0.5, 3.0}, tight());
  const Complex exact = linear_moment(w, 0.5, 3.0);
  EXPECT_LT(std::abs(r.value - exact), 1e-14 * std::max(1.0, 1.0 / std::abs(w)) + 1e-15);
}

INSTANTIATE_TEST_SUITE_P(Omegas, FilonFrequency, ::testing::Values(-1e6, -30.0, 0.5, 7.0, 100.0, 1e4, 1e8));

TEST(Filon, ZeroFrequencyAgreesWithAdaptive) {
  auto s = [](double x) { return Complex(std::exp(-x * x), x); };
  const auto a = integrate_filon(s, 0.0, {-1.0, 2.0}, tight());
  const auto b = integrate_adaptive(s, {-1.0, 2.0}, tight());
  EXPECT_LT(std::abs(a.value - b.value), a.abs_error_estimate + b.abs_error_estimate + 1e-15);
}

TEST(Filon, GaussianAmplitudeAgainstErf) {
  // int_{-inf}^{inf} e^{iwx} e^{-x^2} dx = sqrt(pi) e^{-w^2/4}; [-8, 8] suffices.
  for (double w : {0.0, 1.0, 5.0}) {
    const auto r = integrate_filon([](double x) { return Complex(std::exp(-x * x)); }, w, {-8.0, 8.0}, tight());
    EXPECT_NEAR(r.value.real(), std::sqrt(kPi) * std::exp(-w * w / 4), 1e-13);
    EXPECT_NEAR(r.value.imag(), 0.0, 1e-13);
  }
}

TEST(OscillatoryTail, MatchesSineCosineIntegrals) {
  // int_W^inf e^{iw}/w dw for large W from the expansion alone; eight terms
  // leave a truncation error near 8!/W^9.
  const double W = 200.0;
  std::vector<Complex> d;
  double c = 1.0;
  for (int j = 0; j < 8; ++j) {
    d.emplace_back(c * std::pow(W, -1 - j));
    c *= -(1 + j);
  }
  const Complex tail = oscillatory_tail(d, 1.0, W);
  EXPECT_LT(std::abs(tail - e1_tail(W)), 1e-14);
}

TEST(Oscillatory, SemiInfiniteNeedsDerivatives) {
  OscillatoryProblem prob;
  prob.amplitude = [](double w) { return Complex(1.0 / w); };
  prob.range = {1.0, kInf};
  EXPECT_THROW(integrate_oscillatory(prob, {}), std::invalid_argument);
}

TEST(Oscillatory, ExponentialIntegralAtSeveralStarts) {
  for (double W : {1.0, 3.0, 20.0}) {
    OscillatoryProblem prob;
    prob.amplitude = [](double w) { return Complex(1.0 / w); };
    prob.derivatives = [](double w, int k) {
      std::vector<Complex> d;
      double c = 1.0;
      for (int j = 0; j < k; ++j) {
        d.emplace_back(c * std::pow(w, -1 - j));
        c *= -(1 + j);
      }
      return d;
    };
    prob.range = {W, kInf};
    const auto r = integrate_oscillatory(prob, tight());
    EXPECT_LT(std::abs(r.value - e1_tail(W)), 1e-13) << "W=" << W;
  }
}

TEST(Oscillatory, FiniteRangeMatchesAdaptive) {
  OscillatoryProblem prob;
  prob.amplitude = [](double x) { return Complex(std::exp(-x)); };
  prob.omega = 40.0;
  prob.range = {0.0, 3.0};
  const auto a = integrate_oscillatory(prob, tight());
  const Complex exact = (std::exp(Complex(-1, 40) * 3.0) - 1.0) / Complex(-1, 40);
  EXPECT_LT(std::abs(a.value - exact), 1e-13);
}

TEST(SphericalBessel, LowOrders) {
  std::array<double, 3> j{};
  // Closed forms lose digits to cancellation below x ~ 0.5; use series there.
  detail::spherical_bessel(1e-3, 2, j);
  EXPECT_NEAR(j[0], 1 - 1e-6 / 6 + 1e-12 / 120, 1e-16);
  EXPECT_NEAR(j[1] / (1e-3 / 3 - 1e-9 / 30 + 1e-15 / 840), 1.0, 1e-14);
  EXPECT_NEAR(j[2] / (1e-6 / 15 - 1e-12 / 210), 1.0, 1e-14);
  for (double x : {0.7, 5.0, 40.0}) {
    detail::spherical_bessel(x, 2, j);
    EXPECT_NEAR(j[0], std::sin(x) / x, 1e-15);
    EXPECT_NEAR(j[1], std::sin(x) / (x * x) - std::cos(x) / x, 1e-14);
    EXPECT_NEAR(j[2], (3 / (x * x) - 1) * std::sin(x) / x - 3 * std::cos(x) / (x * x), 1e-13);
  }
}

TEST(UnitPhase, LargeProductKeepsResidual) {
  // omega * x = 1e9 * 0.1 is not exact in binary; the folded residual
  // tracks the long double product.
  const double w = 1e9, x = 0.1;
  const long double exact = static_cast<long double>(w) * static_cast<long double>(x);
  const Complex z = unit_phase(w, x);
  EXPECT_NEAR(std::arg(z), std::remainder(static_cast<double>(std::fmod(exact, 2 * 3.14159265358979323846264338327950288L)), 2 * kPi), 1e-10);
  EXPECT_NEAR(std::abs(z), 1.0, 1e-15);
}
