#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "flatphase/pieces.hpp"
#include "flatphase/specfun.hpp"

using namespace flatphase;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

struct Case {
  double p;
  double X;
};

std::vector<Case> grid_cases() {
  std::vector<Case> out;
  for (double p : {0.5, 1.0, 2.0}) {
    for (double X : {5.0, 10.0, 17.0, 25.0}) out.push_back({p, X});
  }
  return out;
}

}  // namespace

class OneDim : public ::testing::TestWithParam<Case> {};

TEST_P(OneDim, SplitIdentities) {
  const auto [p, X] = GetParam();
  const auto psi = standard_bump(default_radius(p));
  for (auto rep : {Representation::direct, Representation::transformed}) {
    const auto L = eval_L(X, psi, p, rep), L1 = eval_L1(X, psi, p, rep), L2 = eval_L2(X, psi, p, rep);
    EXPECT_LE(std::abs(L.value - L1.value - L2.value),
              L.abs_error_estimate + L1.abs_error_estimate + L2.abs_error_estimate);
    const auto M1 = eval_M1(X, psi, p), M2 = eval_M2(X, psi, p, rep);
    EXPECT_LE(std::abs(L2.value - M1.value - M2.value),
              L2.abs_error_estimate + M1.abs_error_estimate + M2.abs_error_estimate);
  }
}

TEST_P(OneDim, DirectAgreesWithTransformed) {
  const auto [p, X] = GetParam();
  const auto psi = standard_bump(default_radius(p));
  EXPECT_LT(rel(eval_L1(X, psi, p, Representation::direct).value, eval_L1(X, psi, p, Representation::transformed).value), 1e-7);
  EXPECT_LT(rel(eval_L2(X, psi, p, Representation::direct).value, eval_L2(X, psi, p, Representation::transformed).value), 1e-7);
  EXPECT_LT(rel(eval_M2(X, psi, p, Representation::direct).value, eval_M2(X, psi, p, Representation::transformed).value), 1e-7);
}

TEST_P(OneDim, NegativeTimeConjugates) {
  const auto [p, X] = GetParam();
  const auto psi = standard_bump(default_radius(p));
  for (auto f : {&eval_L, &eval_L1, &eval_L2, &eval_M2}) {
    const Complex plus = f(X, psi, p, Representation::direct, {}, +1).value;
    const Complex minus = f(X, psi, p, Representation::direct, {}, -1).value;
    EXPECT_LT(std::abs(minus - std::conj(plus)), 1e-12 * std::abs(plus) + 1e-16);
  }
}

INSTANTIATE_TEST_SUITE_P(Grid, OneDim, ::testing::ValuesIn(grid_cases()));

TEST(OneDimPieces, ZeroAmplitude) {
  const auto zero = SmoothFunction1D::zero(0.5);
  for (double X : {5.0, 50.0}) {
    EXPECT_EQ(eval_L1(X, zero, 1.0, Representation::transformed).value, Complex{});
    EXPECT_EQ(eval_L2(X, zero, 1.0, Representation::transformed).value, Complex{});
    EXPECT_EQ(eval_M1(X, zero, 1.0).value, Complex{});
    EXPECT_EQ(eval_M2(X, zero, 1.0, Representation::transformed).value, Complex{});
  }
}

TEST(OneDimPieces, Linearity) {
  const auto psi = standard_bump(0.5);
  for (double X : {8.0, 100.0}) {
    const Complex a = eval_L2(X, psi, 1.0, Representation::transformed).value;
    const Complex b = eval_L2(X, psi.scaled(2.0), 1.0, Representation::transformed).value;
    EXPECT_LT(std::abs(b - 2.0 * a), 1e-13 * std::abs(a));
  }
}

TEST(OneDimPieces, M1ClosedForm) {
  const auto psi = standard_bump(0.5);
  for (double p : {0.5, 1.0, 2.0}) {
    const double X = 12.0;
    const double xs = std::pow(1.0 / X, 1.0 / p);
    const Complex I(0, 1);
    const Complex expected = (I / p) * std::exp(I) * psi(xs) * std::pow(X, -1.0 / p - 1.0);
    EXPECT_LT(std::abs(eval_M1(X, psi, p).value - expected), 1e-15);
  }
}

TEST(OneDimPieces, DirectRangeEnforced) {
  const auto psi = standard_bump(0.5);
  EXPECT_THROW(eval_L2(kDirectMaxX + 1, psi, 1.0, Representation::direct), std::invalid_argument);
  EXPECT_THROW(eval_L1(10.0, psi, 1.0, Representation::transformed, {}, -1), std::invalid_argument);
}

TEST(OneDimPieces, TransformedStableAtLargeX) {
  const auto psi = standard_bump(0.5);
  for (double X : {400.0, 800.0}) {
    const auto v = eval_L2(X, psi, 1.0, Representation::transformed);
    const Complex scaled = v.value * X * X;
    EXPECT_TRUE(std::isfinite(scaled.real()) && std::isfinite(scaled.imag()));
    EXPECT_LT(std::abs(scaled - e1_tail(1.0)), 5.0 / X);
  }
}

// |amplitude(v)| <= C e^{-v} (v / log 2 + 1)^{1/p+1} for the v-form of M2:
// with w = e^v the integrand modulus is w^{-1} (1 - v/X)^{-b} |a(w/t)|.
TEST(OneDimPieces, M2IntegrandBound) {
  const auto psi = standard_bump(0.5);
  for (double p : {0.5, 1.0, 2.0}) {
    const double b = 1.0 / p + 1.0;
    const double X = 30.0;
    double worst = 0.0;
    for (double v = 0.0; v < X - std::log(2.0); v += 0.05) {
      const double u = std::exp(v - X);
      const double amp = std::exp(-v) * std::pow(1.0 - v / X, -b) * std::abs(a_of_u(u, psi, p));
      worst = std::max(worst, amp / (std::exp(-v) * std::pow(v / std::log(2.0) + 1.0, b)));
    }
    EXPECT_LT(worst, 10.0) << "p=" << p;
  }
}

TEST(K1Factor, KnownValueAndLimits) {
  // Gamma(3/2) / (1 - i)^{1/2} through std::pow on the complex argument.
  const Complex v = eval_K1_factor(2, 0.0);
  const Complex ref = std::tgamma(1.5) / std::pow(Complex(1.0, -1.0), 0.5);
  EXPECT_NEAR(v.real(), ref.real(), 1e-15);
  EXPECT_NEAR(v.imag(), ref.imag(), 1e-15);
  EXPECT_NEAR(v.real(), 0.68849816592657672, 1e-15);
  for (int q : {2, 3, 4}) {
    const Complex scaled = eval_K1_factor(q, 700.0) * std::exp(700.0 / q);
    EXPECT_LT(std::abs(scaled - std::tgamma(1.0 / q + 1) * std::polar(1.0, kPi / (2 * q))), 1e-12);
  }
}

TEST(K2Factor, SuperDecay) {
  ToleranceConfig tol;
  tol.abs_tol = 1e-30;
  tol.rel_tol = 1e-10;
  double prev = kInf;
  for (double X : {1.0, 2.0, 3.0, 4.0}) {
    const auto v = eval_K2_factor(2, X, tol);
    const double t = std::exp(X);
    const double s = t * t * std::abs(v.value);
    EXPECT_LT(s, prev);
    prev = s;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(SPower, SignConjugatesAndLimit) {
  const auto psi2 = standard_bump(0.5);
  for (int q : {2, 3}) {
    const Complex plus = eval_S_power(q, 20.0, psi2, +1).value;
    const Complex minus = eval_S_power(q, 20.0, psi2, -1).value;
    EXPECT_LT(std::abs(minus - std::conj(plus)), 1e-12 * std::abs(plus));
    // Against the damped-kernel route: both tend to Gamma(1/q+1) e^{i pi/2q}.
    const Complex k1 = eval_K1_factor(q, 20.0) * std::exp(20.0 / q);
    EXPECT_LT(rel(plus * std::exp(20.0 / q), k1), 0.02);
  }
  EXPECT_EQ(eval_S_power(2, 10.0, SmoothFunction1D::zero(0.5), 1).value, Complex{});
}

TEST(I2d, FactoredMatchesDirect2dAtUnitTime) {
  const auto phi = product_bump(0.5, 0.5);
  for (int q : {2, 3}) {
    const FlatPhaseParams params{1.0, q, 1};
    const Complex a = eval_I2d(0.0, phi, params, I2dMethod::factored).value;
    const Complex b = eval_I2d(0.0, phi, params, I2dMethod::direct2d).value;
    EXPECT_LT(rel(a, b), 1e-9) << "q=" << q;
  }
}

TEST(I2d, IteratedMatchesFactoredForProducts) {
  const auto phi = product_bump(0.5, 0.5);
  for (double X : {5.0, 20.0}) {
    const FlatPhaseParams params{1.0, 2, 1};
    const Complex a = eval_I2d(X, phi, params, I2dMethod::factored).value;
    const Complex b = eval_I2d(X, phi, params, I2dMethod::iterated).value;
    EXPECT_LT(rel(a, b), 1e-7) << "X=" << X;
  }
}

// Cross-method consistency for amplitudes that do not factor.
TEST(I2d, NonProductDirect2dMatchesIterated) {
  for (const Amplitude2D& phi : {tilted_bump(0.5, 0.5), radial_bump(0.5)}) {
    for (double X : {0.0, 4.0, 8.0}) {
      const FlatPhaseParams params{1.0, 2, 1};
      const Complex a = eval_I2d(X, phi, params, I2dMethod::direct2d).value;
      const Complex b = eval_I2d(X, phi, params, I2dMethod::iterated).value;
      EXPECT_LT(rel(a, b), 1e-6) << phi.name() << " X=" << X;
    }
  }
}

TEST(I2d, MethodPreconditions) {
  const FlatPhaseParams params{1.0, 2, 1};
  EXPECT_THROW(eval_I2d(5.0, radial_bump(0.5), params, I2dMethod::factored), std::invalid_argument);
  EXPECT_THROW(eval_I2d(kDirect2dMaxX + 1, product_bump(0.5, 0.5), params, I2dMethod::direct2d), std::invalid_argument);
  EXPECT_THROW(eval_I2d(kIteratedMaxX + 1, product_bump(0.5, 0.5), params, I2dMethod::iterated), std::invalid_argument);
}

TEST(I2d, OddPowerNegativeSignIsSymmetric) {
  // For odd q the x2 -> -x2 reflection maps sign -1 onto sign +1.
  const auto phi = product_bump(0.5, 0.5);
  const Complex a = eval_I2d(15.0, phi, {1.0, 3, 1}, I2dMethod::factored).value;
  const Complex b = eval_I2d(15.0, phi, {1.0, 3, -1}, I2dMethod::factored).value;
  EXPECT_LT(rel(a, b), 1e-12);
}

TEST(I2d, NegativeSignMethodsAgree) {
  const auto phi = product_bump(0.5, 0.5);
  for (int q : {2, 3}) {
    const FlatPhaseParams params{1.0, q, -1};
    const PieceValue f = eval_I2d(8.0, phi, params, I2dMethod::factored);
    const PieceValue it = eval_I2d(8.0, phi, params, I2dMethod::iterated);
    const PieceValue d = eval_I2d(8.0, phi, params, I2dMethod::direct2d);
    EXPECT_LT(std::abs(f.value - it.value), f.abs_error_estimate + it.abs_error_estimate + 1e-12 * std::abs(f.value));
    EXPECT_LT(std::abs(f.value - d.value), f.abs_error_estimate + d.abs_error_estimate + 1e-12 * std::abs(f.value));
  }
  // Even q: sign -1 is not the mirror of sign +1, since the flat factor keeps its sign.
  const Complex plus = eval_I2d(8.0, phi, {1.0, 2, 1}, I2dMethod::factored).value;
  const Complex minus = eval_I2d(8.0, phi, {1.0, 2, -1}, I2dMethod::factored).value;
  EXPECT_GT(std::abs(plus - minus), 1e-3 * std::abs(plus));
}

class TwoDim : public ::testing::TestWithParam<std::tuple<double, int, double>> {};

TEST_P(TwoDim, DecompositionIdentities) {
  const auto [p, q, X] = GetParam();
  const auto phi = tilted_bump(default_radius(p), default_radius(p));
  auto ev = [&](PieceId id) {
    EvalRequest r;
    r.piece = id;
    r.params = {p, q, 1};
    r.amplitude = phi;
    r.X = X;
    r.representation = Representation::transformed;
    return eval_piece(r);
  };
  const auto I = ev(PieceId::ITILDE_PLUS), J1 = ev(PieceId::J1), J2 = ev(PieceId::J2), K1 = ev(PieceId::K1),
             K2 = ev(PieceId::K2), K3 = ev(PieceId::K3), H1 = ev(PieceId::H1), H2 = ev(PieceId::H2),
             N1 = ev(PieceId::N1), N2 = ev(PieceId::N2);
  auto e = [](std::initializer_list<PieceValue> vs) {
    double s = 0;
    for (const auto& v : vs) s += v.abs_error_estimate;
    return s;
  };
  EXPECT_LE(std::abs(I.value - J1.value - J2.value), e({I, J1, J2}));
  EXPECT_LE(std::abs(J1.value - K1.value + K2.value - K3.value), e({J1, K1, K2, K3}));
  EXPECT_LE(std::abs(K3.value - H1.value - H2.value), e({K3, H1, H2}));
  EXPECT_LE(std::abs(J2.value - N1.value - N2.value), e({J2, N1, N2}));
}

INSTANTIATE_TEST_SUITE_P(NonProduct, TwoDim,
                         ::testing::Values(std::make_tuple(1.0, 2, 10.0), std::make_tuple(0.5, 3, 5.0)));

TEST(TwoDimPieces, DirectAgreesWithTransformed) {
  const auto phi = product_bump(0.5, 0.5);
  for (PieceId id : {PieceId::J2, PieceId::N1, PieceId::K3}) {
    EvalRequest r;
    r.piece = id;
    r.params = {1.0, 2, 1};
    r.amplitude = phi;
    r.X = 10.0;
    r.representation = Representation::transformed;
    const Complex a = eval_piece(r).value;
    r.representation = Representation::direct;
    const Complex b = eval_piece(r).value;
    EXPECT_LT(rel(a, b), 1e-6) << piece_name(id);
  }
}

TEST(Dispatch, NamesRoundTrip) {
  for (PieceId id : {PieceId::L, PieceId::M2, PieceId::ITILDE_MINUS, PieceId::S_POWER, PieceId::N2}) {
    EXPECT_EQ(parse_piece(piece_name(id)), id);
  }
  EXPECT_EQ(parse_piece("itilde_plus"), PieceId::ITILDE_PLUS);
  EXPECT_THROW(parse_piece("Q7"), std::invalid_argument);
  EXPECT_EQ(parse_representation("direct"), Representation::direct);
  EXPECT_EQ(parse_i2d_method("iterated"), I2dMethod::iterated);
}

TEST(Dispatch, AmplitudeKindChecked) {
  EvalRequest r;
  r.piece = PieceId::J2;
  r.amplitude = standard_bump(0.5);
  EXPECT_THROW(eval_piece(r), std::invalid_argument);
  r.piece = PieceId::L1;
  r.amplitude = product_bump(0.5, 0.5);
  EXPECT_THROW(eval_piece(r), std::invalid_argument);
}

// For a product amplitude the quadrant integrals factor by Fubini.
TEST(Dispatch, QuadrantPiecesFactorForProducts) {
  const auto psi1 = standard_bump(0.5), psi2 = standard_bump(0.4);
  for (int q : {2, 3}) {
    EvalRequest r;
    r.params = {1.0, q, 1};
    r.amplitude = Amplitude2D::product(psi1, psi2);
    r.X = 12.0;
    r.representation = Representation::transformed;
    const Complex l = eval_L(12.0, psi1, 1.0, Representation::transformed).value;
    r.piece = PieceId::ITILDE_PLUS;
    EXPECT_LT(rel(eval_piece(r).value, l * eval_S_power(q, 12.0, psi2, +1).value), 1e-8);
    r.piece = PieceId::ITILDE_MINUS;
    EXPECT_LT(rel(eval_piece(r).value, l * eval_S_power(q, 12.0, psi2, -1).value), 1e-8);
  }
}
