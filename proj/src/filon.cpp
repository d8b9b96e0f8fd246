// Filon panels on Chebyshev-Lobatto nodes.
//
// On the reference panel [-1, 1] the amplitude is interpolated at the 17
// Chebyshev-Lobatto points and the interpolant is expanded in Legendre
// polynomials. The Legendre moments are closed-form,
//   int_{-1}^{1} P_k(x) e^{i w x} dx = 2 i^k j_k(w),
// with j_k the spherical Bessel functions, which are evaluated stably for
// every w (power series, Miller's backward recurrence, or forward
// recurrence depending on w).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adaptive.hpp"
#include "flatphase/quad.hpp"

namespace flatphase {
namespace detail {
namespace {

constexpr int kDegree = 16;
constexpr int kNodes = kDegree + 1;

struct FilonTables {
  std::array<double, kNodes> nodes{};
  // legendre_from_values[k][j]: coefficient k of the interpolant per unit value at node j.
  std::array<std::array<double, kNodes>, kNodes> legendre_from_values{};

  FilonTables() {
    using LD = long double;
    const LD pi = 3.141592653589793238462643383279502884L;
    std::array<std::array<LD, 2 * kNodes>, kNodes> aug{};
    for (int j = 0; j < kNodes; ++j) {
      const LD x = std::cos(pi * j / kDegree);
      nodes[j] = static_cast<double>(x);
      LD pm1 = 1, p = x;
      aug[j][0] = 1;
      aug[j][1] = x;
      for (int k = 1; k < kDegree; ++k) {
        const LD pn = ((2 * k + 1) * x * p - k * pm1) / (k + 1);
        pm1 = p;
        p = pn;
        aug[j][k + 1] = p;
      }
      aug[j][kNodes + j] = 1;
    }
    // Gauss-Jordan with partial pivoting on [V | I].
    for (int col = 0; col < kNodes; ++col) {
      int piv = col;
      for (int r = col + 1; r < kNodes; ++r)
        if (std::fabs(aug[r][col]) > std::fabs(aug[piv][col])) piv = r;
      std::swap(aug[piv], aug[col]);
      const LD d = aug[col][col];
      for (auto& v : aug[col]) v /= d;
      for (int r = 0; r < kNodes; ++r) {
        if (r == col) continue;
        const LD f = aug[r][col];
        if (f == 0) continue;
        for (int c = 0; c < 2 * kNodes; ++c) aug[r][c] -= f * aug[col][c];
      }
    }
    for (int k = 0; k < kNodes; ++k)
      for (int j = 0; j < kNodes; ++j) legendre_from_values[k][j] = static_cast<double>(aug[k][kNodes + j]);
  }
};

const FilonTables& tables() {
  static const FilonTables t;
  return t;
}

}  // namespace

void spherical_bessel(double x, int n, std::span<double> out) {
  if (static_cast<int>(out.size()) < n + 1) throw std::invalid_argument("spherical_bessel: output too small");
  const double sign = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);

  if (x < 1.0) {
    // j_k(x) = x^k/(2k+1)!! * sum_m (-x^2/2)^m / (m! (2k+3)(2k+5)...(2k+2m+1))
    double lead = 1.0;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) lead *= x / (2 * k + 1);
      double term = 1.0, sum = 1.0;
      for (int m = 1; m < 40; ++m) {
        term *= -0.5 * x * x / (m * (2 * k + 2 * m + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      }
      out[k] = lead * sum;
    }
  } else if (x > n) {
    out[0] = std::sin(x) / x;
    if (n >= 1) out[1] = std::sin(x) / (x * x) - std::cos(x) / x;
    for (int k = 1; k < n; ++k) out[k + 1] = (2 * k + 1) / x * out[k] - out[k - 1];
  } else {
    const int start = n + 20 + static_cast<int>(x);
    double fp1 = 0.0, f = 1e-30;
    for (int k = start; k >= 1; --k) {
      const double fm1 = (2 * k + 1) / x * f - fp1;
      fp1 = f;
      f = fm1;
      if (k - 1 <= n) out[k - 1] = f;
      if (std::abs(f) > 1e250) {
        fp1 *= 1e-250;
        f *= 1e-250;
        for (int j = k - 1; j <= n; ++j) out[j] *= 1e-250;
      }
    }
    const double j0 = std::sin(x) / x;
    const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    const double scale = std::abs(j0) >= std::abs(j1) ? j0 / out[0] : j1 / out[1];
    for (int k = 0; k <= n; ++k) out[k] *= scale;
  }
  if (sign < 0)
    for (int k = 1; k <= n; k += 2) out[k] = -out[k];
}

PanelEstimate filon_panel(const Integrand& s, double omega, double a, double b) {
  const auto& tb = tables();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<Complex, kNodes> fv;
  double fmax = 0.0;
  for (int j = 0; j < kNodes; ++j) {
    fv[j] = s(center + half * tb.nodes[j]);
    fmax = std::max(fmax, std::abs(fv[j]));
  }
  std::array<Complex, kNodes> coef{};
  for (int k = 0; k < kNodes; ++k) {
    Complex c{};
    for (int j = 0; j < kNodes; ++j) c += tb.legendre_from_values[k][j] * fv[j];
    coef[k] = c;
  }

  std::array<double, kNodes> jb{};
  spherical_bessel(omega * half, kDegree, jb);
  // 2 i^k j_k
  Complex sum{};
  static constexpr std::array<Complex, 4> ipow = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  for (int k = 0; k < kNodes; ++k) sum += coef[k] * (2.0 * jb[k]) * ipow[k % 4];

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const Complex phase = unit_phase(omega, center);
  const Complex value = phase * sum * half;
  // Truncation and rounding in the interpolant enter through moments that
  // shrink like 1/(omega*half) once a panel spans many periods.
  const double damp = std::min(1.0, 32.0 / std::abs(omega * half));
  const double tail = std::abs(coef[kDegree]) + std::abs(coef[kDegree - 1]) + std::abs(coef[kDegree - 2]);
  const double floor = 2 * half * damp * 50 * eps * fmax;
  return {value, 2 * half * damp * tail + floor, kNodes, floor};
}

}  // namespace detail

QuadratureResult integrate_filon(const Integrand& s, double omega, Interval iv, const ToleranceConfig& tol) {
  iv.validate();
  if (!iv.finite()) throw std::invalid_argument("integrate_filon needs a finite interval");
  tol.validate();
  return detail::run_adaptive(
      {iv.lo, iv.hi}, [&](double a, double b) { return detail::filon_panel(s, omega, a, b); }, tol);
}

}  // namespace flatphase
