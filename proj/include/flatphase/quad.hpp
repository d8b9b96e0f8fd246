#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace flatphase {

using Complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// e^{i omega x}, with the rounding error of the product omega*x folded back
/// into the phase.
inline Complex unit_phase(double omega, double x) {
  const double wx = omega * x;
  const double r = std::fma(omega, x, -wx);
  return std::polar(1.0, wx) * Complex(std::cos(r), std::sin(r));
}

/// Integration range; `hi` may be +infinity where an operation allows it.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool finite() const { return std::isfinite(hi); }
  /// Throws std::invalid_argument unless lo is finite and lo < hi.
  void validate() const;
};

struct ToleranceConfig {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
  int max_subdivisions = 20000;
  long max_evals = 20'000'000;

  void validate() const;

  /// Same tolerances with max_evals capped by FLATPHASE_MAX_EVALS when set.
  ToleranceConfig with_env_cap() const;
};

struct QuadratureResult {
  Complex value{};
  double abs_error_estimate = 0.0;
  long n_evals = 0;
  bool converged = false;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    abs_error_estimate += o.abs_error_estimate;
    n_evals += o.n_evals;
    converged = converged && o.converged;
    return *this;
  }
};

using Integrand = std::function<Complex(double)>;

/// Globally adaptive 10/21-point Gauss-Kronrod quadrature on a finite
/// interval. Budget exhaustion returns the best value with converged=false.
QuadratureResult integrate_adaptive(const Integrand& f, Interval iv,
                                    const ToleranceConfig& tol);

/// Integral of e^{i omega x} s(x) over a finite interval using Filon panels:
/// s is interpolated on 17 Chebyshev-Lobatto nodes per panel and the
/// interpolant is integrated against the exponential with exact moments.
/// Panels are bisected where the amplitude is under-resolved; the accuracy
/// does not depend on omega.
QuadratureResult integrate_filon(const Integrand& s, double omega, Interval iv,
                                 const ToleranceConfig& tol);

/// k-term integration-by-parts expansion of the integral of e^{i omega x}
/// s(x) over [W, infinity), k = derivs.size(), derivs[j] = s^{(j)}(W).
Complex oscillatory_tail(std::span<const Complex> derivs, double omega, double W);

/// Returns s^{(j)}(W) for j = 0..k-1.
using DerivativeProvider = std::function<std::vector<Complex>(double W, int k)>;

struct OscillatoryProblem {
  Integrand amplitude;
  double omega = 1.0;
  Interval range{0.0, kInf};
  /// Initial panels grow geometrically with ratio 2 away from this point,
  /// which should sit at or below range.lo (the location of the amplitude's
  /// singularity).
  double grading_origin = 0.0;
  /// Required when range.hi is infinite. When present, the panels stop at
  /// the tail cut and the remainder comes from oscillatory_tail.
  DerivativeProvider derivatives;
  int tail_order = 6;
  double tail_periods = 1e4;
  /// Panels with fewer oscillations than this use Gauss-Kronrod.
  double filon_min_periods = 8.0;
};

/// Graded panels (Gauss-Kronrod where barely oscillatory, Filon otherwise)
/// plus an asymptotic tail beyond the cut when derivatives are supplied.
QuadratureResult integrate_oscillatory(const OscillatoryProblem& prob,
                                       const ToleranceConfig& tol);

namespace detail {

/// Spherical Bessel functions j_0..j_n at x (any real x).
void spherical_bessel(double x, int n, std::span<double> out);

}  // namespace detail

}  // namespace flatphase
