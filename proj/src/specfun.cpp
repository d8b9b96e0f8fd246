#include "flatphase/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace flatphase {

double gamma_real(double x) {
  if (!(x > 0) || !std::isfinite(x)) throw std::domain_error("gamma_real: argument must be positive");
  return std::tgamma(x);
}

SiCi sin_cos_integrals(double x) {
  if (!(x > 0) || !std::isfinite(x)) throw std::domain_error("sin_cos_integrals: argument must be positive");
  constexpr double eps = std::numeric_limits<double>::epsilon();

  if (x <= 4.0) {
    // Si = sum (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    // Ci = gamma + log x + sum_{k>=1} (-1)^k x^{2k} / (2k (2k)!)
    double si = 0.0, ci = 0.0;
    double fact = x;  // x^n / n!
    for (int n = 1; n < 100; ++n) {
      // n = 2k+1 feeds Si, n = 2k feeds Ci; both carry (-1)^k.
      const double term = (((n / 2) % 2 == 0) ? 1.0 : -1.0) * fact / n;
      (n % 2 == 1 ? si : ci) += term;
      fact *= x / (n + 1);
      if (fact < eps * 1e-3 * std::max(std::abs(si), 1.0)) break;
    }
    return {si, kEulerGamma + std::log(x) + ci};
  }

  // Modified Lentz evaluation of the continued fraction for E_1(ix).
  constexpr double tiny = 1e-300;
  Complex b(1.0, x);
  Complex c(1.0 / tiny, 0.0);
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 1; i < 1000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const Complex del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 4 * eps) break;
  }
  h *= Complex(std::cos(x), -std::sin(x));
  return {kPi / 2 + h.imag(), -h.real()};
}

Complex e1_tail(double W) {
  if (!(W >= 1.0)) throw std::domain_error("e1_tail: W must be >= 1");
  const SiCi v = sin_cos_integrals(W);
  return {-v.ci, -(v.si - kPi / 2)};
}

Complex principal_power(Complex z, double exponent) {
  if (z.imag() == 0.0 && z.real() <= 0.0) throw std::domain_error("principal_power: argument on the branch cut");
  const double lg = std::log(std::abs(z));
  const double arg = std::arg(z);
  return std::polar(std::exp(exponent * lg), exponent * arg);
}

TheoremConstant c_constant(int q) {
  if (q < 2) throw std::invalid_argument("c_constant: q must be >= 2");
  const double mod = 4.0 * gamma_real(1.0 / q + 1.0);
  const double angle = kPi / (2.0 * q);
  if (q % 2 == 0) return {q, std::polar(mod, angle)};
  return {q, Complex(mod * std::cos(angle), 0.0)};
}

}  // namespace flatphase
