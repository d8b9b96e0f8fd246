#pragma once

#include "flatphase/quad.hpp"

namespace flatphase {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Gamma function for x > 0.
double gamma_real(double x);

struct SiCi {
  double si;  ///< Si(x) = int_0^x sin(t)/t dt (unshifted)
  double ci;  ///< Ci(x) = gamma + log x + int_0^x (cos t - 1)/t dt
};

/// Sine and cosine integrals for x > 0. Power series up to x = 4, continued
/// fraction for E_1(ix) beyond.
SiCi sin_cos_integrals(double x);

/// int_W^inf e^{iw}/w dw = -Ci(W) - i si(W), with si(W) = Si(W) - pi/2.
Complex e1_tail(double W);

/// Principal branch z^a, Arg z in (-pi, pi). Throws std::domain_error on the
/// cut (-inf, 0].
Complex principal_power(Complex z, double exponent);

struct TheoremConstant {
  int q = 2;
  Complex value{};
};

/// 4 Gamma(1/q+1) e^{i pi/(2q)} for even q, 4 Gamma(1/q+1) cos(pi/(2q)) for odd q.
TheoremConstant c_constant(int q);

}  // namespace flatphase
