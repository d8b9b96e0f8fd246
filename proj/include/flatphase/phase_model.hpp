#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <type_traits>

#include "flatphase/jet.hpp"

namespace flatphase {

/// Phase f(x1, x2) = sign * x2^q + exp(-1/|x1|^p).
struct FlatPhaseParams {
  double p = 1.0;
  int q = 2;
  int sign = +1;

  void validate() const;
};

/// exp(-1/|x|^p), 0 at x = 0. Evaluated as exp(-exp(-p log|x|)).
double flat_term(double x, double p);

/// Inverse of flat_term on (0, 1): (-1/log u)^{1/p}.
double flat_inverse(double u, double p);

/// Compactly supported smooth real function on the line with Taylor jets.
///
/// Built from a generic callable that accepts both `double` and `Jet`
/// arguments, so any derivative order up to Jet::kOrder - 1 is exact.
class SmoothFunction1D {
 public:
  SmoothFunction1D() = default;

  template <class F>
  static SmoothFunction1D from(F f, double support_radius, std::string name = {}) {
    SmoothFunction1D out;
    out.value_ = [f](double x) { return f(x); };
    out.jet_ = [f](const Jet& x) { return f(x); };
    out.radius_ = support_radius;
    out.name_ = std::move(name);
    return out;
  }

  /// Value-only function (jets unavailable).
  static SmoothFunction1D values_only(std::function<double(double)> f, double support_radius,
                                      std::string name = {});
  static SmoothFunction1D zero(double support_radius = 1.0);

  double operator()(double x) const { return value_(x); }

  /// Taylor series of f^{(deriv)} composed with the jet z. The top `deriv`
  /// orders of the result are not available and come back as zero.
  Jet operator()(const Jet& z, int deriv = 0) const;

  /// k-th derivative at x (k < Jet::kOrder).
  double derivative(double x, int k) const;

  bool has_jet() const { return static_cast<bool>(jet_); }
  double support_radius() const { return radius_; }
  double value_at_0() const { return value_(0.0); }
  const std::string& name() const { return name_; }

  SmoothFunction1D scaled(double c) const;
  /// x -> f(-x)
  SmoothFunction1D reflected() const;
  /// Pointwise sum; support radius is the larger of the two.
  SmoothFunction1D added(const SmoothFunction1D& other) const;

 private:
  std::function<double(double)> value_;
  std::function<Jet(const Jet&)> jet_;
  double radius_ = 0.0;
  std::string name_;
};

/// exp(-x^2/(r^2 - x^2)) on |x| < r, zero elsewhere.
template <class T>
T bump_profile(const T& x, double r) {
  const double v = value_of(x);
  if (!(std::abs(v) < r)) return T(0.0);
  using std::exp;
  return exp(-(x * x) / (r * r - x * x));
}

SmoothFunction1D standard_bump(double r);

/// Smooth partition alpha + beta = 1 with alpha = 1 on |x| <= 1 and
/// alpha = 0 on |x| >= 2.
template <class T>
T cutoff_alpha(const T& x) {
  const double ax = std::abs(value_of(x));
  if (ax <= 1.0) return T(1.0);
  if (ax >= 2.0) return T(0.0);
  using std::exp;
  const T y = value_of(x) < 0 ? -x : x;
  const T h_out = exp(-1.0 / (2.0 - y));
  const T h_in = exp(-1.0 / (y - 1.0));
  return h_out / (h_out + h_in);
}

struct CutoffPair {
  double alpha(double x) const { return cutoff_alpha(x); }
  double beta(double x) const { return 1.0 - cutoff_alpha(x); }
  SmoothFunction1D alpha_function() const;
};

CutoffPair cutoff_pair();

/// psi((-1/log u)^{1/p}) written in terms of log u, so that u = e^{-X} with
/// X in the hundreds stays representable. log_u -> -inf gives psi(0).
template <class T>
T psi_tilde_from_log(const T& log_u, const SmoothFunction1D& psi, double p) {
  if (std::isinf(value_of(log_u))) return T(psi.value_at_0());
  using std::pow;
  const T x = pow(-1.0 / log_u, 1.0 / p);
  if constexpr (std::is_same_v<T, double>) {
    return psi(x);
  } else {
    return psi(x, 0);
  }
}

/// The amplitude a(u) produced by differentiating (1/u)(-1/log u)^{1/p+1}
/// psi_tilde(u), in terms of log u.
template <class T>
T a_from_log(const T& log_u, const SmoothFunction1D& psi, double p) {
  if (std::isinf(value_of(log_u))) return T(-psi.value_at_0());
  using std::pow;
  const T ell = -1.0 / log_u;
  const T x = pow(ell, 1.0 / p);
  T psi_x, dpsi_x;
  if constexpr (std::is_same_v<T, double>) {
    psi_x = psi(x);
    dpsi_x = psi.derivative(x, 1);
  } else {
    psi_x = psi(x, 0);
    dpsi_x = psi(x, 1);
  }
  return (-1.0 + (1.0 / p + 1.0) * ell) * psi_x + (1.0 / p) * dpsi_x * pow(ell, 1.0 / p + 1.0);
}

/// psi_tilde on [0, 1/2): psi((-1/log u)^{1/p}) with psi_tilde(0) = psi(0).
double psi_tilde(double u, const SmoothFunction1D& psi, double p);

/// a(u) on [0, 1/2) with the continuous extension a(0) = -psi(0).
double a_of_u(double u, const SmoothFunction1D& psi, double p);

/// Smooth compactly supported amplitude on the plane.
///
/// Either a tensor product of two SmoothFunction1D or a closed-form
/// generic callable f(x1, x2) usable with double and Jet arguments.
class Amplitude2D {
 public:
  static Amplitude2D product(SmoothFunction1D f1, SmoothFunction1D f2);

  template <class F>
  static Amplitude2D general(F f, double radius1, double radius2, std::string name = {}) {
    Amplitude2D out;
    out.value_ = [f](double a, double b) { return f(a, b); };
    out.jet_ = [f](const Jet& a, const Jet& b) { return f(a, b); };
    out.radius1_ = radius1;
    out.radius2_ = radius2;
    out.name_ = std::move(name);
    return out;
  }

  double operator()(double x1, double x2) const;
  /// Partial derivative in x2.
  double d_dx2(double x1, double x2) const;
  /// x1 -> phi(x1, x2), with jets in x1.
  SmoothFunction1D slice(double x2) const;

  bool is_product() const { return product_; }
  const SmoothFunction1D& factor1() const { return f1_; }
  const SmoothFunction1D& factor2() const { return f2_; }
  double radius1() const { return radius1_; }
  double radius2() const { return radius2_; }
  const std::string& name() const { return name_; }

  /// phi(s1 x1, s2 x2) for s1, s2 in {+1, -1}.
  Amplitude2D reflected(int s1, int s2) const;
  Amplitude2D scaled(double c) const;

 private:
  bool product_ = false;
  SmoothFunction1D f1_, f2_;
  std::function<double(double, double)> value_;
  std::function<Jet(const Jet&, const Jet&)> jet_;
  double radius1_ = 0.0;
  double radius2_ = 0.0;
  std::string name_;
};

/// psi_{r1}(x1) psi_{r2}(x2).
Amplitude2D product_bump(double r1, double r2);
/// exp(-rho^2/(r^2 - rho^2)), rho^2 = x1^2 + x2^2. Not a tensor product.
Amplitude2D radial_bump(double r);
/// psi_{r1}(x1) psi_{r2}(x2) (1 + x2 + x1 x2 / 2); d/dx2 at the origin is 1.
Amplitude2D tilted_bump(double r1, double r2);

/// R(x1, x2) from phi = e^{-x2^q} phi(x1,0) - e^{-x2^q} beta(x2) phi(x1,0) + x2 R.
double remainder_R(double x1, double x2, const Amplitude2D& phi, int q);

/// x1 -> R(x1, x2). For product amplitudes R factorizes and the slice
/// carries jets; otherwise values only.
SmoothFunction1D remainder_slice(double x2, const Amplitude2D& phi, int q);

/// Default bump radius for amplitudes: inside (-1/2, 1/2) and inside the
/// range where flat_term < 1/2 for the given p.
double default_radius(double p);

}  // namespace flatphase
