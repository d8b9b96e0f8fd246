#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace flatphase {

/// Truncated Taylor series in one variable.
///
/// Coefficient k holds f^{(k)}(x0)/k!. Arithmetic and the elementary
/// functions below propagate all kOrder coefficients, so a closed-form
/// expression written as a template over its scalar type yields exact
/// derivatives when evaluated on a seeded Jet.
class Jet {
 public:
  static constexpr int kOrder = 8;

  constexpr Jet() : c_{} {}
  constexpr Jet(double value) : c_{} { c_[0] = value; }  // NOLINT: implicit on purpose

  static Jet variable(double x0) {
    Jet j(x0);
    j.c_[1] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[static_cast<std::size_t>(k)] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k < kOrder; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k < kOrder; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }

  friend Jet operator-(Jet a) {
    for (auto& v : a.c_) v = -v;
    return a;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int k = 0; k < kOrder; ++k) {
      double s = 0.0;
      for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    const double inv = 1.0 / b.c_[0];
    for (int k = 0; k < kOrder; ++k) {
      double s = a.c_[k];
      for (int j = 1; j <= k; ++j) s -= b.c_[j] * r.c_[k - j];
      r.c_[k] = s * inv;
    }
    return r;
  }

  friend Jet exp(const Jet& a) {
    Jet r;
    r.c_[0] = std::exp(a.c_[0]);
    for (int k = 1; k < kOrder; ++k) {
      double s = 0.0;
      for (int j = 1; j <= k; ++j) s += j * a.c_[j] * r.c_[k - j];
      r.c_[k] = s / k;
    }
    return r;
  }

  friend Jet log(const Jet& a) {
    Jet r;
    r.c_[0] = std::log(a.c_[0]);
    for (int k = 1; k < kOrder; ++k) {
      double s = a.c_[k];
      for (int j = 1; j < k; ++j) s -= j * r.c_[j] * a.c_[k - j] / k;
      r.c_[k] = s / a.c_[0];
    }
    return r;
  }

  friend Jet pow(const Jet& a, double e) { return exp(e * log(a)); }
  friend Jet sqrt(const Jet& a) { return pow(a, 0.5); }

  friend Jet sin(const Jet& a) { return sincos(a)[0]; }
  friend Jet cos(const Jet& a) { return sincos(a)[1]; }

  friend std::array<Jet, 2> sincos(const Jet& a) {
    Jet s, c;
    s.c_[0] = std::sin(a.c_[0]);
    c.c_[0] = std::cos(a.c_[0]);
    for (int k = 1; k < kOrder; ++k) {
      double ss = 0.0, cc = 0.0;
      for (int j = 1; j <= k; ++j) {
        ss += j * a.c_[j] * c.c_[k - j];
        cc -= j * a.c_[j] * s.c_[k - j];
      }
      s.c_[k] = ss / k;
      c.c_[k] = cc / k;
    }
    return {s, c};
  }

  /// Evaluate a power series with coefficients `coef` (about the constant
  /// term of `z`) at the jet `z`.
  static Jet compose(const std::array<double, kOrder>& coef, const Jet& z) {
    Jet dz = z;
    dz.c_[0] = 0.0;
    Jet r(coef[kOrder - 1]);
    for (int k = kOrder - 2; k >= 0; --k) r = r * dz + Jet(coef[k]);
    return r;
  }

  const std::array<double, kOrder>& coefficients() const { return c_; }

 private:
  std::array<double, kOrder> c_;
};

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace flatphase
