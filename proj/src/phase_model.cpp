#include "flatphase/phase_model.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace flatphase {

void FlatPhaseParams::validate() const {
  if (!(p > 0) || !std::isfinite(p)) throw std::invalid_argument("p must be a positive real");
  if (q < 2) throw std::invalid_argument("q must be an integer >= 2");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
}

double flat_term(double x, double p) {
  if (x == 0.0) return 0.0;
  return std::exp(-std::exp(-p * std::log(std::abs(x))));
}

double flat_inverse(double u, double p) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("flat_inverse: u must lie in (0, 1)");
  return std::pow(-1.0 / std::log(u), 1.0 / p);
}

SmoothFunction1D SmoothFunction1D::values_only(std::function<double(double)> f, double support_radius,
                                               std::string name) {
  SmoothFunction1D out;
  out.value_ = std::move(f);
  out.radius_ = support_radius;
  out.name_ = std::move(name);
  return out;
}

SmoothFunction1D SmoothFunction1D::zero(double support_radius) {
  return from([](const auto& x) { return decltype(x * 0.0)(0.0); }, support_radius, "zero");
}

Jet SmoothFunction1D::operator()(const Jet& z, int deriv) const {
  if (!jet_) throw std::logic_error("SmoothFunction1D '" + name_ + "' has no derivative information");
  const Jet at = jet_(Jet::variable(z.value()));
  // Taylor coefficients of f^{(deriv)} about z0: c_k = (k+deriv)!/k! * F_{k+deriv}.
  std::array<double, Jet::kOrder> coef{};
  for (int k = 0; k + deriv < Jet::kOrder; ++k) {
    double f = 1.0;
    for (int i = k + 1; i <= k + deriv; ++i) f *= i;
    coef[static_cast<std::size_t>(k)] = f * at[k + deriv];
  }
  return Jet::compose(coef, z);
}

double SmoothFunction1D::derivative(double x, int k) const {
  if (k == 0) return value_(x);
  if (k < 0 || k >= Jet::kOrder) throw std::invalid_argument("derivative order out of range");
  if (!jet_) throw std::logic_error("SmoothFunction1D '" + name_ + "' has no derivative information");
  return jet_(Jet::variable(x)).derivative(k);
}

SmoothFunction1D SmoothFunction1D::scaled(double c) const {
  SmoothFunction1D out = *this;
  auto v = value_;
  out.value_ = [v, c](double x) { return c * v(x); };
  if (jet_) {
    auto j = jet_;
    out.jet_ = [j, c](const Jet& x) { return c * j(x); };
  }
  return out;
}

SmoothFunction1D SmoothFunction1D::reflected() const {
  SmoothFunction1D out = *this;
  auto v = value_;
  out.value_ = [v](double x) { return v(-x); };
  if (jet_) {
    auto j = jet_;
    out.jet_ = [j](const Jet& x) { return j(-x); };
  }
  return out;
}

SmoothFunction1D SmoothFunction1D::added(const SmoothFunction1D& other) const {
  SmoothFunction1D out;
  auto v1 = value_, v2 = other.value_;
  out.value_ = [v1, v2](double x) { return v1(x) + v2(x); };
  if (jet_ && other.jet_) {
    auto j1 = jet_, j2 = other.jet_;
    out.jet_ = [j1, j2](const Jet& x) { return j1(x) + j2(x); };
  }
  out.radius_ = std::max(radius_, other.radius_);
  out.name_ = name_ + " + " + other.name_;
  return out;
}

SmoothFunction1D standard_bump(double r) {
  if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("standard_bump: radius must be positive");
  return SmoothFunction1D::from([r](const auto& x) { return bump_profile(x, r); }, r,
                                "bump(" + std::to_string(r) + ")");
}

SmoothFunction1D CutoffPair::alpha_function() const {
  return SmoothFunction1D::from([](const auto& x) { return cutoff_alpha(x); }, 2.0, "alpha");
}

CutoffPair cutoff_pair() { return {}; }

double psi_tilde(double u, const SmoothFunction1D& psi, double p) {
  if (!(u >= 0.0 && u < 0.5)) throw std::domain_error("psi_tilde: u must lie in [0, 1/2)");
  if (u == 0.0) return psi.value_at_0();
  return psi_tilde_from_log(std::log(u), psi, p);
}

double a_of_u(double u, const SmoothFunction1D& psi, double p) {
  if (!(u >= 0.0 && u < 0.5)) throw std::domain_error("a_of_u: u must lie in [0, 1/2)");
  if (u == 0.0) return -psi.value_at_0();
  return a_from_log(std::log(u), psi, p);
}

Amplitude2D Amplitude2D::product(SmoothFunction1D f1, SmoothFunction1D f2) {
  Amplitude2D out;
  out.product_ = true;
  out.radius1_ = f1.support_radius();
  out.radius2_ = f2.support_radius();
  out.name_ = "product(" + f1.name() + ", " + f2.name() + ")";
  out.value_ = [f1, f2](double a, double b) { return f1(a) * f2(b); };
  if (f1.has_jet() && f2.has_jet())
    out.jet_ = [f1, f2](const Jet& a, const Jet& b) { return f1(a, 0) * f2(b, 0); };
  out.f1_ = std::move(f1);
  out.f2_ = std::move(f2);
  return out;
}

double Amplitude2D::operator()(double x1, double x2) const { return value_(x1, x2); }

double Amplitude2D::d_dx2(double x1, double x2) const {
  if (!jet_) throw std::logic_error("amplitude '" + name_ + "' has no derivative information");
  return jet_(Jet(x1), Jet::variable(x2))[1];
}

SmoothFunction1D Amplitude2D::slice(double x2) const {
  if (product_) return f1_.scaled(f2_(x2));
  auto v = value_;
  if (!jet_) return SmoothFunction1D::values_only([v, x2](double x) { return v(x, x2); }, radius1_, name_);
  auto j = jet_;
  struct Slice {
    std::function<double(double, double)> v;
    std::function<Jet(const Jet&, const Jet&)> j;
    double x2;
    double operator()(double x) const { return v(x, x2); }
    Jet operator()(const Jet& x) const { return j(x, Jet(x2)); }
  };
  return SmoothFunction1D::from(Slice{v, j, x2}, radius1_, name_);
}

Amplitude2D Amplitude2D::reflected(int s1, int s2) const {
  if (product_) {
    return product(s1 < 0 ? f1_.reflected() : f1_, s2 < 0 ? f2_.reflected() : f2_);
  }
  Amplitude2D out = *this;
  const double c1 = s1 < 0 ? -1.0 : 1.0, c2 = s2 < 0 ? -1.0 : 1.0;
  auto v = value_;
  out.value_ = [v, c1, c2](double a, double b) { return v(c1 * a, c2 * b); };
  if (jet_) {
    auto j = jet_;
    out.jet_ = [j, c1, c2](const Jet& a, const Jet& b) { return j(c1 * a, c2 * b); };
  }
  return out;
}

Amplitude2D Amplitude2D::scaled(double c) const {
  if (product_) return product(f1_.scaled(c), f2_);
  Amplitude2D out = *this;
  auto v = value_;
  out.value_ = [v, c](double a, double b) { return c * v(a, b); };
  if (jet_) {
    auto j = jet_;
    out.jet_ = [j, c](const Jet& a, const Jet& b) { return c * j(a, b); };
  }
  return out;
}

Amplitude2D product_bump(double r1, double r2) { return Amplitude2D::product(standard_bump(r1), standard_bump(r2)); }

Amplitude2D radial_bump(double r) {
  if (!(r > 0)) throw std::invalid_argument("radial_bump: radius must be positive");
  return Amplitude2D::general(
      [r](const auto& x1, const auto& x2) {
        using T = std::decay_t<decltype(x1)>;
        const T rho2 = x1 * x1 + x2 * x2;
        if (!(value_of(rho2) < r * r)) return T(0.0);
        using std::exp;
        return exp(-rho2 / (r * r - rho2));
      },
      r, r, "radial(" + std::to_string(r) + ")");
}

Amplitude2D tilted_bump(double r1, double r2) {
  if (!(r1 > 0) || !(r2 > 0)) throw std::invalid_argument("tilted_bump: radii must be positive");
  return Amplitude2D::general(
      [r1, r2](const auto& x1, const auto& x2) {
        return bump_profile(x1, r1) * bump_profile(x2, r2) * (1.0 + x2 + 0.5 * x1 * x2);
      },
      r1, r2, "tilted(" + std::to_string(r1) + ", " + std::to_string(r2) + ")");
}

namespace {

// 32-point Gauss-Legendre on [0, 1].
struct GaussLegendre32 {
  std::array<double, 32> x{}, w{};
  GaussLegendre32() {
    constexpr int n = 32;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[static_cast<std::size_t>(i)] = 0.5 * (1.0 - z);
      w[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

}  // namespace

namespace {

// R for a single x1: `g(y)` = phi(x1, y), `dg(y)` = d/dy phi(x1, y).
template <class G, class DG>
double remainder_from(double x2, int q, G&& g, DG&& dg) {
  if (x2 == 0.0) return dg(0.0);
  const double ex = std::exp(std::pow(x2, q));
  const double phi0 = g(0.0);
  const double beta = cutoff_pair().beta(x2);

  // int_0^1 dP/dx2(x1, s x2) ds with P = e^{x2^q} phi. Near the axis the
  // fixed 32-point rule is used; further out the integral equals the
  // difference quotient (P(x1,x2) - P(x1,0))/x2 exactly and that form is
  // cheaper and free of quadrature error.
  double mean_slope;
  if (std::abs(x2) < 1.0 / 16) {
    static const GaussLegendre32 gl;
    mean_slope = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
      const double y = gl.x[i] * x2;
      const double eq = std::exp(std::pow(y, q));
      mean_slope += gl.w[i] * eq * (q * std::pow(y, q - 1) * g(y) + dg(y));
    }
  } else {
    mean_slope = (ex * g(x2) - phi0) / x2;
  }
  return (beta * phi0 / x2 + mean_slope) / ex;
}

}  // namespace

double remainder_R(double x1, double x2, const Amplitude2D& phi, int q) {
  if (q < 2) throw std::invalid_argument("remainder_R: q must be >= 2");
  return remainder_from(
      x2, q, [&](double y) { return phi(x1, y); }, [&](double y) { return phi.d_dx2(x1, y); });
}

SmoothFunction1D remainder_slice(double x2, const Amplitude2D& phi, int q) {
  if (q < 2) throw std::invalid_argument("remainder_slice: q must be >= 2");
  if (phi.is_product()) {
    // R factorizes as f1(x1) times the one-dimensional remainder of f2.
    const SmoothFunction1D& f2 = phi.factor2();
    const double r2 = remainder_from(
        x2, q, [&](double y) { return f2(y); }, [&](double y) { return f2.derivative(y, 1); });
    return phi.factor1().scaled(r2);
  }
  return SmoothFunction1D::values_only([phi, x2, q](double x1) { return remainder_R(x1, x2, phi, q); },
                                       phi.radius1(), "R(" + phi.name() + ")");
}

double default_radius(double p) {
  if (!(p > 0)) throw std::invalid_argument("default_radius: p must be positive");
  return std::min(0.5, 0.9 * std::pow(1.0 / std::log(2.0), 1.0 / p));
}

}  // namespace flatphase
