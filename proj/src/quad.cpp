#include "flatphase/quad.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "adaptive.hpp"

namespace flatphase {

void Interval::validate() const {
  if (!std::isfinite(lo) || std::isnan(hi) || !(lo < hi)) {
    throw std::invalid_argument("invalid interval [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
}

void ToleranceConfig::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0) || max_subdivisions <= 0 || max_evals <= 0) {
    throw std::invalid_argument("tolerances and budgets must be strictly positive");
  }
}

ToleranceConfig ToleranceConfig::with_env_cap() const {
  ToleranceConfig out = *this;
  if (const char* env = std::getenv("FLATPHASE_MAX_EVALS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) out.max_evals = std::min(out.max_evals, cap);
  }
  return out;
}

namespace detail {
namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452742, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

// QUADPACK-style error sharpening for one real component.
double sharpen(double raw, double resasc) {
  double err = raw;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return err;
}

double rounding_floor(double resabs) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return resabs > std::numeric_limits<double>::min() / (50 * eps) ? 50 * eps * resabs : 0.0;
}

}  // namespace

PanelEstimate gauss_kronrod_panel(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  std::array<Complex, 21> fv;
  fv[0] = f(center);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    fv[1 + 2 * j] = f(center - dx);
    fv[2 + 2 * j] = f(center + dx);
  }

  Complex resk = fv[0] * kWgk[10];
  Complex resg{};
  double absk_re = std::abs(fv[0].real()) * kWgk[10];
  double absk_im = std::abs(fv[0].imag()) * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const Complex pair = fv[1 + 2 * j] + fv[2 + 2 * j];
    resk += kWgk[j] * pair;
    absk_re += kWgk[j] * (std::abs(fv[1 + 2 * j].real()) + std::abs(fv[2 + 2 * j].real()));
    absk_im += kWgk[j] * (std::abs(fv[1 + 2 * j].imag()) + std::abs(fv[2 + 2 * j].imag()));
    if (j % 2 == 1) resg += kWg[j / 2] * pair;
  }
  const Complex mean = 0.5 * resk;
  double asc_re = kWgk[10] * std::abs(fv[0].real() - mean.real());
  double asc_im = kWgk[10] * std::abs(fv[0].imag() - mean.imag());
  for (int j = 0; j < 10; ++j) {
    for (int s = 1; s <= 2; ++s) {
      asc_re += kWgk[j] * std::abs(fv[s + 2 * j].real() - mean.real());
      asc_im += kWgk[j] * std::abs(fv[s + 2 * j].imag() - mean.imag());
    }
  }

  const double h = std::abs(half);
  const Complex diff = (resk - resg) * half;
  const double floor_re = rounding_floor(absk_re * h), floor_im = rounding_floor(absk_im * h);
  const double err_re = std::max(floor_re, sharpen(std::abs(diff.real()), asc_re * h));
  const double err_im = std::max(floor_im, sharpen(std::abs(diff.imag()), asc_im * h));
  return {resk * half, std::hypot(err_re, err_im), 21, std::hypot(floor_re, floor_im)};
}

}  // namespace detail

QuadratureResult integrate_adaptive(const Integrand& f, Interval iv, const ToleranceConfig& tol) {
  iv.validate();
  if (!iv.finite()) throw std::invalid_argument("integrate_adaptive needs a finite interval");
  tol.validate();
  return detail::run_adaptive(
      {iv.lo, iv.hi}, [&](double a, double b) { return detail::gauss_kronrod_panel(f, a, b); },
      tol);
}

Complex oscillatory_tail(std::span<const Complex> derivs, double omega, double W) {
  if (omega == 0.0) throw std::invalid_argument("oscillatory_tail: omega must be nonzero");
  if (derivs.empty()) throw std::invalid_argument("oscillatory_tail: need at least one term");
  const Complex iw(0.0, omega);
  const Complex phase = unit_phase(omega, W);
  Complex sum{};
  Complex denom = iw;
  double sign = -1.0;
  for (const Complex& d : derivs) {
    sum += sign * d / denom;
    denom *= iw;
    sign = -sign;
  }
  return phase * sum;
}

QuadratureResult integrate_oscillatory(const OscillatoryProblem& prob, const ToleranceConfig& tol) {
  prob.range.validate();
  tol.validate();
  const double omega = prob.omega;
  const double lo = prob.range.lo;
  double hi = prob.range.hi;

  if (omega == 0.0) {
    if (!prob.range.finite()) throw std::invalid_argument("zero frequency needs a finite interval");
    return integrate_adaptive(prob.amplitude, prob.range, tol);
  }

  const double period = 2 * kPi / std::abs(omega);
  const double cut = std::max(lo, prob.grading_origin) + prob.tail_periods * period;
  bool use_tail = false;
  if (!prob.range.finite()) {
    if (!prob.derivatives) throw std::invalid_argument("semi-infinite range needs amplitude derivatives");
    use_tail = true;
  } else if (prob.derivatives && hi > 10 * cut) {
    use_tail = true;
  }

  QuadratureResult tail;
  tail.converged = true;
  double end = hi;
  if (use_tail) {
    end = std::max(cut, lo);
    const int k = prob.tail_order;
    const auto d = prob.derivatives(end, k + 1);
    tail.value = oscillatory_tail(std::span<const Complex>(d.data(), static_cast<std::size_t>(k)), omega, end);
    // First omitted term bounds the truncation of an asymptotic series whose
    // terms decrease at the cut.
    tail.abs_error_estimate = std::abs(d[static_cast<std::size_t>(k)]) / std::pow(std::abs(omega), k + 1) +
                              8 * std::numeric_limits<double>::epsilon() * std::abs(tail.value);
    tail.n_evals = 1;
  }

  std::vector<double> bp{lo};
  const double origin = prob.grading_origin;
  if (origin < lo) {
    double x = lo;
    while (true) {
      x = origin + 2 * (x - origin);
      if (x >= end) break;
      bp.push_back(x);
    }
  }
  bp.push_back(end);

  const Integrand& s = prob.amplitude;
  const double min_width = prob.filon_min_periods * period;
  auto rule = [&](double a, double b) {
    if (b - a < min_width) {
      return detail::gauss_kronrod_panel(
          [&](double x) { return unit_phase(omega, x) * s(x); }, a, b);
    }
    return detail::filon_panel(s, omega, a, b);
  };
  return detail::run_adaptive(bp, rule, tol, tail);
}

}  // namespace flatphase
