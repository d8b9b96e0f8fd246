#include "flatphase/pieces.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flatphase/specfun.hpp"

namespace flatphase {

namespace {

struct PieceName {
  PieceId id;
  std::string_view name;
};

constexpr std::array<PieceName, 18> kPieceNames = {{
    {PieceId::L, "L"},
    {PieceId::L1, "L1"},
    {PieceId::L2, "L2"},
    {PieceId::M1, "M1"},
    {PieceId::M2, "M2"},
    {PieceId::I2D, "I2D"},
    {PieceId::ITILDE_PLUS, "ITILDE_PLUS"},
    {PieceId::ITILDE_MINUS, "ITILDE_MINUS"},
    {PieceId::J1, "J1"},
    {PieceId::J2, "J2"},
    {PieceId::K1, "K1"},
    {PieceId::K2, "K2"},
    {PieceId::K3, "K3"},
    {PieceId::H1, "H1"},
    {PieceId::H2, "H2"},
    {PieceId::N1, "N1"},
    {PieceId::N2, "N2"},
    {PieceId::S_POWER, "S_POWER"},
}};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view piece_name(PieceId id) {
  for (const auto& e : kPieceNames)
    if (e.id == id) return e.name;
  return "?";
}

PieceId parse_piece(std::string_view name) {
  const std::string u = upper(name);
  for (const auto& e : kPieceNames)
    if (e.name == u) return e.id;
  throw std::invalid_argument("unknown piece '" + std::string(name) + "'");
}

bool is_one_dimensional(PieceId id) {
  switch (id) {
    case PieceId::L:
    case PieceId::L1:
    case PieceId::L2:
    case PieceId::M1:
    case PieceId::M2:
    case PieceId::S_POWER:
      return true;
    default:
      return false;
  }
}

std::string_view representation_name(Representation r) {
  switch (r) {
    case Representation::direct:
      return "direct";
    case Representation::transformed:
      return "transformed";
    case Representation::automatic:
      return "auto";
  }
  return "?";
}

Representation parse_representation(std::string_view name) {
  const std::string l = lower(name);
  if (l == "direct") return Representation::direct;
  if (l == "transformed") return Representation::transformed;
  if (l == "auto" || l == "automatic") return Representation::automatic;
  throw std::invalid_argument("unknown representation '" + std::string(name) + "'");
}

std::string_view i2d_method_name(I2dMethod m) {
  switch (m) {
    case I2dMethod::direct2d:
      return "direct2d";
    case I2dMethod::iterated:
      return "iterated";
    case I2dMethod::factored:
      return "factored";
  }
  return "?";
}

I2dMethod parse_i2d_method(std::string_view name) {
  const std::string l = lower(name);
  if (l == "direct2d") return I2dMethod::direct2d;
  if (l == "iterated") return I2dMethod::iterated;
  if (l == "factored") return I2dMethod::factored;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_X(double X) {
  if (!std::isfinite(X) || X < 0) throw std::invalid_argument("X must be finite and >= 0");
}

void check_p(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw std::invalid_argument("p must be a positive real");
}

Representation resolve(Representation rep, double X, int t_sign) {
  if (t_sign != 1 && t_sign != -1) throw std::invalid_argument("t_sign must be +1 or -1");
  if (rep == Representation::automatic) rep = X <= kDirectMaxX && t_sign < 0 ? Representation::direct
                                                                            : Representation::transformed;
  if (rep == Representation::direct && X > kDirectMaxX)
    throw std::invalid_argument("direct representation is limited to X <= " + std::to_string(kDirectMaxX));
  if (rep == Representation::transformed && t_sign != 1)
    throw std::invalid_argument("t -> -t is only available for the direct representation");
  return rep;
}

PieceValue from_result(const QuadratureResult& r, Complex scale, Representation rep) {
  return {r.value * scale, r.abs_error_estimate * std::abs(scale), rep, r.converged};
}

/// exp(X - x^{-p}) = t e^{-1/x^p}, zero at x = 0.
double scaled_flat(double x, double X, double p) {
  if (x <= 0.0) return 0.0;
  return std::exp(X - std::exp(-p * std::log(x)));
}

/// X^{-1/p}; infinite at X = 0.
double split_point(double X, double p) { return X > 0 ? std::exp(-std::log(X) / p) : kInf; }

/// r^{-p}
double inverse_power(double r, double p) { return std::exp(-p * std::log(r)); }

/// Tolerance for evaluations nested inside an outer integral.
ToleranceConfig inner_tolerance(const ToleranceConfig& tol) {
  ToleranceConfig in = tol;
  in.abs_tol = std::min(tol.abs_tol, 1e-15);
  in.rel_tol = std::min(tol.rel_tol, 1e-10);
  in.max_subdivisions = std::min(tol.max_subdivisions, 400);
  return in;
}

ToleranceConfig outer_tolerance(const ToleranceConfig& tol) {
  ToleranceConfig out = tol;
  out.abs_tol = std::max(tol.abs_tol, 1e-14);
  out.rel_tol = std::max(tol.rel_tol, 1e-10);
  out.max_subdivisions = std::min(tol.max_subdivisions, 4000);
  return out;
}

/// int_0^{hi} e^{i sign e^{X - x^{-p}}} psi(x) dx on the scaled variable x = hi*s.
/// Only used where the phase stays O(1).
QuadratureResult x_form(double X, const SmoothFunction1D& psi, double p, double hi, int t_sign,
                        const ToleranceConfig& tol) {
  auto f = [&](double s) {
    const double x = hi * s;
    const double v = psi(x);
    if (v == 0.0) return Complex{};
    return std::polar(v, t_sign * scaled_flat(x, X, p));
  };
  QuadratureResult r = integrate_adaptive(f, {0.0, 1.0}, tol);
  r.value *= hi;
  r.abs_error_estimate *= hi;
  return r;
}

/// Amplitude of the w = t u form, scaled by X^{b}, b = 1/p + 1:
/// (1/w) (1 - log w / X)^{-b} psi~(w/t).
template <class T>
T w_amplitude(const T& w, double X, double p, const SmoothFunction1D& psi) {
  using std::exp;
  using std::log;
  using std::pow;
  const double b = 1.0 / p + 1.0;
  const T lw = log(w);
  return exp(-lw) * pow(1.0 - lw / X, -b) * psi_tilde_from_log(lw - X, psi, p);
}

/// w^{-2} (1 - log w / X)^{-b} a(w/t).
template <class T>
T w_amplitude_m2(const T& w, double X, double p, const SmoothFunction1D& psi) {
  using std::exp;
  using std::log;
  using std::pow;
  const double b = 1.0 / p + 1.0;
  const T lw = log(w);
  return exp(-2.0 * lw) * pow(1.0 - lw / X, -b) * a_from_log(lw - X, psi, p);
}

template <class Amp>
DerivativeProvider jet_derivatives(Amp amp) {
  return [amp](double W, int k) {
    if (k >= Jet::kOrder) throw std::invalid_argument("too many tail derivatives requested");
    const Jet s = amp(Jet::variable(W));
    std::vector<Complex> d(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) d[static_cast<std::size_t>(j)] = s.derivative(j);
    return d;
  };
}

/// int_{lo}^{w_max} e^{iw} amp(w) dw with graded Filon panels and a jet tail.
template <class Amp>
QuadratureResult w_integral(Amp amp, double lo, double w_max, bool jets, const ToleranceConfig& tol) {
  OscillatoryProblem prob;
  prob.amplitude = [amp](double w) { return Complex(amp(w)); };
  prob.omega = 1.0;
  prob.range = {lo, w_max};
  prob.grading_origin = 0.0;
  if (jets) prob.derivatives = jet_derivatives(amp);
  return integrate_oscillatory(prob, tol);
}

/// int_{lo}^{u_max} e^{i t_sign t u} amp(u) du for the unscaled u-forms.
QuadratureResult u_integral(const Integrand& amp, double X, double lo, double u_max, int t_sign,
                            const ToleranceConfig& tol) {
  OscillatoryProblem prob;
  prob.amplitude = amp;
  prob.omega = t_sign * std::exp(X);
  prob.range = {lo, u_max};
  prob.grading_origin = 0.0;
  return integrate_oscillatory(prob, tol);
}

PieceValue zero_piece(Representation rep) { return {Complex{}, 0.0, rep, true}; }

}  // namespace

PieceValue eval_L1(double X, const SmoothFunction1D& psi, double p, Representation rep,
                   const ToleranceConfig& tol, int t_sign) {
  check_X(X);
  check_p(p);
  tol.validate();
  rep = resolve(rep, X, t_sign);
  const double r = psi.support_radius();
  const double xs = split_point(X, p);

  // Below the split t e^{-1/x^p} <= 1, so the literal x-form is harmless.
  if (rep == Representation::direct || xs >= r) {
    return from_result(x_form(X, psi, p, std::min(xs, r), t_sign, tol), 1.0, rep);
  }

  // x = (X + v)^{-1/p}: L1 = int_0^{xs} psi + (1/(p X^{1+1/p})) int_0^inf
  // (e^{i e^{-v}} - 1) psi((X+v)^{-1/p}) (1 + v/X)^{-1-1/p} dv. The second
  // integrand is below e^{-v}, so the v-range is cut at 60.
  QuadratureResult head = integrate_adaptive([&](double s) { return Complex(psi(xs * s)); }, {0.0, 1.0}, tol);
  const double e = -1.0 - 1.0 / p;
  auto g = [&](double v) {
    const double y = std::exp(-v);
    const double sh = std::sin(0.5 * y);
    const Complex osc(-2.0 * sh * sh, std::sin(y));
    const double x = std::exp(-std::log(X + v) / p);
    return osc * psi(x) * std::exp(e * std::log1p(v / X));
  };
  constexpr double kVEnd = 60.0;
  QuadratureResult corr = integrate_adaptive(g, {0.0, kVEnd}, tol);
  const double pref = std::exp(e * std::log(X)) / p;
  PieceValue out;
  out.value = xs * head.value + pref * corr.value;
  out.abs_error_estimate = xs * head.abs_error_estimate + pref * corr.abs_error_estimate;
  out.representation_used = rep;
  out.converged = head.converged && corr.converged;
  return out;
}

PieceValue eval_L2(double X, const SmoothFunction1D& psi, double p, Representation rep,
                   const ToleranceConfig& tol, int t_sign) {
  check_X(X);
  check_p(p);
  tol.validate();
  rep = resolve(rep, X, t_sign);
  const double r = psi.support_radius();
  const double lead = X - inverse_power(r, p);  // log of the w-support end
  if (lead <= 0.0) return zero_piece(rep);
  const double b = 1.0 / p + 1.0;
  const double pref = std::exp(-b * std::log(X)) / p;

  if (rep == Representation::direct) {
    // u = e^{-1/x^p} on [1/t, e^{-r^{-p}}]:
    // (1/p) int e^{itu} (1/u) (-1/log u)^{b} psi~(u) du, with X^{b} pulled out.
    auto amp = [&](double u) {
      const double lu = std::log(u);
      return Complex(std::pow(-X / lu, b) / u * psi_tilde_from_log(lu, psi, p));
    };
    return from_result(u_integral(amp, X, std::exp(-X), std::exp(-inverse_power(r, p)), t_sign, tol), pref, rep);
  }

  auto amp = [X, p, psi](const auto& w) { return w_amplitude(w, X, p, psi); };
  return from_result(w_integral(amp, 1.0, std::exp(lead), psi.has_jet(), tol), pref, rep);
}

PieceValue eval_L(double X, const SmoothFunction1D& psi, double p, Representation rep,
                  const ToleranceConfig& tol, int t_sign) {
  check_X(X);
  check_p(p);
  tol.validate();
  rep = resolve(rep, X, t_sign);
  const double r = psi.support_radius();
  const double lead = X - inverse_power(r, p);
  // Split where the phase t e^{-1/x^p} reaches w_split: x-form below, the
  // oscillatory form above. The two representations split at different
  // places so that they stay independent of L1 + L2.
  const double w_split = rep == Representation::direct ? 8.0 : 4.0;
  if (lead <= std::log(w_split)) return from_result(x_form(X, psi, p, r, t_sign, tol), 1.0, rep);

  const double xs = std::exp(-std::log(X - std::log(w_split)) / p);
  QuadratureResult head = x_form(X, psi, p, xs, t_sign, tol);
  const double b = 1.0 / p + 1.0;
  const double pref = std::exp(-b * std::log(X)) / p;
  QuadratureResult rest;
  if (rep == Representation::direct) {
    auto amp = [&](double u) {
      const double lu = std::log(u);
      return Complex(std::pow(-X / lu, b) / u * psi_tilde_from_log(lu, psi, p));
    };
    rest = u_integral(amp, X, w_split * std::exp(-X), std::exp(-inverse_power(r, p)), t_sign, tol);
  } else {
    auto amp = [X, p, psi](const auto& w) { return w_amplitude(w, X, p, psi); };
    rest = w_integral(amp, w_split, std::exp(lead), psi.has_jet(), tol);
  }
  PieceValue out;
  out.value = head.value + pref * rest.value;
  out.abs_error_estimate = head.abs_error_estimate + pref * rest.abs_error_estimate;
  out.representation_used = rep;
  out.converged = head.converged && rest.converged;
  return out;
}

PieceValue eval_M1(double X, const SmoothFunction1D& psi, double p) {
  check_X(X);
  check_p(p);
  if (X - inverse_power(psi.support_radius(), p) <= 0.0) return zero_piece(Representation::transformed);
  const double b = 1.0 / p + 1.0;
  const Complex ie1 = Complex(0.0, 1.0) * std::polar(1.0, 1.0);
  const double val = psi_tilde_from_log(-X, psi, p) * std::exp(-b * std::log(X)) / p;
  return {ie1 * val, 4 * kEps * std::abs(val), Representation::transformed, true};
}

PieceValue eval_M2(double X, const SmoothFunction1D& psi, double p, Representation rep,
                   const ToleranceConfig& tol, int t_sign) {
  check_X(X);
  check_p(p);
  tol.validate();
  rep = resolve(rep, X, t_sign);
  const double r = psi.support_radius();
  const double lead = X - inverse_power(r, p);
  if (lead <= 0.0) return zero_piece(rep);
  const double b = 1.0 / p + 1.0;
  const double pref = std::exp(-b * std::log(X)) / p;

  if (rep == Representation::direct) {
    // -(1/(p i t)) int e^{itu} u^{-2} (-1/log u)^{b} a(u) du, with X^{b} and
    // 1/t pulled into the amplitude.
    auto amp = [&](double u) {
      const double lu = std::log(u);
      return Complex(std::pow(-X / lu, b) * std::exp(-X - 2 * lu) * a_from_log(lu, psi, p));
    };
    const Complex scale = Complex(0.0, t_sign) * pref;  // -1/(i sign) = i sign
    return from_result(u_integral(amp, X, std::exp(-X), std::exp(-inverse_power(r, p)), t_sign, tol), scale, rep);
  }

  auto amp = [X, p, psi](const auto& w) { return w_amplitude_m2(w, X, p, psi); };
  return from_result(w_integral(amp, 1.0, std::exp(lead), psi.has_jet(), tol), Complex(0.0, pref), rep);
}

Complex eval_K1_factor(int q, double X) {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
  if (!std::isfinite(X)) throw std::invalid_argument("X must be finite");
  // |1 - it|^{-1/q} = e^{-X/q} (1 + e^{-2X})^{-1/(2q)} and Arg(1 - it) = -atan(t).
  const double mod = X > 0 ? std::exp(-X / q - std::log1p(std::exp(-2 * X)) / (2.0 * q))
                           : std::exp(-std::log1p(std::exp(2 * X)) / (2.0 * q));
  const double arg = std::atan(std::exp(X)) / q;
  return std::polar(gamma_real(1.0 / q + 1.0) * mod, arg);
}

PieceValue eval_K2_factor(int q, double X, const ToleranceConfig& tol) {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
  check_X(X);
  tol.validate();
  // y = x^q: (1/q) int_1^inf e^{ity} e^{-y} beta(y^{1/q}) y^{1/q-1} dy. The
  // amplitude is below e^{-y}, so the range ends at 80.
  constexpr double kYEnd = 80.0;
  const CutoffPair cut = cutoff_pair();
  OscillatoryProblem prob;
  prob.amplitude = [q, cut](double y) {
    const double x = std::pow(y, 1.0 / q);
    return Complex(std::exp(-y) * cut.beta(x) * x / y);
  };
  prob.omega = std::exp(X);
  prob.range = {1.0, kYEnd};
  prob.grading_origin = 1.0;
  const QuadratureResult r = integrate_oscillatory(prob, tol);
  PieceValue out = from_result(r, 1.0 / q, Representation::transformed);
  out.abs_error_estimate += std::exp(-kYEnd) / q;
  return out;
}

PieceValue eval_S_power(int q, double X, const SmoothFunction1D& psi2, int sign, const ToleranceConfig& tol) {
  if (q < 2) throw std::invalid_argument("q must be >= 2");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  check_X(X);
  tol.validate();
  // u = t^{1/q} x: t^{-1/q} int_0^U e^{i sign u^q} psi2(u t^{-1/q}) du.
  const double s = std::exp(-X / q);
  const double U = psi2.support_radius() / s;
  const double ua = std::min(2.0, U);
  const QuadratureResult a = integrate_adaptive(
      [&](double u) { return std::polar(psi2(u * s), sign * std::pow(u, q)); }, {0.0, ua}, tol);
  PieceValue out = from_result(a, s, Representation::transformed);
  if (U <= 2.0) return out;

  // y = u^q beyond u = 2: (1/q) int e^{i sign y} psi2((y/t)^{1/q}) y^{1/q-1} dy.
  auto amp = [X, q, psi2](const auto& y) {
    using std::exp;
    using std::log;
    using T = std::decay_t<decltype(y)>;
    const T ly = log(y);
    const T x = exp((ly - X) / q);
    T v;
    if constexpr (std::is_same_v<T, double>) {
      v = psi2(x);
    } else {
      v = psi2(x, 0);
    }
    return v * exp((1.0 / q - 1.0) * ly) / q;
  };
  OscillatoryProblem prob;
  prob.amplitude = [amp](double y) { return Complex(amp(y)); };
  prob.omega = sign;
  prob.range = {std::pow(2.0, q), std::pow(U, q)};
  prob.grading_origin = 0.0;
  if (psi2.has_jet()) prob.derivatives = jet_derivatives(amp);
  const QuadratureResult b = integrate_oscillatory(prob, tol);
  out.value += s * b.value;
  out.abs_error_estimate += s * b.abs_error_estimate;
  out.converged = out.converged && b.converged;
  return out;
}

namespace {

enum class Weight { none, alpha, beta };

/// int_0^{x2_end} e^{i sigma t x2^q} inner(x2) w(t^{1/q} x2) x2^k dx2, computed in
/// u = t^{1/q} x2: GK on u <= 2, then y = u^q with graded Filon panels.
struct OuterSpec {
  double X = 0.0;
  int q = 2;
  int sigma = 1;
  double x2_end = 0.0;
  Weight weight = Weight::none;
  int x2_power = 0;
  std::function<PieceValue(double)> inner;
};

PieceValue outer_integral(const OuterSpec& spec, Representation rep, const ToleranceConfig& tol) {
  const int q = spec.q;
  const double s = std::exp(-spec.X / q);
  double U = spec.x2_end / s;
  if (spec.weight == Weight::alpha) U = std::min(U, 2.0);
  const CutoffPair cut = cutoff_pair();
  const ToleranceConfig otol = outer_tolerance(tol);

  // (u, |weight| * inner error) at every node, integrated afterwards.
  std::vector<std::pair<double, double>> inner_err;
  bool inner_ok = true;
  auto F = [&](double u) -> Complex {
    double w = 1.0;
    if (spec.weight == Weight::alpha) w = cut.alpha(u);
    if (spec.weight == Weight::beta) w = cut.beta(u);
    if (w == 0.0) return {};
    if (spec.x2_power == 1) w *= u;
    const PieceValue in = spec.inner(u * s);
    inner_err.emplace_back(u, std::abs(w) * in.abs_error_estimate);
    inner_ok = inner_ok && in.converged;
    return w * in.value;
  };

  QuadratureResult total = integrate_adaptive(
      [&](double u) { return std::polar(1.0, spec.sigma * std::pow(u, q)) * F(u); }, {0.0, std::min(2.0, U)},
      otol);
  if (U > 2.0) {
    OscillatoryProblem prob;
    prob.amplitude = [&](double y) {
      const double u = std::pow(y, 1.0 / q);
      return F(u) * (u / (q * y));
    };
    prob.omega = spec.sigma;
    prob.range = {std::pow(2.0, q), std::pow(U, q)};
    prob.grading_origin = 0.0;
    total += integrate_oscillatory(prob, otol);
  }
  // Inner errors enter through int |w| u^k err(u) du; the nodes of both
  // passes are dense enough for a trapezoid sum; the first sample covers
  // the gap down to u = 0.
  std::sort(inner_err.begin(), inner_err.end());
  double propagated = 0.0;
  for (std::size_t i = 0; i + 1 < inner_err.size(); ++i) {
    propagated += 0.5 * (inner_err[i].second + inner_err[i + 1].second) * (inner_err[i + 1].first - inner_err[i].first);
  }
  if (!inner_err.empty()) propagated += inner_err.front().first * inner_err.front().second;
  const double scale = std::pow(s, spec.x2_power + 1);
  PieceValue out;
  out.value = scale * total.value;
  out.abs_error_estimate = scale * (total.abs_error_estimate + propagated);
  out.representation_used = rep;
  out.converged = total.converged && inner_ok;
  return out;
}

const Amplitude2D& need_2d(const EvalRequest& req) {
  if (const auto* a = std::get_if<Amplitude2D>(&req.amplitude)) return *a;
  throw std::invalid_argument(std::string(piece_name(req.piece)) + " needs a two-dimensional amplitude");
}

const SmoothFunction1D& need_1d(const EvalRequest& req) {
  if (const auto* a = std::get_if<SmoothFunction1D>(&req.amplitude)) return *a;
  throw std::invalid_argument(std::string(piece_name(req.piece)) + " needs a one-dimensional amplitude");
}

PieceValue product_value(const PieceValue& a, Complex b, double b_err) {
  PieceValue out = a;
  out.value = a.value * b;
  out.abs_error_estimate = a.abs_error_estimate * std::abs(b) + std::abs(a.value) * b_err +
                           a.abs_error_estimate * b_err;
  return out;
}

PieceValue eval_2d_piece(const EvalRequest& req) {
  const Amplitude2D& phi = need_2d(req);
  const double X = req.X;
  const double p = req.params.p;
  const int q = req.params.q;
  const int ts = req.t_sign;
  Representation rep = resolve(req.representation, X, ts);
  const ToleranceConfig itol = inner_tolerance(req.tol);

  if (req.piece == PieceId::K1 || req.piece == PieceId::K2) {
    const PieceValue l1 = eval_L1(X, phi.slice(0.0), p, rep, req.tol, ts);
    if (req.piece == PieceId::K1) {
      const Complex k = eval_K1_factor(q, X);
      return product_value(l1, ts > 0 ? k : std::conj(k), 8 * kEps * std::abs(k));
    }
    PieceValue k2 = eval_K2_factor(q, X, req.tol);
    if (ts < 0) k2.value = std::conj(k2.value);
    PieceValue out = product_value(l1, k2.value, k2.abs_error_estimate);
    out.converged = l1.converged && k2.converged;
    return out;
  }

  if (rep == Representation::transformed && X > kIteratedMaxX)
    throw std::invalid_argument("two-dimensional pieces are limited to X <= " + std::to_string(kIteratedMaxX));

  OuterSpec spec;
  spec.X = X;
  spec.q = q;
  spec.sigma = ts;
  spec.x2_end = phi.radius2();
  switch (req.piece) {
    case PieceId::ITILDE_PLUS:
    case PieceId::ITILDE_MINUS:
      if (req.piece == PieceId::ITILDE_MINUS) spec.sigma = -ts;
      spec.inner = [&](double x2) { return eval_L(X, phi.slice(x2), p, rep, itol, ts); };
      break;
    case PieceId::J1:
      spec.inner = [&](double x2) { return eval_L1(X, phi.slice(x2), p, rep, itol, ts); };
      break;
    case PieceId::J2:
    case PieceId::N1:
    case PieceId::N2:
      spec.inner = [&](double x2) { return eval_L2(X, phi.slice(x2), p, rep, itol, ts); };
      if (req.piece == PieceId::N1) spec.weight = Weight::alpha;
      if (req.piece == PieceId::N2) spec.weight = Weight::beta;
      break;
    case PieceId::K3:
    case PieceId::H1:
    case PieceId::H2:
      // R(., x2) vanishes for |x2| >= 2.
      spec.x2_end = 2.0;
      spec.x2_power = 1;
      spec.inner = [&](double x2) { return eval_L1(X, remainder_slice(x2, phi, q), p, rep, itol, ts); };
      if (req.piece == PieceId::H1) spec.weight = Weight::alpha;
      if (req.piece == PieceId::H2) spec.weight = Weight::beta;
      break;
    default:
      throw std::logic_error("not a two-dimensional piece");
  }
  return outer_integral(spec, rep, req.tol);
}

PieceValue i2d_direct2d(double X, const Amplitude2D& phi, const FlatPhaseParams& pr, const ToleranceConfig& tol) {
  // Nested Gauss-Kronrod over the first quadrant with the four quadrant
  // reflections folded into the integrand.
  const double t = std::exp(X);
  const int q = pr.q;
  const double sigma_pos = pr.sign;
  const double sigma_neg = q % 2 == 0 ? sigma_pos : -sigma_pos;
  ToleranceConfig itol = inner_tolerance(tol);
  itol.rel_tol = std::min(tol.rel_tol, 1e-12);
  double max_inner_err = 0.0;
  bool inner_ok = true;
  auto outer = [&](double x1) -> Complex {
    auto inner = [&](double x2) {
      const double m = t * std::pow(x2, q);
      const Complex plus = std::polar(1.0, sigma_pos * m), minus = std::polar(1.0, sigma_neg * m);
      return plus * (phi(x1, x2) + phi(-x1, x2)) + minus * (phi(x1, -x2) + phi(-x1, -x2));
    };
    const QuadratureResult r = integrate_adaptive(inner, {0.0, phi.radius2()}, itol);
    max_inner_err = std::max(max_inner_err, r.abs_error_estimate);
    inner_ok = inner_ok && r.converged;
    return std::polar(1.0, scaled_flat(x1, X, pr.p)) * r.value;
  };
  const QuadratureResult r = integrate_adaptive(outer, {0.0, phi.radius1()}, outer_tolerance(tol));
  PieceValue out;
  out.value = r.value;
  out.abs_error_estimate = r.abs_error_estimate + phi.radius1() * max_inner_err;
  out.representation_used = Representation::direct;
  out.converged = r.converged && inner_ok;
  return out;
}

}  // namespace

PieceValue eval_I2d(double X, const Amplitude2D& phi, const FlatPhaseParams& params, I2dMethod method,
                    const ToleranceConfig& tol) {
  check_X(X);
  params.validate();
  tol.validate();
  const int q = params.q;
  const double p = params.p;
  // x2 -> -x2 turns sign x2^q into sign (-1)^q x2^q.
  const int sigma_pos = params.sign;
  const int sigma_neg = q % 2 == 0 ? sigma_pos : -sigma_pos;

  switch (method) {
    case I2dMethod::factored: {
      if (!phi.is_product()) throw std::invalid_argument("factored method needs a product amplitude");
      const SmoothFunction1D& f1 = phi.factor1();
      const SmoothFunction1D& f2 = phi.factor2();
      const PieceValue la = eval_L(X, f1, p, Representation::transformed, tol);
      const PieceValue lb = eval_L(X, f1.reflected(), p, Representation::transformed, tol);
      const PieceValue sa = eval_S_power(q, X, f2, sigma_pos, tol);
      const PieceValue sb = eval_S_power(q, X, f2.reflected(), sigma_neg, tol);
      PieceValue l{la.value + lb.value, la.abs_error_estimate + lb.abs_error_estimate,
                   Representation::transformed, la.converged && lb.converged};
      PieceValue out = product_value(l, sa.value + sb.value, sa.abs_error_estimate + sb.abs_error_estimate);
      out.converged = l.converged && sa.converged && sb.converged;
      return out;
    }
    case I2dMethod::iterated: {
      if (X > kIteratedMaxX)
        throw std::invalid_argument("iterated method is limited to X <= " + std::to_string(kIteratedMaxX));
      const ToleranceConfig itol = inner_tolerance(tol);
      PieceValue total{Complex{}, 0.0, Representation::transformed, true};
      for (int theta2 : {1, -1}) {
        OuterSpec spec;
        spec.X = X;
        spec.q = q;
        spec.sigma = theta2 > 0 ? sigma_pos : sigma_neg;
        spec.x2_end = phi.radius2();
        spec.inner = [&, theta2](double x2) {
          const SmoothFunction1D sl = phi.slice(theta2 * x2);
          return eval_L(X, sl.added(sl.reflected()), p, Representation::transformed, itol);
        };
        const PieceValue part = outer_integral(spec, Representation::transformed, tol);
        total.value += part.value;
        total.abs_error_estimate += part.abs_error_estimate;
        total.converged = total.converged && part.converged;
      }
      return total;
    }
    case I2dMethod::direct2d:
      if (X > kDirect2dMaxX)
        throw std::invalid_argument("direct2d method is limited to X <= " + std::to_string(kDirect2dMaxX));
      return i2d_direct2d(X, phi, params, tol);
  }
  throw std::logic_error("unknown method");
}

PieceValue eval_piece(const EvalRequest& req) {
  req.params.validate();
  check_X(req.X);
  req.tol.validate();
  const double X = req.X;
  const double p = req.params.p;
  switch (req.piece) {
    case PieceId::L:
      return eval_L(X, need_1d(req), p, req.representation, req.tol, req.t_sign);
    case PieceId::L1:
      return eval_L1(X, need_1d(req), p, req.representation, req.tol, req.t_sign);
    case PieceId::L2:
      return eval_L2(X, need_1d(req), p, req.representation, req.tol, req.t_sign);
    case PieceId::M1:
      if (req.t_sign != 1) throw std::invalid_argument("M1 is a closed form in t > 0");
      return eval_M1(X, need_1d(req), p);
    case PieceId::M2:
      return eval_M2(X, need_1d(req), p, req.representation, req.tol, req.t_sign);
    case PieceId::S_POWER:
      if (req.t_sign != 1) throw std::invalid_argument("S_POWER takes the sign through params.sign");
      return eval_S_power(req.params.q, X, need_1d(req), req.params.sign, req.tol);
    case PieceId::I2D:
      if (req.t_sign != 1) throw std::invalid_argument("I2D is evaluated for t > 0 only");
      return eval_I2d(X, need_2d(req), req.params, req.method, req.tol);
    default:
      return eval_2d_piece(req);
  }
}

}  // namespace flatphase
