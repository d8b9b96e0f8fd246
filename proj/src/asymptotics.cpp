#include "flatphase/asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "flatphase/newton.hpp"
#include "flatphase/specfun.hpp"

namespace flatphase {

void GridSpec::validate() const {
  if (X.empty()) throw std::invalid_argument("empty X grid");
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (!(X[i] > 1.0) || !std::isfinite(X[i])) throw std::invalid_argument("grid X values must be finite and > 1");
    if (i > 0 && !(X[i] > X[i - 1])) throw std::invalid_argument("grid X values must be strictly increasing");
  }
}

GridSpec GridSpec::standard() { return {{25.0, 50.0, 100.0, 200.0, 400.0}}; }

GridSpec GridSpec::moderate() { return {{10.0, 15.0, 20.0, 25.0, 30.0}}; }

Complex scaled_value(Complex value, double X, const ScalingLaw& law) {
  if (!(X > 0)) throw std::invalid_argument("scaled_value needs X > 0");
  if (value == Complex{}) return {};
  const double log_factor = law.t_exponent * X + law.logt_exponent * std::log(X);
  const double log_mod = std::log(std::abs(value)) + log_factor;
  if (log_mod > std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("scaled value overflows: the piece is inconsistent with its decay law");
  }
  // Direct product keeps full precision; the log form loses |log|v|| ulps.
  const double t_factor = std::exp(law.t_exponent * X);
  const Complex direct = value * t_factor * std::pow(X, law.logt_exponent);
  if (std::isfinite(t_factor) && std::abs(value) >= std::numeric_limits<double>::min() &&
      std::isfinite(direct.real()) && std::isfinite(direct.imag())) {
    return direct;
  }
  return std::polar(std::exp(log_mod), std::arg(value));
}

LimitEstimate extrapolate(const std::vector<std::pair<double, Complex>>& values, int degree) {
  if (degree < 0) throw std::invalid_argument("fit degree must be nonnegative");
  const auto n = static_cast<Eigen::Index>(values.size());
  if (n < degree + 2) throw std::invalid_argument("extrapolation needs at least degree + 2 points");
  std::vector<double> xs;
  for (const auto& [X, v] : values) {
    if (!(X > 0) || !std::isfinite(X) || !std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("extrapolation input must be finite with X > 0");
    }
    xs.push_back(X);
  }
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) throw std::invalid_argument("degenerate grid: repeated X");

  // Columns in s / s_max keep the Vandermonde matrix well scaled.
  const double s_max = 1.0 / xs.front();
  Eigen::MatrixXd A(n, degree + 1);
  Eigen::MatrixXd rhs(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = (1.0 / values[static_cast<std::size_t>(i)].first) / s_max;
    double pw = 1.0;
    for (int k = 0; k <= degree; ++k) {
      A(i, k) = pw;
      pw *= s;
    }
    rhs(i, 0) = values[static_cast<std::size_t>(i)].second.real();
    rhs(i, 1) = values[static_cast<std::size_t>(i)].second.imag();
  }
  const Eigen::MatrixXd coef = A.colPivHouseholderQr().solve(rhs);
  const Eigen::MatrixXd resid = A * coef - rhs;

  LimitEstimate out;
  out.c_hat = {coef(0, 0), coef(0, 1)};
  out.fit_degree = degree;
  out.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  out.grid.X = xs;
  return out;
}

namespace {

double relative_error(Complex estimate, Complex target) {
  const double scale = std::abs(target);
  return scale > 0 ? std::abs(estimate - target) / scale : std::abs(estimate);
}

void finish(VerificationReport& r, int degree) {
  std::vector<std::pair<double, Complex>> pts;
  for (const auto& s : r.samples) pts.emplace_back(s.X, s.scaled);
  r.estimate = extrapolate(pts, degree);
  r.rel_error = relative_error(r.estimate.c_hat, r.target);
  r.pass = r.rel_error <= r.tolerance;
}

}  // namespace

VerificationReport verify_lemma21(LemmaPart part, double p, const SmoothFunction1D& psi, const GridSpec& grid,
                                  double tol, int degree) {
  grid.validate();
  VerificationReport r;
  r.tolerance = tol;
  const double psi0 = psi.value_at_0();
  const ScalingLaw law{0.0, part == LemmaPart::i ? 1.0 / p : 1.0 / p + 1.0};
  r.claim = part == LemmaPart::i ? "lemma-i" : "lemma-ii";
  r.target = part == LemmaPart::i ? Complex(psi0) : psi0 * e1_tail(1.0);
  const PieceId id = part == LemmaPart::i ? PieceId::L1 : PieceId::L2;
  for (double X : grid.X) {
    GridSample s;
    s.piece = id;
    s.X = X;
    s.value = part == LemmaPart::i ? eval_L1(X, psi, p, Representation::transformed)
                                   : eval_L2(X, psi, p, Representation::transformed);
    s.scaled = scaled_value(s.value.value, X, law);
    r.samples.push_back(s);
  }
  finish(r, degree);
  return r;
}

VerificationReport verify_theorem11(const FlatPhaseParams& params, const Amplitude2D& phi, const GridSpec& grid,
                                    I2dMethod method, double tol, int degree) {
  params.validate();
  grid.validate();
  VerificationReport r;
  r.claim = "theorem";
  r.tolerance = tol;
  Complex c = c_constant(params.q).value * phi(0.0, 0.0);
  if (params.sign < 0) c = std::conj(c);
  r.target = c;
  const ScalingLaw law{1.0 / params.q, 1.0 / params.p};
  for (double X : grid.X) {
    GridSample s;
    s.piece = PieceId::I2D;
    s.X = X;
    s.value = eval_I2d(X, phi, params, method);
    s.scaled = scaled_value(s.value.value, X, law);
    r.samples.push_back(s);
  }
  finish(r, degree);
  return r;
}

ScalingLaw decay_law(PieceId piece, const FlatPhaseParams& params) {
  const double tq = 1.0 / params.q;
  const double lp = 1.0 / params.p;
  switch (piece) {
    case PieceId::J2:
    case PieceId::N1:
    case PieceId::N2:
      return {tq, lp + 1.0};
    case PieceId::K3:
    case PieceId::H1:
    case PieceId::H2:
      return {2.0 * tq, lp};
    case PieceId::I2D:
    case PieceId::ITILDE_PLUS:
    case PieceId::ITILDE_MINUS:
    case PieceId::J1:
    case PieceId::K1:
      return {tq, lp};
    case PieceId::L1:
      return {0.0, lp};
    case PieceId::L2:
    case PieceId::M1:
    case PieceId::M2:
      return {0.0, lp + 1.0};
    default:
      throw std::invalid_argument("no decay law for piece " + std::string(piece_name(piece)));
  }
}

BoundReport check_bound(const EvalRequest& request, const ScalingLaw& law, const GridSpec& grid,
                        double trend_tolerance) {
  grid.validate();
  BoundReport out;
  out.claim = "bound-" + std::string(piece_name(request.piece));
  out.law = law;
  out.trend_tolerance = trend_tolerance;
  for (double X : grid.X) {
    EvalRequest req = request;
    req.X = X;
    GridSample s;
    s.piece = req.piece;
    s.X = X;
    s.value = eval_piece(req);
    s.scaled = scaled_value(s.value.value, X, law);
    out.sup = std::max(out.sup, std::abs(s.scaled));
    out.samples.push_back(s);
  }

  // Least-squares slope of log|v| against log X over [X_last / 2, X_last].
  const double x_last = grid.X.back();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  bool vanishing = false;
  for (const auto& s : out.samples) {
    if (s.X < 0.5 * x_last) continue;
    const double mod = std::abs(s.scaled);
    if (mod == 0.0) {
      vanishing = true;
      continue;
    }
    const double lx = std::log(s.X), ly = std::log(mod);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n >= 2) {
    const double denom = n * sxx - sx * sx;
    out.trend_slope = denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
  } else if (!vanishing && out.sup > 0) {
    throw std::invalid_argument("the last octave of the grid needs at least two points");
  }
  out.pass = std::isfinite(out.sup) && out.trend_slope <= trend_tolerance;
  return out;
}

FalsificationReport falsify_predicted_law(const FlatPhaseParams& params, const Amplitude2D& phi,
                                          const GridSpec& grid, double limit_tol) {
  params.validate();
  grid.validate();
  if (grid.X.size() < 2) throw std::invalid_argument("falsification needs at least two grid points");
  FalsificationReport out;
  // The flat term has no Taylor support, so the polyhedron sees x2^q alone.
  const NewtonData nd = newton_distance(polyhedron({{0, params.q}}));
  out.predicted = predicted_law(nd.d, nd.m);
  out.corrected = {1.0 / params.q, 1.0 / params.p};

  out.corrected_limit = verify_theorem11(params, phi, grid, I2dMethod::factored, limit_tol);
  std::vector<double> predicted_mod;
  for (const auto& s : out.corrected_limit.samples) {
    predicted_mod.push_back(std::abs(scaled_value(s.value.value, s.X, out.predicted)));
  }
  out.growth_consistent = true;
  for (std::size_t i = 0; i + 1 < grid.X.size(); ++i) {
    // Under the predicted law the sequence loses X^{-1/p}, so the earlier
    // point exceeds the later one by the missing factor.
    const double ratio = predicted_mod[i] / predicted_mod[i + 1];
    const double expected = std::pow(grid.X[i + 1] / grid.X[i], 1.0 / params.p);
    out.growth_ratios.push_back(ratio);
    out.expected_ratios.push_back(expected);
    if (!(std::abs(ratio / expected - 1.0) <= out.ratio_tolerance)) out.growth_consistent = false;
  }
  out.pass = out.growth_consistent && out.corrected_limit.pass;
  return out;
}

}  // namespace flatphase
