#include "flatphase/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "flatphase/asymptotics.hpp"
#include "flatphase/newton.hpp"
#include "flatphase/report.hpp"
#include "flatphase/specfun.hpp"

namespace flatphase {

namespace {

/// Everything a subcommand may read; flags and the config file fill it.
struct RunConfig {
  double p = 1.0;
  int q = 2;
  int sign = 1;
  std::string amplitude = "product";
  std::optional<double> r1, r2;
  std::string grid;
  std::string method = "factored";
  std::string representation = "auto";
  std::optional<double> tol;
  int fit_degree = 2;
  std::string format = "text";
  std::string out_path;

  std::string piece;
  std::string pieces = "J2,K3,H2,N1,N2";
  double X = 10.0;
  std::string part = "i";
  bool falsify = false;
  double trend_tol = kTrendTolerance;
  std::string support;
};

/// Thrown for bad user input; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GridSpec parse_grid(const std::string& text, const GridSpec& fallback) {
  if (text.empty()) return fallback;
  GridSpec g;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      g.X.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("malformed --grid \"" + text + "\"");
    }
  }
  g.validate();
  return g;
}

std::vector<PieceId> parse_piece_list(const std::string& text) {
  std::vector<PieceId> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_piece(item));
  if (out.empty()) throw UsageError("empty piece list");
  return out;
}

FlatPhaseParams params_of(const RunConfig& c) {
  FlatPhaseParams params{c.p, c.q, c.sign};
  params.validate();
  return params;
}

SmoothFunction1D psi_of(const RunConfig& c) { return standard_bump(c.r1.value_or(default_radius(c.p))); }

Amplitude2D phi_of(const RunConfig& c) {
  const double r1 = c.r1.value_or(default_radius(c.p));
  const double r2 = c.r2.value_or(r1);
  if (c.amplitude == "product") return product_bump(r1, r2);
  if (c.amplitude == "radial") return radial_bump(r1);
  if (c.amplitude == "tilted") return tilted_bump(r1, r2);
  throw UsageError("unknown --amplitude \"" + c.amplitude + "\" (product, radial, tilted)");
}

EvalRequest request_of(const RunConfig& c, PieceId id) {
  EvalRequest req;
  req.piece = id;
  req.params = params_of(c);
  if (is_one_dimensional(id)) {
    req.amplitude = psi_of(c);
  } else {
    req.amplitude = phi_of(c);
  }
  req.representation = parse_representation(c.representation);
  req.method = parse_i2d_method(c.method);
  if (c.tol) req.tol.rel_tol = *c.tol;
  return req;
}

/// The bound law of a piece, or no scaling where none is defined.
ScalingLaw law_or_identity(PieceId id, const FlatPhaseParams& params) {
  try {
    return decay_law(id, params);
  } catch (const std::invalid_argument&) {
    return {};
  }
}

GridSample sample_at(const EvalRequest& base, double X) {
  EvalRequest req = base;
  req.X = X;
  GridSample s;
  s.piece = req.piece;
  s.X = X;
  s.value = eval_piece(req);
  s.scaled = scaled_value(s.value.value, X, law_or_identity(req.piece, req.params));
  return s;
}

struct Output {
  std::string text;
  int code = kExitOk;
};

Output emit_samples(const std::vector<GridSample>& samples, OutputFormat fmt) {
  if (fmt == OutputFormat::json) return {samples_json(samples) + "\n"};
  std::ostringstream os;
  write_csv(os, samples);
  return {os.str()};
}

template <class Report>
Output emit_report(const Report& r, OutputFormat fmt, const std::vector<GridSample>& samples) {
  Output o;
  if (fmt == OutputFormat::json) {
    o.text = to_json(r) + "\n";
  } else if (fmt == OutputFormat::csv) {
    o = emit_samples(samples, fmt);
  } else {
    o.text = to_text(r);
  }
  o.code = r.pass ? kExitOk : kExitVerificationFailed;
  return o;
}

Output cmd_constants(const RunConfig& c, OutputFormat fmt) {
  const TheoremConstant cq = c_constant(c.q);
  const Complex e1 = e1_tail(1.0);
  if (fmt == OutputFormat::csv) throw UsageError("constants support text and json output");
  if (fmt == OutputFormat::json) {
    return {fmt::format("{{\"q\": {}, \"C_q\": {{\"re\": {:.17g}, \"im\": {:.17g}}}, "
                        "\"E1_minus_i\": {{\"re\": {:.17g}, \"im\": {:.17g}}}}}\n",
                        c.q, cq.value.real(), cq.value.imag(), e1.real(), e1.imag())};
  }
  return {fmt::format("C_{} = {:.10f} {:+.10f}i\nE1(-i) = {:.10f} {:+.10f}i\n", c.q, cq.value.real(),
                      cq.value.imag(), e1.real(), e1.imag())};
}

Output cmd_eval(const RunConfig& c, OutputFormat fmt) {
  if (c.piece.empty()) throw UsageError("eval needs --piece");
  const EvalRequest req = request_of(c, parse_piece(c.piece));
  return emit_samples({sample_at(req, c.X)}, fmt);
}

Output cmd_pieces(const RunConfig& c, OutputFormat fmt) {
  const GridSpec grid = parse_grid(c.grid, GridSpec::moderate());
  std::vector<GridSample> samples;
  for (PieceId id : parse_piece_list(c.pieces)) {
    const EvalRequest req = request_of(c, id);
    for (double X : grid.X) samples.push_back(sample_at(req, X));
  }
  return emit_samples(samples, fmt);
}

Output cmd_lemma(const RunConfig& c, OutputFormat fmt) {
  LemmaPart part;
  if (c.part == "i") {
    part = LemmaPart::i;
  } else if (c.part == "ii") {
    part = LemmaPart::ii;
  } else {
    throw UsageError("--part must be i or ii");
  }
  const double tol = c.tol.value_or(part == LemmaPart::i ? 0.02 : 0.05);
  const auto r = verify_lemma21(part, c.p, psi_of(c), parse_grid(c.grid, GridSpec::standard()), tol, c.fit_degree);
  return emit_report(r, fmt, r.samples);
}

Output cmd_theorem(const RunConfig& c, OutputFormat fmt) {
  const GridSpec grid = parse_grid(c.grid, GridSpec::standard());
  const double tol = c.tol.value_or(0.02);
  if (c.falsify) {
    const auto r = falsify_predicted_law(params_of(c), phi_of(c), grid, tol);
    return emit_report(r, fmt, r.corrected_limit.samples);
  }
  const auto r = verify_theorem11(params_of(c), phi_of(c), grid, parse_i2d_method(c.method), tol, c.fit_degree);
  return emit_report(r, fmt, r.samples);
}

Output cmd_bound(const RunConfig& c, OutputFormat fmt) {
  const PieceId id = parse_piece(c.piece.empty() ? "I2D" : c.piece);
  const EvalRequest req = request_of(c, id);
  const auto r = check_bound(req, decay_law(id, req.params), parse_grid(c.grid, GridSpec::moderate()), c.trend_tol);
  return emit_report(r, fmt, r.samples);
}

Output cmd_newton(const RunConfig& c, OutputFormat fmt) {
  const NewtonData d = newton_distance(polyhedron(parse_support(c.support)));
  const ScalingLaw law = predicted_law(d.d, d.m);
  if (fmt == OutputFormat::csv) throw UsageError("newton supports text and json output");
  return {fmt == OutputFormat::json ? to_json(d, law) + "\n" : to_text(d, law)};
}

void add_model_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--p", c.p, "flatness exponent p > 0");
  sub->add_option("--q", c.q, "power of x2, q >= 2");
  sub->add_option("--sign", c.sign, "sign of the x2^q term (+1 or -1)");
  sub->add_option("--amplitude", c.amplitude, "product, radial or tilted");
  sub->add_option("--r1", c.r1, "support radius in x1 (default depends on p)");
  sub->add_option("--r2", c.r2, "support radius in x2 (default r1)");
  sub->add_option("--method", c.method, "I2D method: factored, iterated, direct2d");
  sub->add_option("--rep", c.representation, "direct, transformed or auto");
}

void add_output_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--format", c.format, "text, csv or json");
  sub->add_option("--out", c.out_path, "write the report here instead of stdout");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical verification of oscillatory integrals with a flat phase term"};
  app.set_config("--config", "", "INI file; [section] names match subcommands");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.require_subcommand(1, 1);

  RunConfig c;
  auto* constants = app.add_subcommand("constants", "limit constants C_q and E1(-i)");
  constants->add_option("--q", c.q, "power of x2");
  add_output_options(constants, c);

  auto* eval = app.add_subcommand("eval", "one piece at one X");
  add_model_options(eval, c);
  add_output_options(eval, c);
  eval->add_option("--piece", c.piece, "piece name (L, L1, ..., I2D)")->required();
  eval->add_option("--X", c.X, "X = log t");
  eval->add_option("--tol", c.tol, "quadrature relative tolerance");

  auto* lemma = app.add_subcommand("lemma", "limits of the scaled one-dimensional pieces");
  add_model_options(lemma, c);
  add_output_options(lemma, c);
  lemma->add_option("--part", c.part, "i or ii");
  lemma->add_option("--grid", c.grid, "comma-separated X values");
  lemma->add_option("--tol", c.tol, "relative tolerance on the limit");
  lemma->add_option("--fit-degree", c.fit_degree, "polynomial degree in 1/X");

  auto* theorem = app.add_subcommand("theorem", "limit of t^{1/q} X^{1/p} I");
  add_model_options(theorem, c);
  add_output_options(theorem, c);
  theorem->add_option("--grid", c.grid, "comma-separated X values");
  theorem->add_option("--tol", c.tol, "relative tolerance on the limit");
  theorem->add_option("--fit-degree", c.fit_degree, "polynomial degree in 1/X");
  theorem->add_flag("--falsify", c.falsify, "also test the Newton-polyhedron law");

  auto* pieces = app.add_subcommand("pieces", "table of pieces over a grid");
  add_model_options(pieces, c);
  add_output_options(pieces, c);
  pieces->add_option("--pieces", c.pieces, "comma-separated piece names");
  pieces->add_option("--grid", c.grid, "comma-separated X values");
  pieces->add_option("--tol", c.tol, "quadrature relative tolerance");

  auto* bound = app.add_subcommand("bound", "boundedness of a scaled piece");
  add_model_options(bound, c);
  add_output_options(bound, c);
  bound->add_option("--piece", c.piece, "piece name (default I2D)");
  bound->add_option("--grid", c.grid, "comma-separated X values");
  bound->add_option("--tol", c.tol, "quadrature relative tolerance");
  bound->add_option("--trend-tol", c.trend_tol, "largest accepted last-octave log-log slope");

  auto* newton = app.add_subcommand("newton", "Newton distance and multiplicity");
  newton->add_option("--support", c.support, "exponents \"a1,a2;b1,b2\"")->required();
  add_output_options(newton, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Output result;
  try {
    const OutputFormat fmt = parse_format(c.format);
    if (constants->parsed()) result = cmd_constants(c, fmt);
    if (eval->parsed()) result = cmd_eval(c, fmt);
    if (lemma->parsed()) result = cmd_lemma(c, fmt);
    if (theorem->parsed()) result = cmd_theorem(c, fmt);
    if (pieces->parsed()) result = cmd_pieces(c, fmt);
    if (bound->parsed()) result = cmd_bound(c, fmt);
    if (newton->parsed()) result = cmd_newton(c, fmt);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "evaluation failed: " << e.what() << '\n';
    return kExitVerificationFailed;
  }

  if (c.out_path.empty()) {
    out << result.text;
  } else {
    std::ofstream file(c.out_path, std::ios::binary);
    if (!file || !(file << result.text) || !file.flush()) {
      err << "error: cannot write " << c.out_path << '\n';
      return kExitUsage;
    }
  }
  return result.code;
}

}  // namespace flatphase
