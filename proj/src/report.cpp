#include "flatphase/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace flatphase {

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt::format("{:.17g}", v);
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

/// Builds one JSON object; fields appear in insertion order.
class JsonObject {
 public:
  JsonObject& raw(std::string_view key, const std::string& value) {
    body_ += (body_.empty() ? "" : ", ") + quoted(key) + ": " + value;
    return *this;
  }
  JsonObject& field(std::string_view key, double v) { return raw(key, num(v)); }
  JsonObject& field(std::string_view key, int v) { return raw(key, std::to_string(v)); }
  JsonObject& field(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
  JsonObject& field(std::string_view key, std::string_view v) { return raw(key, quoted(v)); }
  JsonObject& field(std::string_view key, const char* v) { return raw(key, quoted(v)); }
  JsonObject& field(std::string_view key, Complex v) {
    return raw(key, "{\"re\": " + num(v.real()) + ", \"im\": " + num(v.imag()) + "}");
  }
  std::string str() const { return "{" + body_ + "}"; }

 private:
  std::string body_;
};

template <class T, class F>
std::string array(const std::vector<T>& xs, F each) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + each(xs[i]);
  return out + "]";
}

std::string law_json(const ScalingLaw& law) {
  return JsonObject().field("t_exponent", law.t_exponent).field("logt_exponent", law.logt_exponent).str();
}

std::string sample_json(const GridSample& s) {
  return JsonObject()
      .field("piece", piece_name(s.piece))
      .field("X", s.X)
      .field("value", s.value.value)
      .field("abs_err", s.value.abs_error_estimate)
      .field("scaled", s.scaled)
      .field("representation", representation_name(s.value.representation_used))
      .field("converged", s.value.converged)
      .str();
}

std::string complex_text(Complex z) { return fmt::format("{:.10g} {:+.10g}i", z.real(), z.imag()); }

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "text") return OutputFormat::text;
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format \"" + std::string(name) + "\"");
}

void write_csv(std::ostream& os, const std::vector<GridSample>& samples) {
  os << kCsvHeader << '\n';
  for (const auto& s : samples) {
    os << piece_name(s.piece) << ',' << num(s.X) << ',' << num(s.value.value.real()) << ','
       << num(s.value.value.imag()) << ',' << num(s.value.abs_error_estimate) << ',' << num(s.scaled.real())
       << ',' << num(s.scaled.imag()) << '\n';
  }
}

std::string samples_json(const std::vector<GridSample>& samples) { return array(samples, sample_json); }

std::string to_json(const VerificationReport& r) {
  const std::string estimate = JsonObject()
                                   .field("c_hat", r.estimate.c_hat)
                                   .field("fit_degree", r.estimate.fit_degree)
                                   .field("residual_rms", r.estimate.residual_rms)
                                   .raw("grid", array(r.estimate.grid.X, num))
                                   .str();
  return JsonObject()
      .field("claim", r.claim)
      .field("target", r.target)
      .raw("estimate", estimate)
      .field("rel_error", r.rel_error)
      .field("tolerance", r.tolerance)
      .field("pass", r.pass)
      .raw("samples", samples_json(r.samples))
      .str();
}

std::string to_json(const BoundReport& r) {
  return JsonObject()
      .field("claim", r.claim)
      .raw("law", law_json(r.law))
      .field("sup", r.sup)
      .field("trend_slope", r.trend_slope)
      .field("trend_tolerance", r.trend_tolerance)
      .field("pass", r.pass)
      .raw("samples", samples_json(r.samples))
      .str();
}

std::string to_json(const FalsificationReport& r) {
  return JsonObject()
      .field("claim", "falsify")
      .raw("predicted_law", law_json(r.predicted))
      .raw("corrected_law", law_json(r.corrected))
      .raw("growth_ratios", array(r.growth_ratios, num))
      .raw("expected_ratios", array(r.expected_ratios, num))
      .field("ratio_tolerance", r.ratio_tolerance)
      .field("growth_consistent", r.growth_consistent)
      .raw("corrected_limit", to_json(r.corrected_limit))
      .field("pass", r.pass)
      .str();
}

std::string to_json(const NewtonData& d, const ScalingLaw& law) {
  return JsonObject()
      .raw("vertices", array(d.vertices, [](const LatticePoint& v) {
             return "[" + std::to_string(v.a1) + ", " + std::to_string(v.a2) + "]";
           }))
      .field("d", d.d)
      .field("m", d.m)
      .raw("predicted_law", law_json(law))
      .field("note", "flat term ignored")
      .str();
}

std::string to_text(const VerificationReport& r) {
  std::string out;
  for (const auto& s : r.samples) out += fmt::format("  X = {:<6g} scaled = {}\n", s.X, complex_text(s.scaled));
  out += fmt::format("{}: estimate {} (degree {}, residual {:.2e})\n", r.claim, complex_text(r.estimate.c_hat),
                     r.estimate.fit_degree, r.estimate.residual_rms);
  out += fmt::format("{}: target   {}\n", r.claim, complex_text(r.target));
  out += fmt::format("{}: rel_error {:.3e} tolerance {:g} -> {}\n", r.claim, r.rel_error, r.tolerance,
                     r.pass ? "PASS" : "FAIL");
  return out;
}

std::string to_text(const BoundReport& r) {
  std::string out;
  for (const auto& s : r.samples) out += fmt::format("  X = {:<6g} |scaled| = {:.6e}\n", s.X, std::abs(s.scaled));
  out += fmt::format("{}: law t^{:g} X^{:g}, sup {:.6e}, last-octave slope {:.4f} (limit {:g}) -> {}\n", r.claim,
                     r.law.t_exponent, r.law.logt_exponent, r.sup, r.trend_slope, r.trend_tolerance,
                     r.pass ? "PASS" : "FAIL");
  return out;
}

std::string to_text(const FalsificationReport& r) {
  std::string out = to_text(r.corrected_limit);
  out += fmt::format("predicted law t^{:g} X^{:g}: ratios", r.predicted.t_exponent, r.predicted.logt_exponent);
  for (std::size_t i = 0; i < r.growth_ratios.size(); ++i) {
    out += fmt::format(" {:.4f}/{:.4f}", r.growth_ratios[i], r.expected_ratios[i]);
  }
  out += fmt::format(" (within {:g}: {})\n", r.ratio_tolerance, r.growth_consistent ? "yes" : "no");
  out += fmt::format("falsify: {}\n", r.pass ? "PASS" : "FAIL");
  return out;
}

std::string to_text(const NewtonData& d, const ScalingLaw& law) {
  std::string verts;
  for (const auto& v : d.vertices) verts += fmt::format(" ({},{})", v.a1, v.a2);
  // The law is a normalization; the decay it predicts has opposite exponents.
  return fmt::format("vertices:{}\nd = {:g}\nm = {}\npredicted decay: t^{:g} X^{:g}\nnote: flat term ignored\n", verts,
                     d.d, d.m, 0.0 - law.t_exponent, 0.0 - law.logt_exponent);
}

}  // namespace flatphase
