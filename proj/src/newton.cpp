#include "flatphase/newton.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <string>

namespace flatphase {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::string_view whole) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed support \"" + std::string(whole) + "\"");
  }
  return v;
}

// z-component of (b - a) x (c - a).
long cross(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
  return static_cast<long>(b.a1 - a.a1) * (c.a2 - a.a2) - static_cast<long>(b.a2 - a.a2) * (c.a1 - a.a1);
}

}  // namespace

SupportSet parse_support(std::string_view text) {
  SupportSet out;
  std::string_view rest = text;
  while (!trim(rest).empty()) {
    const auto semi = rest.find(';');
    const std::string_view item = rest.substr(0, semi);
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    const auto comma = item.find(',');
    if (comma == std::string_view::npos) throw std::invalid_argument("malformed support \"" + std::string(text) + "\"");
    out.push_back({parse_int(item.substr(0, comma), text), parse_int(item.substr(comma + 1), text)});
  }
  return out;
}

std::vector<LatticePoint> polyhedron(const SupportSet& support) {
  if (support.empty()) throw std::invalid_argument("no Taylor support: the Newton polyhedron is undefined");
  SupportSet pts = support;
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].a1 < 0 || pts[i].a2 < 0) throw std::invalid_argument("support exponents must be nonnegative");
    if (pts[i].a1 == 0 && pts[i].a2 == 0) throw std::invalid_argument("support must exclude the origin");
    if (i > 0 && pts[i] == pts[i - 1]) throw std::invalid_argument("duplicate support point");
  }

  // Pareto-minimal points: sorted by a1, keep strict new minima of a2.
  std::vector<LatticePoint> stairs;
  for (const auto& pt : pts) {
    if (stairs.empty() || pt.a2 < stairs.back().a2) stairs.push_back(pt);
  }
  // Lower convex chain; collinear points drop out.
  std::vector<LatticePoint> hull;
  for (const auto& pt : stairs) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) hull.pop_back();
    hull.push_back(pt);
  }
  return hull;
}

NewtonData newton_distance(const std::vector<LatticePoint>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("empty Newton polyhedron");
  NewtonData out;
  out.vertices = vertices;
  const LatticePoint& first = vertices.front();
  const LatticePoint& last = vertices.back();

  bool found = false;
  if (first.a1 >= first.a2) {
    // Vertical ray above the first vertex.
    out.d = first.a1;
    found = true;
  } else if (last.a2 >= last.a1) {
    // Horizontal ray right of the last vertex.
    out.d = last.a2;
    found = true;
  } else {
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
      const LatticePoint& a = vertices[i];
      const LatticePoint& b = vertices[i + 1];
      // a + lambda (b - a) on the diagonal.
      const int gap_a = a.a2 - a.a1;
      const int gap_b = b.a2 - b.a1;
      if (gap_a >= 0 && gap_b <= 0) {
        const double lambda = static_cast<double>(gap_a) / (gap_a - gap_b);
        out.d = a.a1 + lambda * (b.a1 - a.a1);
        found = true;
        break;
      }
    }
  }
  if (!found) throw std::logic_error("diagonal misses the polyhedron boundary");
  out.m = 1;
  for (const auto& v : vertices) {
    if (v.a1 == v.a2 && static_cast<double>(v.a1) == out.d) out.m = 2;
  }
  return out;
}

ScalingLaw predicted_law(double d, int m) {
  if (!(d > 0)) throw std::invalid_argument("Newton distance must be positive");
  if (m != 1 && m != 2) throw std::invalid_argument("multiplicity must be 1 or 2");
  return {1.0 / d, -static_cast<double>(m - 1)};
}

}  // namespace flatphase
