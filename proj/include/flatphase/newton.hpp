#pragma once

#include <compare>
#include <string_view>
#include <vector>

#include "flatphase/asymptotics.hpp"

namespace flatphase {

struct LatticePoint {
  int a1 = 0;
  int a2 = 0;
  auto operator<=>(const LatticePoint&) const = default;
};

/// Exponents of the Taylor monomials of the phase. Flat terms have none.
using SupportSet = std::vector<LatticePoint>;

/// "a1,a2;b1,b2;..." Throws std::invalid_argument on malformed input.
SupportSet parse_support(std::string_view text);

/// Vertices of conv(support + R_{>=0}^2), ordered by increasing a1 (so a2
/// decreases). Throws std::invalid_argument for an empty support ("no Taylor
/// support"), negative coordinates, the origin or duplicates.
std::vector<LatticePoint> polyhedron(const SupportSet& support);

struct NewtonData {
  std::vector<LatticePoint> vertices;
  /// Where the diagonal meets the boundary.
  double d = 0.0;
  /// 2 when (d, d) is a vertex, 1 when it lies inside an edge or ray.
  int m = 1;
};

NewtonData newton_distance(const std::vector<LatticePoint>& vertices);

/// t^{1/d} X^{-(m-1)}: the normalization with a finite nonzero limit for
/// nondegenerate polynomial phases.
ScalingLaw predicted_law(double d, int m);

}  // namespace flatphase
