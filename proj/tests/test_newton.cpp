#include <gtest/gtest.h>

#include <stdexcept>

#include "flatphase/newton.hpp"
#include "oracles.hpp"

using namespace flatphase;

TEST(Polyhedron, Examples) {
  EXPECT_EQ(polyhedron({{0, 3}}), (std::vector<LatticePoint>{{0, 3}}));
  EXPECT_EQ(polyhedron({{2, 0}, {0, 2}}), (std::vector<LatticePoint>{{0, 2}, {2, 0}}));
  EXPECT_EQ(polyhedron({{2, 0}, {1, 1}, {0, 2}}), (std::vector<LatticePoint>{{0, 2}, {2, 0}}));
  // Dominated and interior points drop out.
  EXPECT_EQ(polyhedron({{3, 3}, {0, 4}, {4, 0}, {1, 1}}), (std::vector<LatticePoint>{{0, 4}, {1, 1}, {4, 0}}));
}

TEST(Polyhedron, RejectsBadSupport) {
  EXPECT_THROW(polyhedron({}), std::invalid_argument);
  EXPECT_THROW(polyhedron({{0, 0}}), std::invalid_argument);
  EXPECT_THROW(polyhedron({{1, 2}, {1, 2}}), std::invalid_argument);
  EXPECT_THROW(polyhedron({{-1, 2}}), std::invalid_argument);
}

TEST(Polyhedron, EmptySupportMessage) {
  try {
    polyhedron({});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("no Taylor support"), std::string::npos);
  }
}

TEST(NewtonDistance, Examples) {
  for (int q = 2; q <= 5; ++q) {
    const auto d = newton_distance(polyhedron({{0, q}}));
    EXPECT_EQ(d.d, q);
    EXPECT_EQ(d.m, 1);
  }
  auto d = newton_distance(polyhedron({{2, 0}, {0, 2}}));
  EXPECT_EQ(d.d, 1.0);
  EXPECT_EQ(d.m, 1);
  d = newton_distance(polyhedron({{1, 1}}));
  EXPECT_EQ(d.d, 1.0);
  EXPECT_EQ(d.m, 2);
  // x^4 + y^2: edge x/4 + y/2 = 1 meets the diagonal at 4/3.
  d = newton_distance(polyhedron({{4, 0}, {0, 2}}));
  EXPECT_NEAR(d.d, 4.0 / 3.0, 1e-15);
  EXPECT_EQ(d.m, 1);
}

TEST(PredictedLaw, Examples) {
  ScalingLaw l = predicted_law(3, 1);
  EXPECT_DOUBLE_EQ(l.t_exponent, 1.0 / 3.0);
  EXPECT_EQ(l.logt_exponent, 0.0);
  l = predicted_law(1, 2);
  EXPECT_EQ(l.t_exponent, 1.0);
  EXPECT_EQ(l.logt_exponent, -1.0);
  l = predicted_law(1, 1);
  EXPECT_EQ(l.t_exponent, 1.0);
  EXPECT_EQ(l.logt_exponent, 0.0);
  EXPECT_THROW(predicted_law(0, 1), std::invalid_argument);
  EXPECT_THROW(predicted_law(2, 3), std::invalid_argument);
}

TEST(ParseSupport, Forms) {
  EXPECT_EQ(parse_support("0,2"), (SupportSet{{0, 2}}));
  EXPECT_EQ(parse_support(" 2, 0 ; 0 ,2;"), (SupportSet{{2, 0}, {0, 2}}));
  EXPECT_THROW(parse_support("0;2"), std::invalid_argument);
  EXPECT_THROW(parse_support("a,2"), std::invalid_argument);
}

namespace {

std::vector<LatticePoint> box(int n) {
  std::vector<LatticePoint> pts;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      if (a || b) pts.push_back({a, b});
    }
  }
  return pts;
}

}  // namespace

TEST(NewtonProperty, SinglePointClosedForm) {
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      if (!a && !b) continue;
      const auto d = newton_distance(polyhedron({{a, b}}));
      EXPECT_EQ(d.d, std::max(a, b));
      EXPECT_EQ(d.m, a == b ? 2 : 1);
    }
  }
}

TEST(NewtonProperty, ThreePointSupportsMatchBruteForce) {
  const auto pts = box(4);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const SupportSet s{pts[i], pts[j], pts[k]};
        const auto nd = newton_distance(polyhedron(s));
        const auto bf = oracle::newton_brute_force(s, 8);
        ASSERT_NEAR(nd.d, static_cast<double>(bf.num) / bf.den, 1e-12);
        ASSERT_EQ(nd.m, bf.m);
      }
    }
  }
}

TEST(NewtonProperty, SwapSymmetry) {
  const auto pts = box(5);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const SupportSet s{pts[i], pts[j]};
      const SupportSet t{{pts[i].a2, pts[i].a1}, {pts[j].a2, pts[j].a1}};
      const auto a = newton_distance(polyhedron(s));
      const auto b = newton_distance(polyhedron(t));
      ASSERT_DOUBLE_EQ(a.d, b.d);
      ASSERT_EQ(a.m, b.m);
    }
  }
}

TEST(NewtonProperty, EnlargingNeverIncreasesDistance) {
  const auto pts = box(5);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const double d1 = newton_distance(polyhedron({pts[i]})).d;
      const double d2 = newton_distance(polyhedron({pts[i], pts[j]})).d;
      ASSERT_LE(d2, d1 + 1e-15);
    }
  }
}
