#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rpv/gradient.hpp"

using namespace rpv;

namespace {
RatFunc xy(const std::string& s) { return oracle::expr(s, plane_context()); }
RatFunc constant_entry(const LinSystem& s, std::size_t i) { return s.matrix(0)(i, i); }
}  // namespace

TEST_CASE("gradient systems") {
  LinSystem s = gradient_system({2, 3});
  CHECK(s.derivation_count() == 1);
  CHECK(constant_entry(s, 0).constant_value() == QuadScalar(4));
  CHECK(constant_entry(s, 1).constant_value() == QuadScalar(6));
  CHECK(s.matrix(0)(0, 1).is_zero());
  CHECK(constant_entry(gradient_system({1, 1}), 0).constant_value() == QuadScalar(2));
  CHECK(constant_entry(gradient_system({-1, 1}), 0).constant_value() == QuadScalar(-2));
  CHECK_THROWS(GradientPotential(0, 1));
}

TEST_CASE("first integrals") {
  CHECK(eq(first_integral({2, 3}), xy("x^3/y^2")));
  CHECK(eq(first_integral({1, 1}), xy("x/y")));
  CHECK(eq(first_integral({-1, 2}), xy("x^2*y")));
  CHECK(certify_first_integral({2, 3}, xy("x^3/y^2")));
  CHECK(certify_first_integral({1, 1}, xy("x/y")));
  CHECK_FALSE(certify_first_integral({2, 3}, xy("x/y")));
}

TEST_CASE("first integrals are certified over a sweep") {
  int cases = 0;
  for (long l = -5; l <= 5; ++l) {
    for (long m = -5; m <= 5; ++m) {
      if (l == 0 || m == 0) continue;
      GradientPotential p(l, m);
      RatFunc i = first_integral(p);
      CHECK(certify_first_integral(p, i));
      CHECK(certify_first_integral(p, i.pow(2)));
      CHECK(certify_first_integral(p, i.pow(3)));
      for (long k : {2L, -3L}) CHECK(certify_first_integral({k * l, k * m}, i));
      ++cases;
    }
  }
  CHECK(cases == 100);
}

TEST_CASE("level curves") {
  LevelCurve c = level_curve({2, 3}, Rat(1));
  CHECK(c.equation == "y^2 = x^3");
  CHECK(c.cusp);
  LevelCurve l = level_curve({1, 1}, Rat(1));
  CHECK(l.equation == "y = x");
  CHECK_FALSE(l.cusp);
  LevelCurve s = level_curve({2, 3}, Rat(4));
  CHECK(s.equation == "4*y^2 = x^3");
  CHECK(s.cusp);
}

TEST_CASE("curvature near the cusp") {
  auto t = curvature_samples({1.0, 1e-2, 1e-4, 1e-6, 1e-8});
  double expected = 0.75 / std::pow(13.0 / 4.0, 1.5);
  CHECK(t[0].second == doctest::Approx(expected).epsilon(1e-12));
  for (std::size_t i = 2; i < t.size(); ++i) CHECK(t[i].second > t[i - 1].second);
  CHECK(t.back().second * std::sqrt(t.back().first) == doctest::Approx(0.75).epsilon(0.01));
  CHECK_THROWS_AS(curvature_samples({0.0}), NonPositiveSample);
  CHECK_THROWS_AS(curvature_samples({-1.0}), NonPositiveSample);
}
