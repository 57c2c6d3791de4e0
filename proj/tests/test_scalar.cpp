#include <doctest.h>

#include "oracles.hpp"

using namespace rpv;

TEST_CASE("quad_sign examples") {
  CHECK(quad_sign(QuadScalar()) == 0);
  CHECK(quad_sign(QuadScalar(Rat(3), Rat(-1), 5)) == 1);
  CHECK(quad_sign(QuadScalar(Rat(-1), Rat(1), 2)) == 1);
  CHECK(quad_sign(QuadScalar(Rat(1), Rat(-1), 2)) == -1);
  CHECK(quad_sign(QuadScalar(Rat(-2), Rat(-1), 3)) == -1);
}

TEST_CASE("indicial roots") {
  auto [a, b] = indicial_roots(Rat(1));
  CHECK(a == QuadScalar(Rat(1, 2), Rat(1, 2), 5));
  CHECK(b == QuadScalar(Rat(1, 2), Rat(-1, 2), 5));
  auto [c, d] = indicial_roots(Rat(0));
  CHECK(c == QuadScalar(1));
  CHECK(d == QuadScalar(0));
  auto [e, f] = indicial_roots(Rat(6));
  CHECK(e == QuadScalar(3));
  CHECK(f == QuadScalar(-2));
  CHECK(e.is_rational());
  CHECK_THROWS_AS(indicial_roots(Rat(-1)), NegativeDiscriminant);
}

TEST_CASE("square roots collapse and mixed fields are rejected") {
  CHECK(QuadScalar::sqrt_of(36) == QuadScalar(6));
  CHECK(QuadScalar::sqrt_of(12) == QuadScalar(Rat(0), Rat(2), 3));
  QuadScalar r2 = QuadScalar::sqrt_of(2);
  CHECK((r2 * r2).is_rational());
  CHECK(r2 * r2 == QuadScalar(2));
  CHECK_THROWS_AS(r2 + QuadScalar::sqrt_of(3), MixedQuadraticField);
  CHECK_THROWS_AS(QuadScalar(0).inverse(), DivisionByZero);
  CHECK(QuadScalar(Rat(1, 2), Rat(1, 2), 5).to_string() == "1/2 + 1/2*sqrt(5)");
}

TEST_CASE("field axioms on random samples") {
  oracle::Rng rng(11);
  for (int n = 0; n < 300; ++n) {
    std::int64_t d = std::vector<std::int64_t>{2, 3, 5, 7}[rng.index(4)];
    QuadScalar x = rng.scalar(d), y = rng.scalar(d), z = rng.scalar(d);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x + y == y + x);
    CHECK(x - x == QuadScalar(0));
    if (!x.is_zero()) CHECK(x * x.inverse() == QuadScalar(1));
    CHECK(quad_sign(x * y) == quad_sign(x) * quad_sign(y));
    CHECK(compare(x, y) == -compare(y, x));
  }
}

TEST_CASE("indicial roots satisfy the indicial equation") {
  oracle::Rng rng(12);
  int done = 0;
  while (done < 200) {
    Rat c = rng.rat(20);
    if (1 + 4 * c < 0) continue;
    auto [r1, r2] = indicial_roots(c);
    CHECK(r1 + r2 == QuadScalar(1));
    CHECK(r1 * r2 == QuadScalar(Rat(-c)));
    CHECK(r1 * r1 - r1 == QuadScalar(c));
    ++done;
  }
}

TEST_CASE("linear solve over constants") {
  std::vector<std::vector<QuadScalar>> rows = {{1, 1}, {1, -1}};
  auto x = solve_linear(rows, {3, 1}, 2);
  REQUIRE(x);
  CHECK((*x)[0] == QuadScalar(2));
  CHECK((*x)[1] == QuadScalar(1));
  CHECK_FALSE(solve_linear({{1, 1}, {2, 2}}, {1, 3}, 2));
}
