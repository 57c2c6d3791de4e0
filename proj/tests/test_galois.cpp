#include <doctest.h>

#include "oracles.hpp"

using namespace rpv;
using oracle::expr;

namespace {
ContextPtr ctx() {
  static ContextPtr c = oracle::plane();
  return c;
}
RatFunc e(const std::string& s) { return expr(s, ctx()); }
}  // namespace

TEST_CASE("descriptor rendering") {
  CHECK(GaloisClass::trivial().render() == "Trivial");
  CHECK(GaloisClass::cyclic(3).render() == "Cyclic(3)");
  CHECK(GaloisClass::additive().render() == "Ga");
  CHECK(GaloisClass::split_torus(1).render() == "Gm");
  CHECK(GaloisClass::split_torus(2).render() == "Gm^2");
  CHECK(GaloisClass::non_split_torus(1).render() == "SO2");
  CHECK(GaloisClass::non_split_torus(1, 1).render() == "Torus(SO2, Gm)");
  CHECK(GaloisClass::product({GaloisClass::trivial(), GaloisClass::additive()}).render() == "Ga");
  CHECK(GaloisClass::product({GaloisClass::cyclic(2), GaloisClass::additive()}).render() ==
        "Product(Cyclic(2), Ga)");
  CHECK(GaloisClass::unknown("x").render() == "Unknown(\"x\")");
  CHECK_FALSE(GaloisClass::non_split_torus(1).real_split());
  CHECK(GaloisClass::split_torus(1).real_split());
}

TEST_CASE("scalar-plus-constant matching") {
  auto f8 = match_scalar_plus_constant(oracle::system8(ctx()));
  REQUIRE(f8);
  CHECK(eq(f8->f[0], e("1/t1")));
  CHECK(f8->f[1].is_zero());
  CHECK(f8->g[0].is_zero());
  CHECK(eq(f8->g[1], e("1")));
  CHECK(f8->c(0, 1) == QuadScalar(1));
  CHECK(f8->c(1, 0) == QuadScalar(-1));

  auto f9 = match_scalar_plus_constant(oracle::system9(ctx()));
  REQUIRE(f9);
  CHECK(f9->c(0, 1) == QuadScalar(1));
  CHECK(f9->c(1, 0) == QuadScalar(1));

  LinSystem dense(ctx(), 2, {oracle::matrix_of(ctx(), 2, {"t1", "t2", "1", "0"}),
                             oracle::matrix_of(ctx(), 2, {"0", "0", "0", "0"})});
  CHECK_FALSE(match_scalar_plus_constant(dense));
}

TEST_CASE("classify the worked systems") {
  GaloisClass g8 = classify(oracle::system8(ctx()));
  CHECK(g8.render() == "SO2");
  CHECK_FALSE(g8.real_split());
  CHECK(liouvillian_verdict(g8) == Verdict::NotGeneralisedLiouvillian);

  GaloisClass g9 = classify(oracle::system9(ctx()));
  CHECK(g9.render() == "Gm");
  CHECK(g9.real_split());
  CHECK(liouvillian_verdict(g9) == Verdict::GeneralisedLiouvillian);

  GaloisClass g7 = classify(oracle::system7(ctx()));
  CHECK(g7.render() == "Gm");
  CHECK_FALSE(g7.all_assumptions().empty());

  CHECK(liouvillian_verdict(GaloisClass::unknown("outside scoped families")) == Verdict::Unknown);
  LinSystem bad(ctx(), 1, {oracle::matrix_of(ctx(), 1, {"t2"}), oracle::matrix_of(ctx(), 1, {"0"})});
  CHECK_THROWS_AS(classify(bad), NotIntegrable);
}

TEST_CASE("rank-one rule") {
  CHECK(classify_rank_one({e("0"), e("0")}).render() == "Trivial");
  CHECK(classify_rank_one({e("1/(3*t1)"), e("0")}).render() == "Cyclic(3)");
  CHECK(classify_rank_one({e("2/t1"), e("-1/t2")}).render() == "Trivial");
  CHECK(classify_rank_one({e("1/(13*t1)"), e("0")}).render() == "Gm");
  CHECK(classify_rank_one({e("t2"), e("t1")}).render() == "Gm");
}

TEST_CASE("other families") {
  LinSystem diag(ctx(), 2, {oracle::matrix_of(ctx(), 2, {"t2", "0", "0", "1"}),
                            oracle::matrix_of(ctx(), 2, {"t1", "0", "0", "0"})});
  CHECK(classify(diag).real_split());
  LinSystem nil(ctx(), 2, {oracle::matrix_of(ctx(), 2, {"0", "1/t1", "0", "0"}),
                           oracle::matrix_of(ctx(), 2, {"0", "0", "0", "0"})});
  CHECK(classify(nil).render().find("Ga") != std::string::npos);
  LinSystem poly(ctx(), 2, {oracle::matrix_of(ctx(), 2, {"0", "t2", "0", "0"}),
                            oracle::matrix_of(ctx(), 2, {"0", "t1", "0", "0"})});
  CHECK(classify(poly).render() == "Trivial");
  auto line = DiffContext::partial({"x"});
  LinSystem cpl(line, 2, {oracle::matrix_of(line, 2, {"x", "1", "x^2", "0"})});
  CHECK(classify(cpl).contains_unknown());
  CHECK(liouvillian_verdict(classify(cpl)) == Verdict::Unknown);
}

TEST_CASE("Euler equation") {
  EulerClass e1 = classify_euler(Rat(1));
  CHECK(e1.group.render() == "Gm");
  REQUIRE(e1.roots);
  CHECK(e1.roots->first + e1.roots->second == QuadScalar(1));
  CHECK(e1.roots->first * e1.roots->second == QuadScalar(-1));
  CHECK(e1.relation == std::optional<std::string>("y1*y2 = x"));
  CHECK(e1.solutions.at(0) == "x^(1/2 + 1/2*sqrt(5))");

  EulerClass e6 = classify_euler(Rat(6));
  CHECK(e6.group.render() == "Trivial");
  CHECK(e6.solutions.at(0) == "x^3");
  CHECK(e6.solutions.at(1) == "x^(-2)");

  EulerClass en = classify_euler(Rat(-1, 2));
  CHECK(en.group.kind() == GaloisClass::Kind::NonSplitTorus);
  CHECK(en.discriminant == -1);

  CHECK(classify_euler(Rat(-1, 4)).group.render() == "Product(Cyclic(2), Ga)");
  CHECK(classify_euler(Rat(3, 4)).group.render() == "Cyclic(2)");

  oracle::Rng rng(51);
  for (int n = 0; n < 200; ++n) {
    Rat c = rng.rat(30);
    EulerClass ec = classify_euler(c);
    CHECK(ec.discriminant == 1 + 4 * c);
    if (ec.roots) {
      for (const auto& r : {ec.roots->first, ec.roots->second}) CHECK(r * r - r == QuadScalar(c));
    } else {
      CHECK(ec.group.kind() == GaloisClass::Kind::NonSplitTorus);
    }
  }
}

TEST_CASE("classifier agrees with the Kolchin reduction") {
  oracle::Rng rng(52);
  for (int n = 0; n < 200; ++n) {
    LinSystem s = oracle::random_scalar_plus_constant(rng, ctx());
    CHECK(classify(s).render() == classify(kolchin_reduce(s).system).render());
  }
}

TEST_CASE("split decision is invariant under constant conjugation") {
  oracle::Rng rng(53);
  int done = 0;
  while (done < 200) {
    Rat p[4] = {rng.rat(4), rng.rat(4), rng.rat(4), rng.rat(4)};
    if (p[0] * p[3] - p[1] * p[2] == 0) continue;
    LinSystem s = oracle::random_scalar_plus_constant(rng, ctx());
    CHECK(classify(s).render() == classify(oracle::conjugate_constant(s, p)).render());
    ++done;
  }
}
