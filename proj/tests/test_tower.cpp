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

TEST_CASE("exponential step") {
  Tower t = Tower::base(ctx()).extend(TowerStep::exp_integral("E", {e("t2"), e("t1")}));
  auto E = t.element("E");
  CHECK(t.equal(t.derive_elem(t.mul(E, E), 0), expr("2*t2*E^2", t.context())));
  CHECK(t.equal(t.derive_elem(t.embed(e("t1")) * E, 1), expr("t1^2*E", t.context())));
  CHECK_THROWS_AS(Tower::base(ctx()).extend(TowerStep::exp_integral("E", {e("0"), e("0")})),
                  DegenerateStep);
  CHECK_THROWS_AS(t.extend(TowerStep::exp_integral("t1", {e("1"), e("0")})), VariableClash);
  CHECK_THROWS_AS(Tower::base(ctx()).extend(TowerStep::exp_integral("E", {e("t2^2"), e("t2")})),
                  CompatibilityViolation);
}

TEST_CASE("integral step flags") {
  Tower log = Tower::base(ctx()).extend(TowerStep::integral("L", {e("1/t1"), e("0")}));
  CHECK(log.steps()[0].flags.nonderivative == CheckState::Yes);
  CHECK(log.steps()[0].flags.not_exact == CheckState::Yes);
  CHECK_THROWS_AS(Tower::base(ctx()).extend(TowerStep::integral("L", {e("t2^2"), e("t2")})),
                  CompatibilityViolation);
  Tower poly = Tower::base(ctx()).extend(TowerStep::integral("W", {e("t2"), e("t1")}));
  CHECK(poly.steps()[0].flags.not_exact == CheckState::No);
}

TEST_CASE("rotation pair keeps its relation") {
  Tower t = Tower::base(ctx()).extend(TowerStep::rotation_pair("s", "c", {e("0"), e("1")}));
  auto s = t.element("s"), c = t.element("c");
  CHECK(t.equal(s * s + c * c, expr("1", t.context())));
  CHECK(t.is_zero(t.derive_elem(s * s + c * c, 1)));
  CHECK(t.equal(t.derive_elem(s, 1), c));
  CHECK(t.equal(t.derive_elem(c, 1), -s));
}

TEST_CASE("algebraic step") {
  auto actx = ctx()->with_generators({"a"});
  Tower t = Tower::base(ctx()).extend(TowerStep::algebraic("a", expr("a^2 - t1", actx)));
  auto a = t.element("a");
  CHECK(t.equal(a * a * a, expr("t1*a", t.context())));
  CHECK(t.equal(t.derive_elem(a, 0), expr("1/(2*a)", t.context())));
  CHECK(t.steps()[0].flags.irreducible == CheckState::Yes);
  CHECK_THROWS_AS(Tower::base(ctx()).extend(TowerStep::algebraic("a", expr("a^2 - t1^2", actx))),
                  ReducibleMinimalPolynomial);
}

TEST_CASE("verify_fundamental on the worked solutions") {
  auto s8 = oracle::system8(ctx());
  auto [t8, m8] = oracle::solution8(ctx());
  auto v8 = verify_fundamental(t8, s8, m8);
  CHECK(v8.ok);
  CHECK(t8.equal(*v8.det, expr("t1^2", t8.context())));
  auto bad = m8;
  bad(1, 1) = -bad(1, 1);
  auto vb = verify_fundamental(t8, s8, bad);
  CHECK_FALSE(vb.ok);
  CHECK_FALSE(vb.failures.empty());

  auto s9 = oracle::system9(ctx());
  auto [t9, m9] = oracle::solution9(ctx());
  auto v9 = verify_fundamental(t9, s9, m9);
  CHECK(v9.ok);
  CHECK(t9.equal(*v9.det, expr("-t1^2", t9.context())));
  // A verified solution forces the integrability conditions.
  CHECK(check_integrability(s8).integrable);
  CHECK(check_integrability(s9).integrable);

  // Singular matrices are rejected even when each column solves the system.
  auto sing = m9;
  sing(0, 1) = sing(0, 0);
  sing(1, 1) = sing(1, 0);
  auto vs = verify_fundamental(t9, s9, sing);
  CHECK_FALSE(vs.ok);
  CHECK_FALSE(vs.det_nonzero);
}

TEST_CASE("solve_triangular examples") {
  auto s7 = oracle::system7(ctx());
  auto sol7 = solve_triangular(s7);
  REQUIRE(sol7.tower.steps().size() == 1);
  CHECK(sol7.tower.steps()[0].kind == StepKind::ExpIntegral);
  CHECK(verify_fundamental(sol7.tower, s7, sol7.fundamental).ok);

  LinSystem nil(ctx(), 2, {oracle::matrix_of(ctx(), 2, {"0", "t2", "0", "0"}),
                           oracle::matrix_of(ctx(), 2, {"0", "t1", "0", "0"})});
  auto soln = solve_triangular(nil);
  CHECK(soln.tower.empty());
  CHECK(eq(soln.fundamental(0, 1), e("t1*t2")));

  LinSystem inf(ctx(), 1, {oracle::matrix_of(ctx(), 1, {"1/t1"}), oracle::matrix_of(ctx(), 1, {"0"})});
  auto soli = solve_triangular(inf);
  CHECK(soli.tower.empty());
  CHECK(eq(soli.fundamental(0, 0), e("t1")));

  LinSystem rot = oracle::system8(ctx());
  CHECK_THROWS_AS(solve_triangular(rot), NotTriangular);
  LinSystem bad(ctx(), 1, {oracle::matrix_of(ctx(), 1, {"t2"}), oracle::matrix_of(ctx(), 1, {"0"})});
  CHECK_THROWS_AS(solve_triangular(bad), NotIntegrable);
}

TEST_CASE("solve_triangular soundness on random systems") {
  oracle::Rng rng(41);
  for (int n = 0; n < 100; ++n) {
    LinSystem s = oracle::random_triangular(rng, ctx());
    auto sol = solve_triangular(s);
    CHECK(verify_fundamental(sol.tower, s, sol.fundamental).ok);
    CHECK(certify_tower(sol.tower).verdict == Certification::Liouvillian);
    CHECK(liouvillian_verdict(classify(s)) != Verdict::NotGeneralisedLiouvillian);
  }
}

TEST_CASE("certify_tower") {
  Tower t7 = oracle::solution7(ctx()).first;
  CHECK(certify_tower(t7).verdict == Certification::Liouvillian);
  auto rot = certify_tower(oracle::solution8(ctx()).first);
  CHECK(rot.verdict == Certification::NotCertified);
  CHECK(rot.reason == "non-split rotation step");
  auto actx = ctx()->with_generators({"a"});
  Tower alg = Tower::base(ctx()).extend(TowerStep::algebraic("a", expr("a^2 - t1", actx)));
  CHECK(certify_tower(alg).verdict == Certification::GeneralisedLiouvillian);
  CHECK(certify_tower(Tower::base(ctx())).verdict == Certification::Liouvillian);
}

TEST_CASE("certification is monotone under appended steps") {
  Tower t = oracle::solution7(ctx()).first;
  Tower u = t.extend(TowerStep::integral("L", {expr("1/t1", t.context()), expr("0", t.context())}));
  CHECK(certify_tower(u).verdict == Certification::Liouvillian);
  auto actx = u.context()->with_generators({"a"});
  Tower w = u.extend(TowerStep::algebraic("a", expr("a^2 - t1", actx)));
  CHECK(certify_tower(w).verdict == Certification::GeneralisedLiouvillian);
  Tower x = w.extend(TowerStep::exp_integral("F", {expr("1", w.context()), expr("0", w.context())}));
  CHECK(certify_tower(x).verdict == Certification::GeneralisedLiouvillian);
}

TEST_CASE("reduce_tower") {
  Tower log = Tower::base(ctx()).extend(TowerStep::integral("L", {e("1/t1"), e("0")}));
  Tower rl = reduce_tower(log);
  REQUIRE(rl.steps().size() == 1);
  CHECK(rl.steps()[0].flags.inherited);
  CHECK(eq(rl.steps()[0].coefficients[0].in_context(rl.base_context()), expr("u1/t1", rl.base_context())));

  Tower t7 = oracle::solution7(ctx()).first;
  Tower r7 = reduce_tower(t7);
  CHECK(eq(r7.steps()[0].coefficients[0].in_context(r7.base_context()),
           expr("u1*t2 + u2*t1", r7.base_context())));
  // D on the reduced tower agrees with sum u_k d_k on the original one.
  auto E = t7.element("E");
  RatFunc x = t7.mul(t7.embed(e("t1^2 + t2")), E);
  RatFunc lhs = r7.derive_elem(x.in_context(r7.context()), 0);
  RatFunc rhs(r7.context());
  for (std::size_t k = 0; k < 2; ++k)
    rhs += RatFunc::variable(r7.context(), "u" + std::to_string(k + 1)) *
           t7.derive_elem(x, k).in_context(r7.context());
  CHECK(r7.equal(lhs, rhs));

  CHECK(reduce_tower(Tower::base(ctx())).empty());
  CHECK_THROWS_AS(reduce_tower(oracle::solution8(ctx()).first), UnsupportedStep);
}

TEST_CASE("fixed subfield towers") {
  Tower t7 = oracle::solution7(ctx()).first;
  CHECK(same_structure(fixed_subfield_power(t7, 1), t7));
  Tower t2 = fixed_subfield_power(t7, 2);
  CHECK(eq(t2.steps()[0].coefficients[0].in_context(ctx()), e("2*t2")));
  CHECK(eq(t2.steps()[0].coefficients[1].in_context(ctx()), e("2*t1")));
  Tower t3 = fixed_subfield_power(t7, 3);
  CHECK(eq(t3.steps()[0].coefficients[0].in_context(ctx()), e("3*t2")));
  CHECK_THROWS(fixed_subfield_power(t7, 0));
}

TEST_CASE("relations and commuting derivations on random towers") {
  oracle::Rng rng(42);
  for (int n = 0; n < 200; ++n) {
    Tower t = Tower::base(ctx());
    for (int i = 0; i < 3; ++i) {
      std::string nm = "g" + std::to_string(i);
      auto grad = oracle::random_gradient(rng, ctx(), 2);
      for (auto& x : grad) x = x.in_context(t.context());
      try {
        switch (rng.int_in(0, 3)) {
          case 0: {
            auto pctx = t.context()->with_generators({nm});
            RatFunc p = RatFunc::variable(pctx, nm).pow(2) -
                        RatFunc(ctx(), oracle::random_poly(rng, 2, {0, 1}, 2, 2)).in_context(pctx);
            t = t.extend(TowerStep::algebraic(nm, p));
            break;
          }
          case 1:
            t = t.extend(TowerStep::rotation_pair(nm + "s", nm + "c", grad));
            break;
          case 2:
            t = t.extend(TowerStep::integral(nm, grad));
            break;
          default:
            if (grad[0].is_zero() && grad[1].is_zero()) grad[1] = RatFunc::constant(t.context(), 1);
            t = t.extend(TowerStep::exp_integral(nm, grad));
            break;
        }
      } catch (const ReducibleMinimalPolynomial&) {
      }
    }
    for (const auto& r : t.relations())
      for (std::size_t k = 0; k < 2; ++k) CHECK(t.is_zero(t.derive_elem(r, k)));
    RatFunc x = t.embed(oracle::random_ratfunc(rng, ctx(), 1, 2, false));
    for (const auto& g : t.generators()) x = t.add(x, t.mul(t.element(g), t.embed(oracle::random_ratfunc(rng, ctx(), 1, 2, false))));
    CHECK(t.equal(t.derive_elem(t.derive_elem(x, 0), 1), t.derive_elem(t.derive_elem(x, 1), 0)));
  }
}
