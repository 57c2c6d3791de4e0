#pragma once

// Independent oracles and random generators shared by the test binaries.
// Nothing here calls the library's derivation or ordering code: derivatives
// are checked by exact dual-number evaluation and signs by exact evaluation
// at a point whose coordinates shrink at very different rates.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rpv/galois.hpp"
#include "rpv/sysio.hpp"
#include "rpv/tower.hpp"

namespace oracle {

using rpv::ContextPtr;
using rpv::LinSystem;
using rpv::MultiPoly;
using rpv::QuadScalar;
using rpv::Rat;
using rpv::RatFunc;
using rpv::RatMatrix;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  long int_in(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(gen_); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(int_in(0, static_cast<long>(n) - 1)); }

  Rat rat(long h = 5) {
    long den = int_in(1, h);
    Rat q(int_in(-h, h), den);
    q.canonicalize();
    return q;
  }
  Rat nonzero_rat(long h = 5) {
    for (;;) {
      Rat q = rat(h);
      if (q != 0) return q;
    }
  }
  QuadScalar scalar(std::int64_t d, long h = 5) {
    if (d == 0 || chance(0.5)) return QuadScalar(rat(h));
    return QuadScalar(rat(h), rat(h), d);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Random polynomial in the listed variables.
inline MultiPoly random_poly(Rng& rng, std::size_t nvars, const std::vector<std::size_t>& vars,
                             unsigned max_deg, std::size_t max_terms, std::int64_t d = 0) {
  MultiPoly p(nvars);
  std::size_t terms = static_cast<std::size_t>(rng.int_in(1, static_cast<long>(max_terms)));
  for (std::size_t i = 0; i < terms; ++i) {
    rpv::Exponents e(nvars, 0);
    for (auto v : vars) e[v] = static_cast<std::uint32_t>(rng.int_in(0, max_deg));
    p += MultiPoly::monomial(e, rng.scalar(d));
  }
  return p;
}

inline std::vector<std::size_t> all_vars(const ContextPtr& ctx) {
  std::vector<std::size_t> v(ctx->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
  return v;
}

inline RatFunc random_ratfunc(Rng& rng, const ContextPtr& ctx, unsigned max_deg = 2,
                              std::size_t max_terms = 3, bool allow_den = true) {
  auto vars = all_vars(ctx);
  MultiPoly num = random_poly(rng, ctx->size(), vars, max_deg, max_terms, ctx->sqrt_tag());
  if (!allow_den || rng.chance(0.4)) return RatFunc(ctx, num);
  for (;;) {
    MultiPoly den = random_poly(rng, ctx->size(), vars, max_deg, 2, ctx->sqrt_tag());
    if (!den.is_zero()) return RatFunc(ctx, num, den);
  }
}

inline RatFunc random_nonzero(Rng& rng, const ContextPtr& ctx, unsigned max_deg = 2) {
  for (;;) {
    RatFunc f = random_ratfunc(rng, ctx, max_deg);
    if (!f.is_zero()) return f;
  }
}

// Exact evaluation ------------------------------------------------------

inline QuadScalar power(const QuadScalar& x, std::uint32_t e) {
  QuadScalar r(1);
  for (std::uint32_t i = 0; i < e; ++i) r *= x;
  return r;
}

inline QuadScalar eval(const MultiPoly& p, const std::vector<QuadScalar>& point) {
  QuadScalar s(0);
  for (const auto& [e, c] : p.terms()) {
    QuadScalar t = c;
    for (std::size_t i = 0; i < e.size(); ++i) t *= power(point[i], e[i]);
    s += t;
  }
  return s;
}

/// Value and first-order coefficient of p(point + eps * dir).
struct Dual {
  QuadScalar v;
  QuadScalar dv;
};

inline Dual mul(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.dv + a.dv * b.v}; }

inline Dual eval_dual(const MultiPoly& p, const std::vector<QuadScalar>& point,
                      const std::vector<QuadScalar>& dir) {
  Dual s{QuadScalar(0), QuadScalar(0)};
  for (const auto& [e, c] : p.terms()) {
    Dual t{c, QuadScalar(0)};
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::uint32_t k = 0; k < e[i]; ++k) t = mul(t, Dual{point[i], dir[i]});
    s.v += t.v;
    s.dv += t.dv;
  }
  return s;
}

/// Directional derivative of num/den at a point by the quotient rule on
/// dual numbers. Requires den(point) != 0.
inline QuadScalar dual_derivative(const RatFunc& f, const std::vector<QuadScalar>& point,
                                  const std::vector<QuadScalar>& dir) {
  Dual n = eval_dual(f.num(), point, dir);
  Dual d = eval_dual(f.den(), point, dir);
  return (n.dv * d.v - n.v * d.dv) / (d.v * d.v);
}

inline QuadScalar eval(const RatFunc& f, const std::vector<QuadScalar>& point) {
  return eval(f.num(), point) / eval(f.den(), point);
}

/// Random point avoiding zeros of the given denominators.
inline std::vector<QuadScalar> random_point(Rng& rng, std::size_t n,
                                            const std::vector<const MultiPoly*>& avoid) {
  for (;;) {
    std::vector<QuadScalar> p;
    for (std::size_t i = 0; i < n; ++i) p.emplace_back(rng.nonzero_rat(7));
    bool ok = true;
    for (auto* q : avoid)
      if (eval(*q, p).is_zero()) ok = false;
    if (ok) return p;
  }
}

// Ordering oracle -------------------------------------------------------

/// Point t_i = 2^-L_i with L_1 << L_2 << ... chosen so that, for inputs of
/// total degree at most `max_deg` and small coefficients, the sign of a
/// polynomial at the point equals its sign in the iterated infinitesimal
/// ordering.
inline std::vector<QuadScalar> infinitesimal_point(std::size_t n, unsigned max_deg = 12) {
  std::vector<QuadScalar> p;
  unsigned long L = 48;
  for (std::size_t i = 0; i < n; ++i) {
    Rat v(1);
    v /= Rat(rpv::Integer(1) << static_cast<mp_bitcnt_t>(L));
    p.emplace_back(v);
    L = L * (max_deg + 2) + 48;
  }
  return p;
}

inline int oracle_sign(const RatFunc& f) {
  if (f.is_zero()) return 0;
  auto pt = infinitesimal_point(f.context()->size());
  return rpv::quad_sign(eval(f.num(), pt)) * rpv::quad_sign(eval(f.den(), pt));
}

// Random systems --------------------------------------------------------

inline RatMatrix mat2(const ContextPtr& ctx, std::vector<RatFunc> v) {
  (void)ctx;
  return RatMatrix(2, 2, std::move(v));
}

/// Gradient of a random polynomial in (t1, t2): closed by construction.
inline std::vector<RatFunc> random_gradient(Rng& rng, const ContextPtr& ctx, unsigned deg,
                                            RatFunc* potential = nullptr) {
  RatFunc phi(ctx, random_poly(rng, ctx->size(), all_vars(ctx), deg, 3));
  if (rng.chance(0.2)) phi = RatFunc(ctx);
  if (potential) *potential = phi;
  return {rpv::derive(phi, 0), rpv::derive(phi, 1)};
}

/// Integrable upper-triangular system over (t1, t2) with polynomial entries:
/// diagonal a = grad(phi), d = grad(psi) and coupling b = (d - a) v + grad(v).
/// Rank 1 in roughly a fifth of the draws.
inline LinSystem random_triangular(Rng& rng, const ContextPtr& ctx) {
  auto a = random_gradient(rng, ctx, 2);
  if (rng.chance(0.2)) {
    return LinSystem(ctx, 1, {RatMatrix(1, 1, std::vector<RatFunc>{a[0]}),
                              RatMatrix(1, 1, std::vector<RatFunc>{a[1]})});
  }
  auto d = rng.chance(0.25) ? a : random_gradient(rng, ctx, 2);
  RatFunc v(ctx, random_poly(rng, ctx->size(), all_vars(ctx), 1, 2));
  std::vector<RatMatrix> ms;
  for (std::size_t k = 0; k < 2; ++k) {
    RatFunc b = (d[k] - a[k]) * v + rpv::derive(v, k);
    ms.push_back(mat2(ctx, {a[k], b, RatFunc(ctx), d[k]}));
  }
  return LinSystem(ctx, 2, std::move(ms));
}

/// A_j = f_j I + g_j C with closed f, g and a random non-scalar constant C.
inline LinSystem random_scalar_plus_constant(Rng& rng, const ContextPtr& ctx) {
  auto f = random_gradient(rng, ctx, 2);
  std::vector<RatFunc> g;
  if (rng.chance(0.5)) {
    g = random_gradient(rng, ctx, 2);
  } else {
    // Constant g keeps the exponential part in the monomial detector's reach.
    g = {RatFunc::constant(ctx, rng.rat(3)), RatFunc::constant(ctx, rng.rat(3))};
  }
  if (g[0].is_zero() && g[1].is_zero()) g[1] = RatFunc::constant(ctx, 1);
  QuadScalar c[4];
  for (;;) {
    for (auto& x : c) x = QuadScalar(rng.rat(4));
    if (!(c[1].is_zero() && c[2].is_zero() && c[0] == c[3])) break;
  }
  std::vector<RatMatrix> ms;
  for (std::size_t k = 0; k < 2; ++k) {
    auto e = [&](int i) { return g[k].scaled(c[i]); };
    ms.push_back(mat2(ctx, {f[k] + e(0), e(1), e(2), f[k] + e(3)}));
  }
  return LinSystem(ctx, 2, std::move(ms));
}

inline LinSystem conjugate_constant(const LinSystem& s, const Rat (&p)[4]) {
  const auto& ctx = s.context();
  Rat det = p[0] * p[3] - p[1] * p[2];
  auto k = [&](const Rat& q) { return RatFunc::constant(ctx, QuadScalar(q)); };
  RatMatrix P(2, 2, std::vector<RatFunc>{k(p[0]), k(p[1]), k(p[2]), k(p[3])});
  RatMatrix Pinv(2, 2, std::vector<RatFunc>{k(p[3] / det), k(-p[1] / det), k(-p[2] / det),
                                            k(p[0] / det)});
  std::vector<RatMatrix> ms;
  for (const auto& a : s.matrices()) ms.push_back(P * a * Pinv);
  return LinSystem(ctx, s.rank(), std::move(ms));
}

// Worked systems and their solutions ----------------------------------

inline ContextPtr plane() { return rpv::DiffContext::partial({"t1", "t2"}); }

inline RatFunc expr(const std::string& text, const ContextPtr& ctx) {
  return rpv::parse_expr(text, ctx);
}

inline RatMatrix matrix_of(const ContextPtr& ctx, std::size_t n,
                           const std::vector<std::string>& entries) {
  std::vector<RatFunc> v;
  for (const auto& e : entries) v.push_back(expr(e, ctx));
  return RatMatrix(n, n, std::move(v));
}

inline LinSystem system7(const ContextPtr& ctx) {
  return LinSystem(ctx, 1, {matrix_of(ctx, 1, {"t2"}), matrix_of(ctx, 1, {"t1"})});
}

inline LinSystem system8(const ContextPtr& ctx) {
  return LinSystem(ctx, 2, {matrix_of(ctx, 2, {"1/t1", "0", "0", "1/t1"}),
                            matrix_of(ctx, 2, {"0", "1", "-1", "0"})});
}

inline LinSystem system9(const ContextPtr& ctx) {
  return LinSystem(ctx, 2, {matrix_of(ctx, 2, {"1/t1", "0", "0", "1/t1"}),
                            matrix_of(ctx, 2, {"0", "1", "1", "0"})});
}

/// Tower and fundamental matrix of the rotation system.
inline std::pair<rpv::Tower, RatMatrix> solution8(const ContextPtr& ctx) {
  using rpv::TowerStep;
  rpv::Tower t = rpv::Tower::base(ctx).extend(
      TowerStep::rotation_pair("s", "c", {RatFunc(ctx), RatFunc::constant(ctx, 1)}));
  return {t, matrix_of(t.context(), 2, {"t1*s", "-t1*c", "t1*c", "t1*s"})};
}

/// Tower E = exp(t2) and the hyperbolic fundamental matrix.
inline std::pair<rpv::Tower, RatMatrix> solution9(const ContextPtr& ctx) {
  using rpv::TowerStep;
  rpv::Tower t = rpv::Tower::base(ctx).extend(
      TowerStep::exp_integral("E", {RatFunc(ctx), RatFunc::constant(ctx, 1)}));
  std::string sh = "t1*(E - 1/E)/2";
  std::string ch = "t1*(E + 1/E)/2";
  return {t, matrix_of(t.context(), 2, {sh, ch, ch, sh})};
}

/// Tower E = exp(t1 t2) and the 1x1 matrix (E).
inline std::pair<rpv::Tower, RatMatrix> solution7(const ContextPtr& ctx) {
  using rpv::TowerStep;
  auto t1 = RatFunc::variable(ctx, "t1");
  auto t2 = RatFunc::variable(ctx, "t2");
  rpv::Tower t = rpv::Tower::base(ctx).extend(TowerStep::exp_integral("E", {t2, t1}));
  return {t, matrix_of(t.context(), 1, {"E"})};
}

/// D M = A_D M on the reduced tower, for a solution that verifies
/// d_j M = A_j M. Towers with rotation steps are rebuilt directly over the
/// Kolchin base since a rotation has no ordinary reduction step.
inline bool kolchin_compatible(const rpv::Tower& t, const LinSystem& s, const RatMatrix& m) {
  if (!rpv::verify_fundamental(t, s, m).ok) return false;
  rpv::ReducedSystem red = rpv::kolchin_reduce(s);
  bool rotation = false;
  for (const auto& st : t.steps()) rotation |= st.kind == rpv::StepKind::RotationPair;
  rpv::Tower rt = rpv::Tower::base(red.context());
  if (!rotation) {
    rt = rpv::reduce_tower(t);
  } else {
    for (const auto& st : t.steps()) {
      if (st.kind != rpv::StepKind::RotationPair) return false;
      RatFunc g(rt.context());
      for (std::size_t k = 0; k < st.coefficients.size(); ++k)
        g += RatFunc::variable(rt.context(), "u" + std::to_string(k + 1)) *
             st.coefficients[k].in_context(rt.context());
      rt = rt.extend(rpv::TowerStep::rotation_pair(st.names[0], st.names[1], {g}));
    }
  }
  return rpv::verify_fundamental(rt, red.system, rpv::in_context(m, rt.context())).ok;
}

}  // namespace oracle
