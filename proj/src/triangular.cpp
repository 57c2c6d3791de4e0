#include <algorithm>
#include <map>

#include "rpv/error.hpp"
#include "rpv/tower.hpp"

namespace rpv {

namespace {

std::string fresh_name(const Tower& t, const std::string& base) {
  std::string name = base;
  while (t.context()->index_of(name)) name += "_";
  return name;
}

MultiPoly lcm(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_constant()) return b;
  if (b.is_constant()) return a;
  return *(a * b).divide_exact(gcd(a, b));
}

void monomials_up_to(std::size_t nvars, const std::vector<std::size_t>& vars, std::uint32_t bound,
                     std::size_t at, Exponents& cur, std::uint32_t used,
                     std::vector<Exponents>& out) {
  if (at == vars.size()) {
    out.push_back(cur);
    return;
  }
  for (std::uint32_t e = 0; used + e <= bound; ++e) {
    cur[vars[at]] = e;
    monomials_up_to(nvars, vars, bound, at + 1, cur, used + e, out);
  }
  cur[vars[at]] = 0;
}

// Rational v with d_k v + gamma_k v = q_k for every k, searched as P / Q with
// Q the lcm of the denominators of q and P of bounded total degree.
std::optional<RatFunc> solve_risch_ansatz(const std::vector<RatFunc>& gamma,
                                          const std::vector<RatFunc>& q) {
  const ContextPtr& ctx = q.front().context();
  const std::size_t n = ctx->size();
  const std::size_t m = q.size();
  auto coords = ctx->vars_of_kind(VarKind::Coordinate);
  MultiPoly Q = MultiPoly::constant(n, QuadScalar(1));
  std::uint32_t qdeg = 0;
  for (const auto& x : q) {
    Q = lcm(Q, x.den());
    qdeg = std::max(qdeg, x.num().total_degree());
  }
  const std::uint32_t bound = std::min<std::uint32_t>(qdeg + Q.total_degree() + 2, 12);
  std::vector<Exponents> basis;
  Exponents cur(n, 0);
  monomials_up_to(n, coords, bound, 0, cur, 0, basis);

  RatFunc qinv = RatFunc(ctx, Q).inverse();
  std::vector<std::vector<RatFunc>> e(m);
  std::vector<MultiPoly> mult(m, MultiPoly::constant(n, QuadScalar(1)));
  for (std::size_t k = 0; k < m; ++k) {
    mult[k] = lcm(mult[k], q[k].den());
    for (const auto& phi : basis) {
      RatFunc b = RatFunc(ctx, MultiPoly::monomial(phi, QuadScalar(1))) * qinv;
      RatFunc x = derive(b, k) + gamma[k] * b;
      mult[k] = lcm(mult[k], x.den());
      e[k].push_back(std::move(x));
    }
  }
  std::map<std::pair<std::size_t, Exponents>, std::size_t> row_of;
  std::vector<std::vector<QuadScalar>> rows;
  std::vector<QuadScalar> rhs;
  auto row = [&](std::size_t k, const Exponents& ex) {
    auto [it, ins] = row_of.try_emplace({k, ex}, rows.size());
    if (ins) {
      rows.emplace_back(basis.size());
      rhs.emplace_back(0);
    }
    return it->second;
  };
  for (std::size_t k = 0; k < m; ++k) {
    RatFunc scale(ctx, mult[k]);
    RatFunc target = q[k] * scale;
    if (!target.is_polynomial()) return std::nullopt;
    for (const auto& [ex, c] : target.num().terms()) rhs[row(k, ex)] += c;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      RatFunc x = e[k][i] * scale;
      if (!x.is_polynomial()) return std::nullopt;
      for (const auto& [ex, c] : x.num().terms()) rows[row(k, ex)][i] += c;
    }
  }
  auto sol = solve_linear(std::move(rows), std::move(rhs), basis.size());
  if (!sol) return std::nullopt;
  MultiPoly p(n);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!(*sol)[i].is_zero()) p.add_term(basis[i], (*sol)[i]);
  RatFunc v = RatFunc(ctx, p) * qinv;
  for (std::size_t k = 0; k < m; ++k)
    if (!eq(derive(v, k) + gamma[k] * v, q[k])) return std::nullopt;
  return v;
}

// Splits x = q * G with q free of generators and G a Laurent monomial in the
// generator variables. Returns the generator exponents.
std::optional<std::map<std::size_t, long>> generator_monomial(const RatFunc& x,
                                                              const std::vector<std::size_t>& gens) {
  auto exps = [&](const MultiPoly& p) -> std::optional<std::map<std::size_t, long>> {
    std::optional<std::map<std::size_t, long>> seen;
    for (const auto& [e, c] : p.terms()) {
      std::map<std::size_t, long> g;
      for (auto v : gens)
        if (e[v] != 0) g[v] = e[v];
      if (seen && *seen != g) return std::nullopt;
      seen = g;
    }
    return seen;
  };
  auto en = exps(x.num());
  auto ed = exps(x.den());
  if (!en || !ed) return std::nullopt;
  for (const auto& [v, e] : *ed) (*en)[v] -= e;
  std::erase_if(*en, [](const auto& kv) { return kv.second == 0; });
  return en;
}

}  // namespace

TriangularSolution solve_triangular(const LinSystem& s) {
  const std::size_t r = s.rank();
  const std::size_t m = s.derivation_count();
  for (std::size_t k = 0; k < m; ++k)
    if (!is_upper_triangular(s.matrix(k)))
      throw NotTriangular("matrix " + std::to_string(k + 1) + " is not upper triangular");
  auto iv = check_integrability(s);
  if (!iv.integrable)
    throw NotIntegrable("integrability fails for the pair (" + std::to_string(iv.i + 1) + ", " +
                        std::to_string(iv.j + 1) + ")");

  const ContextPtr& base = s.context();
  Tower t = Tower::base(base);
  std::vector<std::string> notes;
  std::vector<RatFunc> diag;  // in the tower context at the time it was built

  struct ExpGen {
    std::string name;
    std::vector<RatFunc> b;  // base context
  };
  std::vector<ExpGen> exps;

  for (std::size_t i = 0; i < r; ++i) {
    std::vector<RatFunc> b;
    bool zero = true;
    for (std::size_t k = 0; k < m; ++k) {
      b.push_back(s.matrix(k)(i, i));
      zero &= b.back().is_zero();
    }
    if (zero) {
      diag.push_back(RatFunc::constant(base, QuadScalar(1)));
      continue;
    }
    if (auto q = monomial_log_derivative(b)) {
      bool integral = true;
      for (const auto& x : *q) integral &= x.is_integer();
      if (integral) {
        RatFunc h = RatFunc::constant(base, QuadScalar(1));
        auto coords = base->vars_of_kind(VarKind::Coordinate);
        for (std::size_t j = 0; j < coords.size(); ++j)
          h *= RatFunc::variable(base, coords[j]).pow(static_cast<int>((*q)[j].a().get_num().get_si()));
        diag.push_back(h);
        notes.push_back("diagonal " + std::to_string(i + 1) + ": in-field solution " + h.to_string());
        continue;
      }
    }
    std::optional<RatFunc> reuse;
    for (const auto& ex : exps) {
      std::optional<QuadScalar> lambda;
      bool ok = true;
      for (std::size_t k = 0; k < m && ok; ++k) {
        if (ex.b[k].is_zero()) {
          ok = b[k].is_zero();
          continue;
        }
        auto ratio = (b[k] / ex.b[k]).constant_value();
        if (!ratio || (lambda && !(*ratio == *lambda))) ok = false;
        else lambda = ratio;
      }
      if (ok && lambda && lambda->is_integer()) {
        reuse = t.element(ex.name).pow(static_cast<int>(lambda->a().get_num().get_si()));
        notes.push_back("diagonal " + std::to_string(i + 1) + ": power of " + ex.name);
        break;
      }
    }
    if (reuse) {
      diag.push_back(*reuse);
      continue;
    }
    std::string name = fresh_name(t, "E" + std::to_string(i + 1));
    t = t.extend(TowerStep::exp_integral(name, b));
    exps.push_back({name, b});
    diag.push_back(t.element(name));
  }

  RatMatrix mat = zero_matrix(t.context(), r, r);
  auto set_diag = [&]() {
    for (std::size_t i = 0; i < r; ++i) mat(i, i) = t.embed(diag[i]);
  };
  set_diag();

  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t ii = j; ii-- > 0;) {
      const std::size_t i = ii;
      std::vector<TowerElem> c;
      bool zero = true;
      for (std::size_t k = 0; k < m; ++k) {
        RatFunc sum(t.context());
        for (std::size_t l = i + 1; l <= j; ++l)
          sum += t.embed(s.matrix(k)(i, l)) * mat(l, j);
        TowerElem ck = t.div(sum, mat(i, i));
        zero &= ck.is_zero();
        c.push_back(std::move(ck));
      }
      if (zero) continue;

      std::optional<TowerElem> w;
      auto gens = t.context()->vars_of_kind(VarKind::Generator);
      std::optional<std::map<std::size_t, long>> gmono;
      for (const auto& ck : c) {
        if (ck.is_zero()) continue;
        auto g = generator_monomial(ck, gens);
        if (!g || (gmono && *g != *gmono)) {
          gmono.reset();
          break;
        }
        gmono = g;
      }
      if (gmono) {
        // gamma_k = d_k G / G, defined when G only involves exponential generators.
        std::vector<RatFunc> gamma(m, RatFunc(base));
        bool usable = true;
        RatFunc gel = RatFunc::constant(t.context(), QuadScalar(1));
        for (const auto& [v, e] : *gmono) {
          const std::string& gname = t.context()->name(v);
          auto it = std::find_if(exps.begin(), exps.end(),
                                 [&](const ExpGen& x) { return x.name == gname; });
          if (it == exps.end()) {
            usable = false;
            break;
          }
          for (std::size_t k = 0; k < m; ++k) gamma[k] += it->b[k].scaled(QuadScalar(e));
          gel *= RatFunc::variable(t.context(), v).pow(static_cast<int>(e));
        }
        if (usable) {
          std::vector<RatFunc> q;
          for (const auto& ck : c) q.push_back(t.div(ck, gel).in_context(base));
          if (gmono->empty()) {
            if (auto h = antiderive_poly(q)) w = t.embed(*h);
          }
          if (!w) {
            if (auto v = solve_risch_ansatz(gamma, q)) w = t.mul(t.embed(*v), gel);
          }
        }
      }
      if (w) {
        notes.push_back("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                        "): in-field quadrature");
      } else {
        std::string name = fresh_name(t, "W" + std::to_string(i + 1) + std::to_string(j + 1));
        t = t.extend(TowerStep::integral(name, c));
        RatMatrix grown = in_context(mat, t.context());
        mat = std::move(grown);
        w = t.element(name);
      }
      mat(i, j) = t.mul(mat(i, i), *w);
    }
  }
  mat = in_context(mat, t.context());

  Verification v = verify_fundamental(t, s, mat);
  if (!v.ok) throw Error("internal: triangular solution failed verification");
  return {std::move(t), std::move(mat), std::move(notes)};
}

}  // namespace rpv
