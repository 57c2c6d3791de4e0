#include "rpv/tower.hpp"

#include <algorithm>

#include "rpv/error.hpp"

namespace rpv {

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Integral: return "integral";
    case StepKind::ExpIntegral: return "expintegral";
    case StepKind::Algebraic: return "algebraic";
    case StepKind::RotationPair: return "rotationpair";
  }
  return "?";
}

std::string to_string(CheckState s) {
  switch (s) {
    case CheckState::Yes: return "yes";
    case CheckState::No: return "no";
    case CheckState::Assumed: return "assumed";
    case CheckState::NotApplicable: return "n/a";
  }
  return "?";
}

std::string to_string(Certification c) {
  switch (c) {
    case Certification::Liouvillian: return "Liouvillian";
    case Certification::GeneralisedLiouvillian: return "GeneralisedLiouvillian";
    case Certification::NotCertified: return "NotCertified";
  }
  return "?";
}

TowerStep TowerStep::integral(std::string name, std::vector<RatFunc> a) {
  TowerStep s;
  s.kind = StepKind::Integral;
  s.names = {std::move(name)};
  s.coefficients = std::move(a);
  return s;
}

TowerStep TowerStep::exp_integral(std::string name, std::vector<RatFunc> b) {
  TowerStep s;
  s.kind = StepKind::ExpIntegral;
  s.names = {std::move(name)};
  s.coefficients = std::move(b);
  return s;
}

TowerStep TowerStep::algebraic(std::string name, RatFunc p) {
  TowerStep s;
  s.kind = StepKind::Algebraic;
  s.names = {std::move(name)};
  s.minimal_polynomial = std::move(p);
  return s;
}

TowerStep TowerStep::rotation_pair(std::string sine, std::string cosine, std::vector<RatFunc> g) {
  TowerStep s;
  s.kind = StepKind::RotationPair;
  s.names = {std::move(sine), std::move(cosine)};
  s.coefficients = std::move(g);
  return s;
}

namespace {

// Square root of a polynomial whose lex-leading coefficient is one.
std::optional<MultiPoly> poly_sqrt(const MultiPoly& p) {
  const auto& [e0, c0] = p.leading_term();
  if (!c0.is_one()) return std::nullopt;
  Exponents half(e0.size());
  for (std::size_t i = 0; i < e0.size(); ++i) {
    if (e0[i] % 2 != 0) return std::nullopt;
    half[i] = e0[i] / 2;
  }
  MultiPoly s = MultiPoly::monomial(half, QuadScalar(1));
  for (;;) {
    MultiPoly r = p - s * s;
    if (r.is_zero()) return s;
    const auto& [er, cr] = r.leading_term();
    Exponents et(er.size());
    for (std::size_t i = 0; i < er.size(); ++i) {
      if (er[i] < half[i]) return std::nullopt;
      et[i] = er[i] - half[i];
    }
    if (!(et < half)) return std::nullopt;
    s += MultiPoly::monomial(et, cr / QuadScalar(2));
  }
}

bool depends_on_any(const RatFunc& x, const std::vector<std::size_t>& vars) {
  return std::any_of(vars.begin(), vars.end(), [&](std::size_t v) { return x.depends_on(v); });
}

std::vector<std::size_t> used_vars(const RatFunc& x) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < x.context()->size(); ++v)
    if (x.depends_on(v)) out.push_back(v);
  return out;
}

}  // namespace

Tower Tower::base(ContextPtr base_ctx) {
  if (!base_ctx->vars_of_kind(VarKind::Generator).empty())
    throw Error("a tower base must not contain generators");
  Tower t;
  t.base_ctx_ = base_ctx;
  t.ctx_ = std::move(base_ctx);
  t.gen_images_.resize(t.base_ctx_->derivation_count());
  return t;
}

std::size_t Tower::var_index(const std::string& name) const {
  auto i = ctx_->index_of(name);
  if (!i) throw CoefficientOutsideField("unknown variable '" + name + "'");
  return *i;
}

void Tower::grow_context(const std::vector<std::string>& names) {
  const std::size_t old_n = ctx_->size();
  ContextPtr next = ctx_->with_generators(names);
  std::vector<std::size_t> map(old_n);
  for (std::size_t i = 0; i < old_n; ++i) map[i] = i;
  for (auto& r : relations_) {
    r.poly = r.poly.remap(next->size(), map);
    r.lead = r.lead.remap(next->size(), map);
  }
  for (auto& per_k : gen_images_)
    for (auto& img : per_k) img = img.in_context(next);
  for (std::size_t i = 0; i < names.size(); ++i) gen_vars_.push_back(old_n + i);
  ctx_ = std::move(next);
}

std::pair<MultiPoly, MultiPoly> Tower::pseudo_reduce(MultiPoly p, const Relation& rel) const {
  MultiPoly mu = MultiPoly::constant(p.nvars(), QuadScalar(1));
  const bool monic = rel.lead.is_constant() && rel.lead.constant_value()->is_one();
  while (!p.is_zero() && p.degree(rel.var) >= rel.degree) {
    const std::uint32_t d = p.degree(rel.var);
    MultiPoly lp = p.coefficients_in(rel.var).at(d);
    MultiPoly sub = lp.shift(rel.var, d - rel.degree) * rel.poly;
    if (monic) {
      p -= sub;
    } else {
      p = p * rel.lead - sub;
      mu = mu * rel.lead;
    }
  }
  return {std::move(p), std::move(mu)};
}

TowerElem Tower::normalize(const RatFunc& x) const {
  RatFunc y = same_context(x.context(), ctx_) ? x : x.in_context(ctx_);
  if (relations_.empty()) return y;
  MultiPoly num = y.num();
  MultiPoly den = y.den();
  for (auto it = relations_.rbegin(); it != relations_.rend(); ++it) {
    if (!num.depends_on(it->var) && !den.depends_on(it->var)) continue;
    auto [n, mu_n] = pseudo_reduce(std::move(num), *it);
    auto [d, mu_d] = pseudo_reduce(std::move(den), *it);
    num = n * mu_d;
    den = d * mu_n;
  }
  if (den.is_zero()) throw DivisionByZero("denominator vanishes modulo the tower relations");
  return RatFunc(ctx_, std::move(num), std::move(den));
}

bool Tower::is_zero(const TowerElem& x) const { return normalize(x).is_zero(); }

bool Tower::equal(const TowerElem& x, const TowerElem& y) const {
  return is_zero(normalize(x) - normalize(y));
}

TowerElem Tower::div(const TowerElem& x, const TowerElem& y) const {
  TowerElem ny = normalize(y);
  if (ny.is_zero()) throw DivisionByZero("division by zero in a tower");
  return normalize(normalize(x) * ny.inverse());
}

TowerElem Tower::element(const std::string& name) const {
  return RatFunc::variable(ctx_, var_index(name));
}

TowerElem Tower::embed(const RatFunc& x) const { return normalize(x.in_context(ctx_)); }

TowerElem Tower::derive_elem(const TowerElem& x, std::size_t k) const {
  if (k >= derivation_count()) throw Error("derivation index out of range");
  RatFunc y = normalize(x);
  auto images = context_images(y, k);
  for (std::size_t g = 0; g < gen_vars_.size(); ++g) images[gen_vars_[g]] = gen_images_[k][g];
  return normalize(derive_with(y, images));
}

const TowerElem& Tower::generator_derivative(const std::string& name, std::size_t k) const {
  std::size_t v = var_index(name);
  for (std::size_t g = 0; g < gen_vars_.size(); ++g)
    if (gen_vars_[g] == v) return gen_images_.at(k)[g];
  throw Error("'" + name + "' is not a tower generator");
}

std::vector<TowerElem> Tower::relations() const {
  std::vector<TowerElem> out;
  for (const auto& r : relations_) out.push_back(RatFunc(ctx_, r.poly));
  return out;
}

std::vector<std::string> Tower::generators() const {
  std::vector<std::string> out;
  for (auto v : gen_vars_) out.push_back(ctx_->name(v));
  return out;
}

void Tower::check_closed(const std::vector<TowerElem>& c, const char* what) const {
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (!equal(derive_elem(c[j], i), derive_elem(c[i], j)))
        throw CompatibilityViolation(std::string(what) + " coefficients " + std::to_string(i + 1) +
                                     " and " + std::to_string(j + 1) + " are not compatible");
}

namespace {

CheckState combine(const std::vector<CheckState>& v) {
  bool assumed = false;
  bool yes = false;
  for (auto s : v) {
    if (s == CheckState::No) return CheckState::No;
    assumed |= s == CheckState::Assumed;
    yes |= s == CheckState::Yes;
  }
  if (assumed) return CheckState::Assumed;
  return yes ? CheckState::Yes : CheckState::No;
}

}  // namespace

Tower Tower::extend(TowerStep step) const {
  const std::size_t m = derivation_count();
  const std::size_t want = step.kind == StepKind::RotationPair ? 2 : 1;
  if (step.names.size() != want)
    throw DimensionMismatch(to_string(step.kind) + " step needs " + std::to_string(want) + " name(s)");
  for (const auto& n : step.names) {
    if (!valid_identifier(n)) throw Error("invalid generator name '" + n + "'");
    if (ctx_->index_of(n)) throw VariableClash("generator name '" + n + "' is already in use");
  }
  if (want == 2 && step.names[0] == step.names[1])
    throw VariableClash("rotation pair needs two distinct names");

  Tower t = *this;
  step.flags = StepFlags{};

  if (step.kind == StepKind::Algebraic) {
    if (!step.minimal_polynomial) throw Error("algebraic step without a minimal polynomial");
    t.grow_context(step.names);
    const std::size_t a = t.ctx_->size() - 1;
    // Normal form over the field below; the new relation is not active yet.
    RatFunc p = t.normalize(step.minimal_polynomial->in_context(t.ctx_));
    if (p.den().depends_on(a))
      throw Error("minimal polynomial must be a polynomial in '" + step.names[0] + "'");
    const std::uint32_t deg = p.num().degree(a);
    if (deg == 0) throw DegenerateStep("minimal polynomial has degree 0");
    auto coeffs = p.num().coefficients_in(a);
    RatFunc lead(t.ctx_, coeffs.at(deg), p.den());
    p = t.normalize(p / lead);  // monic
    coeffs = p.num().coefficients_in(a);

    if (deg == 1) {
      step.flags.irreducible = CheckState::Yes;
    } else if (deg == 2) {
      auto coef = [&](std::uint32_t e) {
        auto it = coeffs.find(e);
        MultiPoly c = it == coeffs.end() ? MultiPoly(t.ctx_->size()) : it->second;
        return RatFunc(t.ctx_, c, p.den());
      };
      RatFunc lc = coef(2);
      RatFunc b = t.div(coef(1), lc);
      RatFunc c = t.div(coef(0), lc);
      RatFunc disc = t.normalize(b * b - c.scaled(QuadScalar(4)));
      if (depends_on_any(disc, t.gen_vars_)) {
        step.flags.irreducible = CheckState::Assumed;
      } else {
        RatFunc bd = disc.in_context(base_ctx_);
        if (bd.is_zero())
          throw ReducibleMinimalPolynomial("minimal polynomial has a repeated root");
        if (sign_infinitesimal(bd) > 0) {
          MultiPoly sq = bd.num() * bd.den();
          if (poly_sqrt(sq.monic()))
            throw ReducibleMinimalPolynomial("discriminant " + bd.to_string() + " is a square");
        }
        step.flags.irreducible = CheckState::Yes;
      }
    } else {
      step.flags.irreducible = CheckState::Assumed;
    }

    // Derivative images use the field below plus a -> 0 for the coefficient part.
    std::vector<TowerElem> imgs;
    RatFunc dp(t.ctx_, p.num().partial(a), p.den());
    for (std::size_t k = 0; k < m; ++k) {
      auto images = context_images(p, k);
      for (std::size_t g = 0; g + 1 < t.gen_vars_.size(); ++g)
        images[t.gen_vars_[g]] = t.gen_images_[k][g];
      images[a] = RatFunc(t.ctx_);
      imgs.push_back(-derive_with(p, images));
    }
    MultiPoly lead_poly = p.num().coefficients_in(a).at(deg);
    t.relations_.push_back({a, deg, p.num(), lead_poly});
    for (std::size_t k = 0; k < m; ++k) t.gen_images_[k].push_back(t.div(imgs[k], dp));
    step.minimal_polynomial = p;
  } else {
    if (step.coefficients.size() != m)
      throw DimensionMismatch(to_string(step.kind) + " step needs " + std::to_string(m) +
                              " coefficients, got " + std::to_string(step.coefficients.size()));
    std::vector<TowerElem> c;
    for (const auto& x : step.coefficients) c.push_back(normalize(x.in_context(ctx_)));
    check_closed(c, to_string(step.kind).c_str());
    for (std::size_t k = 0; k < m; ++k)
      if (c[k].is_zero()) step.flags.zero_components.push_back(k);
    const bool all_zero = step.flags.zero_components.size() == m;

    if (step.kind == StepKind::ExpIntegral && all_zero)
      throw DegenerateStep("exponential step with zero coefficient vector");

    if (step.kind == StepKind::Integral) {
      std::vector<CheckState> per;
      std::vector<RatFunc> base_vec;
      bool generator_free = true;
      for (std::size_t k = 0; k < m; ++k) {
        const auto& a = c[k];
        if (depends_on_any(a, gen_vars_)) {
          generator_free = false;
          if (!a.is_zero()) per.push_back(CheckState::Assumed);
          continue;
        }
        base_vec.push_back(a.in_context(base_ctx_));
        if (a.is_zero()) continue;
        auto ck = base_ctx_->coordinate_of(k);
        if (!ck) {
          per.push_back(CheckState::Assumed);
        } else if (!a.depends_on(*ck)) {
          per.push_back(CheckState::No);  // a_k = d_k(t_k a_k)
        } else if (used_vars(a).size() == 1) {
          per.push_back(is_derivative_univariate(a, *ck) ? CheckState::No : CheckState::Yes);
        } else {
          per.push_back(CheckState::Assumed);
        }
      }
      step.flags.nonderivative = combine(per);
      if (generator_free && antiderive_poly(base_vec)) {
        step.flags.not_exact = CheckState::No;
      } else if (std::find(per.begin(), per.end(), CheckState::Yes) != per.end()) {
        step.flags.not_exact = CheckState::Yes;
      } else {
        step.flags.not_exact = all_zero ? CheckState::No : CheckState::Assumed;
      }
    }

    t.grow_context(step.names);
    for (auto& x : c) x = x.in_context(t.ctx_);
    const std::size_t first = t.ctx_->size() - want;
    RatFunc g0 = RatFunc::variable(t.ctx_, first);
    for (std::size_t k = 0; k < m; ++k) {
      switch (step.kind) {
        case StepKind::Integral:
          t.gen_images_[k].push_back(c[k]);
          break;
        case StepKind::ExpIntegral:
          t.gen_images_[k].push_back(c[k] * g0);
          break;
        case StepKind::RotationPair: {
          RatFunc cs = RatFunc::variable(t.ctx_, first + 1);
          t.gen_images_[k].push_back(c[k] * cs);
          t.gen_images_[k].push_back(-(c[k] * g0));
          break;
        }
        case StepKind::Algebraic:
          break;
      }
    }
    if (step.kind == StepKind::RotationPair) {
      const std::size_t n = t.ctx_->size();
      MultiPoly s = MultiPoly::variable(n, first);
      MultiPoly cs = MultiPoly::variable(n, first + 1);
      MultiPoly rel = cs * cs + s * s - MultiPoly::constant(n, QuadScalar(1));
      t.relations_.push_back({first + 1, 2, rel, MultiPoly::constant(n, QuadScalar(1))});
    }
    step.coefficients = std::vector<RatFunc>(c.begin(), c.end());
  }

  for (const auto& r : t.relations())
    for (std::size_t k = 0; k < m; ++k)
      if (!t.is_zero(t.derive_elem(r, k)))
        throw Error("relation " + r.to_string() + " is not preserved by derivation " +
                    std::to_string(k + 1));
  t.steps_.push_back(std::move(step));
  return t;
}

bool same_structure(const Tower& a, const Tower& b) {
  if (!same_context(a.base_context(), b.base_context())) return false;
  if (a.steps().size() != b.steps().size()) return false;
  for (std::size_t i = 0; i < a.steps().size(); ++i) {
    const auto& x = a.steps()[i];
    const auto& y = b.steps()[i];
    if (x.kind != y.kind || x.names != y.names) return false;
    if (x.coefficients.size() != y.coefficients.size()) return false;
    for (std::size_t k = 0; k < x.coefficients.size(); ++k)
      if (!a.equal(x.coefficients[k], a.embed(y.coefficients[k]))) return false;
    if (x.minimal_polynomial.has_value() != y.minimal_polynomial.has_value()) return false;
    if (x.minimal_polynomial &&
        !eq(*x.minimal_polynomial, y.minimal_polynomial->in_context(x.minimal_polynomial->context())))
      return false;
  }
  return true;
}

TowerElem determinant(const Tower& t, const RatMatrix& m) {
  if (!m.square()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix a = m.map([&](const RatFunc& x) { return t.embed(x); });
  TowerElem det = t.embed(RatFunc::constant(t.context(), QuadScalar(1)));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r)
      if (!t.is_zero(a(r, col))) {
        piv = r;
        break;
      }
    if (piv == n) return RatFunc(t.context());
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det = t.mul(det, a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (t.is_zero(a(r, col))) continue;
      TowerElem f = t.div(a(r, col), a(col, col));
      for (std::size_t j = col; j < n; ++j) a(r, j) = t.sub(a(r, j), t.mul(f, a(col, j)));
    }
  }
  return det;
}

Verification verify_fundamental(const Tower& t, const LinSystem& s, const RatMatrix& m) {
  if (!m.square() || m.rows() != s.rank())
    throw DimensionMismatch("fundamental matrix must be " + std::to_string(s.rank()) + "x" +
                            std::to_string(s.rank()));
  if (s.derivation_count() != t.derivation_count())
    throw DimensionMismatch("system and tower have different derivation counts");
  Verification v;
  const std::size_t r = s.rank();
  RatMatrix mm = m.map([&](const RatFunc& x) { return t.embed(x); });
  for (std::size_t k = 0; k < s.derivation_count(); ++k) {
    RatMatrix a = s.matrix(k).map([&](const RatFunc& x) { return t.embed(x); });
    RatMatrix am = a * mm;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        TowerElem lhs = t.derive_elem(mm(i, j), k);
        TowerElem rhs = t.normalize(am(i, j));
        if (!t.equal(lhs, rhs))
          v.failures.push_back({k, i, j, lhs.to_string(), rhs.to_string()});
      }
  }
  TowerElem det = determinant(t, mm);
  v.det_nonzero = !det.is_zero();
  v.det = det;

  auto gens = t.context()->vars_of_kind(VarKind::Generator);
  auto constant_like = [&](const TowerElem& x) {
    if (!depends_on_any(x, gens)) return false;
    for (std::size_t k = 0; k < t.derivation_count(); ++k)
      if (!t.is_zero(t.derive_elem(x, k))) return false;
    return true;
  };
  for (const auto& g : t.generators()) {
    TowerElem x = t.element(g);
    if (constant_like(x)) v.new_constants.push_back(g);
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      if (constant_like(mm(i, j))) v.new_constants.push_back(mm(i, j).to_string());

  v.ok = v.failures.empty() && v.det_nonzero;
  return v;
}

CertificationReport certify_tower(const Tower& t) {
  CertificationReport rep{Certification::Liouvillian, "", {}};
  for (std::size_t i = 0; i < t.steps().size(); ++i) {
    const auto& s = t.steps()[i];
    StepReport sr{i, s.kind, s.names, s.flags, ""};
    switch (s.kind) {
      case StepKind::Integral:
        if (s.flags.nonderivative == CheckState::No) sr.note = "integrand is a derivative";
        break;
      case StepKind::ExpIntegral:
        if (!s.flags.zero_components.empty()) sr.note = "zero logarithmic-derivative components";
        break;
      case StepKind::Algebraic:
        if (rep.verdict == Certification::Liouvillian)
          rep.verdict = Certification::GeneralisedLiouvillian;
        if (s.flags.irreducible == CheckState::Assumed) sr.note = "irreducibility assumed";
        break;
      case StepKind::RotationPair:
        if (rep.verdict != Certification::NotCertified) {
          rep.verdict = Certification::NotCertified;
          rep.reason = "non-split rotation step";
        }
        sr.note = "non-split rotation step";
        break;
    }
    rep.steps.push_back(std::move(sr));
  }
  return rep;
}

Tower reduce_tower(const Tower& t, std::vector<std::string> u_names) {
  const std::size_t m = t.derivation_count();
  if (u_names.empty()) u_names = default_indeterminates(m);
  for (const auto& s : t.steps())
    if (s.kind == StepKind::RotationPair)
      throw UnsupportedStep("rotation pair '" + s.names[0] + ", " + s.names[1] +
                            "' has no ordinary reduction");
  ContextPtr kctx = DiffContext::kolchin(*t.base_context(), u_names);
  Tower r = Tower::base(kctx);
  for (const auto& s : t.steps()) {
    TowerStep ns;
    ns.kind = s.kind;
    ns.names = s.names;
    if (s.kind == StepKind::Algebraic) {
      ContextPtr pctx = r.context()->with_generators(s.names);
      ns.minimal_polynomial = s.minimal_polynomial->in_context(pctx);
    } else {
      RatFunc sum(r.context());
      for (std::size_t k = 0; k < m; ++k) {
        RatFunc u = RatFunc::variable(r.context(), u_names[k]);
        sum += u * s.coefficients[k].in_context(r.context());
      }
      ns.coefficients = {r.normalize(sum)};
    }
    StepFlags inherited = s.flags;
    inherited.inherited = true;
    r = r.extend(std::move(ns));
    r.steps_.back().flags = std::move(inherited);
  }
  return r;
}

Tower fixed_subfield_power(const Tower& t, int n) {
  if (n < 1) throw Error("power must be a positive integer");
  if (t.steps().size() != 1 || t.steps()[0].kind != StepKind::ExpIntegral)
    throw Error("fixed subfield needs a tower with a single exponential step");
  if (n == 1) return t;
  const auto& s = t.steps()[0];
  std::vector<RatFunc> b;
  for (const auto& x : s.coefficients) b.push_back(x.scaled(QuadScalar(n)).in_context(t.base_context()));
  return Tower::base(t.base_context())
      .extend(TowerStep::exp_integral(s.names[0] + "_" + std::to_string(n), std::move(b)));
}

}  // namespace rpv
