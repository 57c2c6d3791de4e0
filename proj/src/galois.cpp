#include "rpv/galois.hpp"

#include <algorithm>
#include <numeric>

#include "rpv/error.hpp"
#include "rpv/tower.hpp"

namespace rpv {

GaloisClass GaloisClass::trivial() { return {}; }

GaloisClass GaloisClass::cyclic(long n) {
  if (n <= 1) return trivial();
  GaloisClass g;
  g.kind_ = Kind::FiniteCyclic;
  g.n_ = n;
  return g;
}

GaloisClass GaloisClass::additive() {
  GaloisClass g;
  g.kind_ = Kind::Additive;
  return g;
}

GaloisClass GaloisClass::split_torus(long dim) {
  if (dim <= 0) return trivial();
  GaloisClass g;
  g.kind_ = Kind::SplitTorus;
  g.n_ = dim;
  return g;
}

GaloisClass GaloisClass::non_split_torus(long so2_blocks, long split_dim) {
  if (so2_blocks <= 0) return split_torus(split_dim);
  GaloisClass g;
  g.kind_ = Kind::NonSplitTorus;
  g.n_ = so2_blocks;
  g.split_dim_ = split_dim;
  return g;
}

GaloisClass GaloisClass::triangular(bool split, std::vector<GaloisClass> factors) {
  GaloisClass g;
  g.kind_ = Kind::Triangular;
  g.split_ = split;
  g.factors_ = std::move(factors);
  return g;
}

GaloisClass GaloisClass::unknown(std::string reason) {
  GaloisClass g;
  g.kind_ = Kind::Unknown;
  g.reason_ = std::move(reason);
  return g;
}

GaloisClass GaloisClass::product(std::vector<GaloisClass> factors) {
  std::vector<GaloisClass> flat;
  std::vector<std::string> carried;
  for (auto& f : factors) {
    if (f.kind_ == Kind::Product) {
      for (auto& x : f.factors_) flat.push_back(x);
      for (auto& a : f.assumptions_) carried.push_back(a);
    } else if (f.kind_ == Kind::Trivial) {
      for (auto& a : f.assumptions_) carried.push_back(a);
    } else {
      flat.push_back(std::move(f));
    }
  }
  // Tori merge into one factor placed where the first torus appeared.
  std::vector<GaloisClass> out;
  std::optional<std::size_t> torus_at;
  for (auto& f : flat) {
    const bool torus = f.kind_ == Kind::SplitTorus || f.kind_ == Kind::NonSplitTorus;
    if (!torus) {
      out.push_back(std::move(f));
      continue;
    }
    if (!torus_at) {
      torus_at = out.size();
      out.push_back(std::move(f));
      continue;
    }
    GaloisClass& t = out[*torus_at];
    long so2 = (t.kind_ == Kind::NonSplitTorus ? t.n_ : 0) +
               (f.kind_ == Kind::NonSplitTorus ? f.n_ : 0);
    long split = (t.kind_ == Kind::NonSplitTorus ? t.split_dim_ : t.n_) +
                 (f.kind_ == Kind::NonSplitTorus ? f.split_dim_ : f.n_);
    auto merged = non_split_torus(so2, split);
    merged.assumptions_ = t.assumptions_;
    for (auto& a : f.assumptions_) merged.assumptions_.push_back(a);
    t = std::move(merged);
  }
  GaloisClass g;
  if (out.empty()) {
    g = trivial();
  } else if (out.size() == 1) {
    g = std::move(out.front());
  } else {
    g.kind_ = Kind::Product;
    g.factors_ = std::move(out);
  }
  for (auto& a : carried) g.assume(a);
  return g;
}

GaloisClass& GaloisClass::assume(std::string what) {
  if (std::find(assumptions_.begin(), assumptions_.end(), what) == assumptions_.end())
    assumptions_.push_back(std::move(what));
  return *this;
}

std::vector<std::string> GaloisClass::all_assumptions() const {
  std::vector<std::string> out = assumptions_;
  for (const auto& f : factors_)
    for (auto& a : f.all_assumptions())
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  return out;
}

bool GaloisClass::contains_unknown() const {
  if (kind_ == Kind::Unknown) return true;
  return std::any_of(factors_.begin(), factors_.end(),
                     [](const GaloisClass& f) { return f.contains_unknown(); });
}

bool GaloisClass::solvable() const { return !contains_unknown(); }

bool GaloisClass::real_split() const {
  if (kind_ == Kind::NonSplitTorus) return false;
  if (kind_ == Kind::Triangular && !split_) return false;
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const GaloisClass& f) { return f.real_split(); });
}

namespace {

std::string power(const std::string& base, long k) {
  return k == 1 ? base : base + "^" + std::to_string(k);
}

std::string join(const std::vector<GaloisClass>& fs) {
  std::string out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) out += ", ";
    out += fs[i].render();
  }
  return out;
}

}  // namespace

std::string GaloisClass::render() const {
  switch (kind_) {
    case Kind::Trivial: return "Trivial";
    case Kind::FiniteCyclic: return "Cyclic(" + std::to_string(n_) + ")";
    case Kind::Additive: return "Ga";
    case Kind::SplitTorus: return power("Gm", n_);
    case Kind::NonSplitTorus:
      if (split_dim_ == 0) return power("SO2", n_);
      return "Torus(" + power("SO2", n_) + ", " + power("Gm", split_dim_) + ")";
    case Kind::Triangular: {
      std::string head = split_ ? "split" : "nonsplit";
      if (factors_.empty()) return "Triangular(" + head + ")";
      return "Triangular(" + head + "; " + join(factors_) + ")";
    }
    case Kind::Product: return "Product(" + join(factors_) + ")";
    case Kind::Unknown: return "Unknown(\"" + reason_ + "\")";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::GeneralisedLiouvillian: return "GeneralisedLiouvillian";
    case Verdict::NotGeneralisedLiouvillian: return "NotGeneralisedLiouvillian";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

Verdict liouvillian_verdict(const GaloisClass& g) {
  if (g.contains_unknown()) return Verdict::Unknown;
  if (!g.real_split()) return Verdict::NotGeneralisedLiouvillian;
  return Verdict::GeneralisedLiouvillian;
}

namespace {

const char* kExpAssumed = "exponential of an integral assumed transcendental";
const char* kIntegralAssumed = "integral assumed outside the field below";

// For a one-derivation Kolchin context, the vector (b_1, ..., b_m) over the
// partial base with b = sum u_k b_k; the input itself otherwise.
std::vector<RatFunc> as_partial(const std::vector<RatFunc>& b) {
  if (b.size() != 1 || !b[0].context()->is_kolchin()) return b;
  const auto& ctx = b[0].context();
  auto us = ctx->vars_of_kind(VarKind::Indeterminate);
  auto coords = ctx->vars_of_kind(VarKind::Coordinate);
  std::vector<std::string> names;
  for (auto c : coords) names.push_back(ctx->name(c));
  for (auto u : us)
    if (b[0].den().depends_on(u)) return b;
  std::vector<MultiPoly> parts(us.size(), MultiPoly(ctx->size()));
  for (const auto& [e, c] : b[0].num().terms()) {
    std::optional<std::size_t> which;
    for (std::size_t k = 0; k < us.size(); ++k) {
      if (e[us[k]] == 0) continue;
      if (which || e[us[k]] != 1) return b;
      which = k;
    }
    if (!which) return b;
    Exponents e2 = e;
    e2[us[*which]] = 0;
    parts[*which].add_term(e2, c);
  }
  ContextPtr pctx = DiffContext::partial(names, ctx->sqrt_tag());
  std::vector<RatFunc> out;
  for (auto& p : parts) out.push_back(RatFunc(ctx, p, b[0].den()).in_context(pctx));
  return out;
}

bool all_zero(const std::vector<RatFunc>& v) {
  return std::all_of(v.begin(), v.end(), [](const RatFunc& x) { return x.is_zero(); });
}

// lambda == nullopt marks a multiplier known to be irrational.
GaloisClass rank_one(const std::vector<RatFunc>& b0, const std::optional<QuadScalar>& lambda) {
  std::vector<RatFunc> b = as_partial(b0);
  if (all_zero(b)) return GaloisClass::trivial();
  auto q = monomial_log_derivative(b);
  if (!q) return GaloisClass::split_torus(1).assume(kExpAssumed);
  bool zero = true;
  for (const auto& x : *q) zero &= x.is_zero();
  if (zero) return GaloisClass::trivial();
  if (!lambda) return GaloisClass::split_torus(1);
  Integer n = 1;
  for (const auto& x : *q) {
    QuadScalar e = x * *lambda;
    if (!e.is_rational()) return GaloisClass::split_torus(1);
    Integer den = e.a().get_den();
    mpz_lcm(n.get_mpz_t(), n.get_mpz_t(), den.get_mpz_t());
  }
  if (n == 1) return GaloisClass::trivial();
  if (n <= kCyclicBound) return GaloisClass::cyclic(n.get_si());
  return GaloisClass::split_torus(1).assume(kExpAssumed);
}

std::optional<QuadScalar> sqrt_if_rational_field(const QuadScalar& x) {
  if (!x.is_rational()) return std::nullopt;
  const Rat& v = x.a();
  Integer pq = v.get_num() * v.get_den();
  return QuadScalar::sqrt_of(pq) / QuadScalar(Rat(v.get_den()));
}

// mu with f = mu * g (component-wise, mu constant), if any.
std::optional<QuadScalar> constant_ratio(const std::vector<RatFunc>& f,
                                         const std::vector<RatFunc>& g) {
  std::optional<QuadScalar> mu;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (g[k].is_zero()) {
      if (!f[k].is_zero()) return std::nullopt;
      continue;
    }
    auto r = (f[k] / g[k]).constant_value();
    if (!r || (mu && !(*mu == *r))) return std::nullopt;
    mu = r;
  }
  return mu;
}

GaloisClass classify_triangular(const LinSystem& s) {
  TriangularSolution sol = solve_triangular(s);
  std::vector<GaloisClass> factors;
  for (const auto& step : sol.tower.steps()) {
    if (step.kind == StepKind::ExpIntegral) {
      std::vector<RatFunc> b;
      for (const auto& x : step.coefficients) b.push_back(x.in_context(s.context()));
      auto g = rank_one(b, QuadScalar(1));
      if (g.kind() != GaloisClass::Kind::Trivial) factors.push_back(std::move(g));
    } else if (step.kind == StepKind::Integral) {
      auto g = GaloisClass::additive();
      if (step.flags.not_exact != CheckState::Yes) g.assume(kIntegralAssumed);
      factors.push_back(std::move(g));
    }
  }
  if (factors.empty()) return GaloisClass::trivial();
  return GaloisClass::triangular(true, std::move(factors));
}

LinSystem reversed(const LinSystem& s) {
  const std::size_t r = s.rank();
  std::vector<RatMatrix> mats;
  for (const auto& a : s.matrices()) {
    RatMatrix b = a;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) b(i, j) = a(r - 1 - i, r - 1 - j);
    mats.push_back(std::move(b));
  }
  return LinSystem(s.context(), r, std::move(mats));
}

bool all_upper(const LinSystem& s) {
  return std::all_of(s.matrices().begin(), s.matrices().end(),
                     [](const RatMatrix& a) { return is_upper_triangular(a); });
}

}  // namespace

GaloisClass classify_rank_one(const std::vector<RatFunc>& b, const QuadScalar& lambda) {
  return rank_one(b, lambda);
}

std::optional<ScalarPlusConstantForm> match_scalar_plus_constant(const LinSystem& s) {
  const std::size_t r = s.rank();
  if (r < 2) return std::nullopt;
  const auto& ctx = s.context();
  ScalarPlusConstantForm form;
  std::vector<RatMatrix> n;
  for (const auto& a : s.matrices()) {
    RatFunc tr(ctx);
    for (std::size_t i = 0; i < r; ++i) tr += a(i, i);
    tr = tr.scaled(QuadScalar(Rat(1, static_cast<long>(r))));
    RatMatrix nk = a;
    for (std::size_t i = 0; i < r; ++i) nk(i, i) -= tr;
    form.f.push_back(tr);
    n.push_back(std::move(nk));
  }
  std::optional<std::size_t> kpiv;
  for (std::size_t k = 0; k < n.size() && !kpiv; ++k)
    for (std::size_t i = 0; i < r && !kpiv; ++i)
      for (std::size_t j = 0; j < r && !kpiv; ++j)
        if (!n[k](i, j).is_zero()) {
          kpiv = k;
          form.pivot_row = i;
          form.pivot_col = j;
        }
  if (!kpiv) return std::nullopt;
  const RatFunc piv = n[*kpiv](form.pivot_row, form.pivot_col);
  form.c = Matrix<QuadScalar>(r, r, QuadScalar(0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      auto v = (n[*kpiv](i, j) / piv).constant_value();
      if (!v) return std::nullopt;
      form.c(i, j) = *v;
    }
  for (const auto& nk : n) {
    RatFunc g = nk(form.pivot_row, form.pivot_col);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        if (!eq(nk(i, j), g.scaled(form.c(i, j)))) return std::nullopt;
    form.g.push_back(std::move(g));
  }
  return form;
}

GaloisClass classify(const LinSystem& s) {
  auto iv = check_integrability(s);
  if (!iv.integrable)
    throw NotIntegrable("integrability fails for the pair (" + std::to_string(iv.i + 1) + ", " +
                        std::to_string(iv.j + 1) + ")");
  const std::size_t r = s.rank();
  if (r == 1) {
    std::vector<RatFunc> b;
    for (const auto& a : s.matrices()) b.push_back(a(0, 0));
    return rank_one(b, QuadScalar(1));
  }
  if (auto form = match_scalar_plus_constant(s)) {
    const auto& c = form->c;
    bool diagonal = true;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        if (i != j && !c(i, j).is_zero()) diagonal = false;
    if (r == 2 || diagonal) {
      GaloisClass gf = rank_one(form->f, QuadScalar(1));
      GaloisClass gc;
      std::optional<QuadScalar> lambda;  // split eigenvalue multiplier, when rational-field
      bool split_case = false;
      if (diagonal) {
        split_case = true;
        std::vector<GaloisClass> per;
        for (std::size_t i = 0; i < r; ++i) {
          if (c(i, i).is_zero()) continue;
          per.push_back(rank_one(form->g, c(i, i)));
          if (!lambda) lambda = c(i, i);
        }
        long order = 1;
        bool torus = false;
        std::vector<std::string> assumed;
        for (const auto& g : per) {
          if (g.kind() == GaloisClass::Kind::SplitTorus) torus = true;
          if (g.kind() == GaloisClass::Kind::FiniteCyclic) order = std::lcm(order, g.order());
          for (const auto& a : g.assumptions()) assumed.push_back(a);
        }
        gc = torus ? GaloisClass::split_torus(1) : GaloisClass::cyclic(order);
        if (torus)
          for (auto& a : assumed) gc.assume(a);
      } else {
        QuadScalar tr = c(0, 0) + c(1, 1);
        QuadScalar det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
        QuadScalar disc = tr * tr - QuadScalar(4) * det;
        const int sg = quad_sign(disc);
        if (sg < 0) {
          gc = GaloisClass::non_split_torus(1);
        } else if (sg == 0) {
          auto gp = as_partial(form->g);
          std::optional<RatFunc> h;
          if (!gp[0].context()->is_kolchin()) h = antiderive_poly(gp);
          gc = h ? GaloisClass::trivial() : GaloisClass::additive().assume(kIntegralAssumed);
        } else {
          split_case = true;
          // Eigenvalues (tr +- sqrt(disc)) / 2 of the normalised traceless C.
          auto root = sqrt_if_rational_field(disc);
          if (root) lambda = *root / QuadScalar(2);
          gc = rank_one(form->g, lambda);
        }
      }
      if (split_case && gf.kind() == GaloisClass::Kind::SplitTorus &&
          gc.kind() == GaloisClass::Kind::SplitTorus && lambda) {
        if (auto mu = constant_ratio(as_partial(form->f), as_partial(form->g))) {
          QuadScalar ratio = *mu / *lambda;
          if (ratio.is_rational()) return gc;  // both are powers of one exponential
        }
      }
      return GaloisClass::product({gf, gc});
    }
    if (!all_upper(s) && !all_upper(reversed(s)))
      return GaloisClass::unknown("non-diagonal constant part of rank above 2");
  }
  if (all_upper(s)) return classify_triangular(s);
  if (all_upper(reversed(s))) return classify_triangular(reversed(s));
  return GaloisClass::unknown("outside scoped families");
}

namespace {

std::string x_power(const QuadScalar& r) {
  if (r.is_one()) return "x";
  if (r.is_integer() && sgn(r.a()) > 0) return "x^" + r.to_string();
  return "x^(" + r.to_string() + ")";
}

}  // namespace

EulerClass classify_euler(const Rat& c) {
  EulerClass out;
  out.discriminant = 1 + 4 * c;
  out.discriminant.canonicalize();
  if (sgn(out.discriminant) < 0) {
    Rat neg = -out.discriminant;
    QuadScalar omega = QuadScalar::sqrt_of(neg.get_num() * neg.get_den()) /
                       QuadScalar(Rat(2 * neg.get_den()));
    std::string w = omega.to_string();
    if (w.find(' ') != std::string::npos) w = "(" + w + ")";
    out.group = GaloisClass::non_split_torus(1);
    out.solutions = {"x^(1/2)*cos(" + w + "*log(x))", "x^(1/2)*sin(" + w + "*log(x))"};
    return out;
  }
  auto [r1, r2] = indicial_roots(c);
  out.roots = std::make_pair(r1, r2);
  out.relation = "y1*y2 = x";
  if (sgn(out.discriminant) == 0) {
    out.group = GaloisClass::product({GaloisClass::cyclic(2), GaloisClass::additive()});
    out.solutions = {x_power(r1), x_power(r1) + "*log(x)"};
    out.relation.reset();
    return out;
  }
  out.solutions = {x_power(r1), x_power(r2)};
  if (r1.is_rational()) {
    Integer n = r1.a().get_den();
    out.group = GaloisClass::cyclic(n.get_si());
  } else {
    out.group = GaloisClass::split_torus(1);
  }
  return out;
}

}  // namespace rpv
