#include "rpv/ratfunc.hpp"

#include <utility>

#include "rpv/error.hpp"

namespace rpv {

RatFunc::RatFunc(ContextPtr ctx)
    : ctx_(std::move(ctx)),
      num_(ctx_->size()),
      den_(MultiPoly::constant(ctx_->size(), QuadScalar(1))) {}

RatFunc::RatFunc(ContextPtr ctx, MultiPoly num, MultiPoly den)
    : ctx_(std::move(ctx)), num_(std::move(num)), den_(std::move(den)) {
  if (den_.nvars() == 0 && ctx_->size() != 0 && den_.is_zero())
    den_ = MultiPoly::constant(ctx_->size(), QuadScalar(1));
  if (ctx_->size() == 0 && den_.is_zero() && num_.nvars() == 0)
    den_ = MultiPoly::constant(0, QuadScalar(1));
  if (num_.nvars() != ctx_->size() || den_.nvars() != ctx_->size())
    throw ContextMismatch("polynomial variable count does not match context");
  normalize();
}

RatFunc RatFunc::constant(ContextPtr ctx, const QuadScalar& c) {
  auto n = ctx->size();
  return RatFunc(std::move(ctx), MultiPoly::constant(n, c), MultiPoly::constant(n, QuadScalar(1)));
}

RatFunc RatFunc::variable(ContextPtr ctx, std::size_t var) {
  auto n = ctx->size();
  return RatFunc(std::move(ctx), MultiPoly::variable(n, var), MultiPoly::constant(n, QuadScalar(1)));
}

RatFunc RatFunc::variable(ContextPtr ctx, const std::string& name) {
  auto i = ctx->index_of(name);
  if (!i) throw Error("unknown variable '" + name + "'");
  return variable(std::move(ctx), *i);
}

std::optional<QuadScalar> RatFunc::constant_value() const {
  if (!den_.is_constant()) return std::nullopt;
  auto n = num_.constant_value();
  if (!n) return std::nullopt;
  return *n / *den_.constant_value();
}

void RatFunc::normalize() {
  if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
  const auto n = ctx_->size();
  if (num_.is_zero()) {
    den_ = MultiPoly::constant(n, QuadScalar(1));
    return;
  }
  if (!den_.is_constant()) {
    MultiPoly g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = num_.divide_exact(g).value();
      den_ = den_.divide_exact(g).value();
    }
  }
  if (auto c = den_.constant_value()) {
    num_ *= c->inverse();
    den_ = MultiPoly::constant(n, QuadScalar(1));
    return;
  }
  QuadScalar f(den_.integer_content_factor());
  if (infinitesimal_sign(den_) < 0) f = -f;
  if (!f.is_one()) {
    num_ *= f;
    den_ *= f;
  }
}

void RatFunc::check_same(const RatFunc& o) const {
  if (!same_context(ctx_, o.ctx_)) throw ContextMismatch("rational functions over different contexts");
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  check_same(o);
  if (o.is_zero()) return *this;
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  normalize();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  check_same(o);
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& o) {
  check_same(o);
  if (o.is_zero()) throw DivisionByZero("division by zero rational function");
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  normalize();
  return *this;
}

RatFunc RatFunc::scaled(const QuadScalar& c) const {
  RatFunc r = *this;
  r.num_ *= c;
  if (c.is_zero()) r.normalize();
  return r;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero rational function");
  return RatFunc(ctx_, den_, num_);
}

RatFunc RatFunc::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  return RatFunc(ctx_, num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
}

RatFunc RatFunc::in_context(const ContextPtr& target) const {
  if (same_context(ctx_, target)) return RatFunc(target, num_, den_);
  std::vector<std::size_t> map(ctx_->size(), 0);
  for (std::size_t i = 0; i < ctx_->size(); ++i) {
    auto j = target->index_of(ctx_->name(i));
    if (j) {
      map[i] = *j;
    } else if (depends_on(i)) {
      throw CoefficientOutsideField("variable '" + ctx_->name(i) + "' is not available here");
    }
  }
  return RatFunc(target, num_.remap(target->size(), map), den_.remap(target->size(), map));
}

RatFunc RatFunc::substitute(std::size_t var, const RatFunc& value) const {
  check_same(value);
  // Substitute into numerator and denominator via powers of the value.
  auto eval = [&](const MultiPoly& p) {
    RatFunc acc(ctx_);
    for (const auto& [k, c] : p.coefficients_in(var))
      acc += RatFunc(ctx_, c) * value.pow(static_cast<int>(k));
    return acc;
  };
  return eval(num_) / eval(den_);
}

bool RatFunc::same_form(const RatFunc& o) const {
  return same_context(ctx_, o.ctx_) && num_ == o.num_ && den_ == o.den_;
}

std::string RatFunc::to_string() const {
  const auto& names = ctx_->names();
  std::string n = num_.to_string(names);
  if (den_.is_constant()) return n;
  std::string d = den_.to_string(names);
  if (n.find_first_of(" /") != std::string::npos) n = "(" + n + ")";
  if (d.find_first_of(" */") != std::string::npos) d = "(" + d + ")";
  return n + "/" + d;
}

bool eq(const RatFunc& f, const RatFunc& g) {
  if (!same_context(f.context(), g.context()))
    throw ContextMismatch("comparing rational functions over different contexts");
  return (f.num() * g.den() - g.num() * f.den()).is_zero();
}

RatFunc derive_with(const RatFunc& f, std::span<const std::optional<RatFunc>> images) {
  const auto& ctx = f.context();
  if (images.size() != ctx->size()) throw DimensionMismatch("one image per variable required");
  auto apply = [&](const MultiPoly& p) {
    RatFunc acc(ctx);
    for (std::size_t v = 0; v < ctx->size(); ++v) {
      if (!p.depends_on(v)) continue;
      if (!images[v])
        throw Error("derivation is undefined on variable '" + ctx->name(v) + "'");
      if (images[v]->is_zero()) continue;
      acc += RatFunc(ctx, p.partial(v)) * *images[v];
    }
    return acc;
  };
  RatFunc dn = apply(f.num());
  if (f.den().is_constant()) return dn;
  RatFunc den(ctx, f.den());
  RatFunc num(ctx, f.num());
  RatFunc dd = apply(f.den());
  return (dn * den - num * dd) / (den * den);
}

namespace {

void check_truncated(const RatFunc& f, const std::vector<std::size_t>& truncated) {
  for (auto v : truncated)
    if (f.den().depends_on(v))
      throw NeedsHigherIndeterminates("indeterminate '" + f.context()->name(v) +
                                      "' in a denominator needs its derivative symbol");
  for (const auto& [e, c] : f.num().terms()) {
    std::uint32_t deg = 0;
    for (auto v : truncated) deg += e[v];
    if (deg > 1)
      throw NeedsHigherIndeterminates("input is not linear in the indeterminates");
  }
}

}  // namespace

std::vector<std::optional<RatFunc>> context_images(const RatFunc& f, std::size_t k) {
  const auto& ctx = f.context();
  if (k >= ctx->derivation_count()) throw Error("derivation index out of range");
  const auto& d = ctx->derivation(k);
  std::vector<std::optional<RatFunc>> images;
  std::vector<std::size_t> truncated;
  images.reserve(ctx->size());
  for (std::size_t v = 0; v < ctx->size(); ++v) {
    const auto& img = d.images[v];
    switch (img.kind) {
      case VarImage::Kind::Zero:
        images.emplace_back(RatFunc(ctx));
        break;
      case VarImage::Kind::One:
        images.emplace_back(RatFunc::constant(ctx, QuadScalar(1)));
        break;
      case VarImage::Kind::Variable:
        images.emplace_back(RatFunc::variable(ctx, img.var));
        break;
      case VarImage::Kind::Truncated:
        if (f.depends_on(v)) truncated.push_back(v);
        images.emplace_back(RatFunc(ctx));
        break;
      case VarImage::Kind::Undefined:
        images.emplace_back(std::nullopt);
        break;
    }
  }
  if (!truncated.empty()) check_truncated(f, truncated);
  return images;
}

RatFunc derive(const RatFunc& f, std::size_t k) {
  return derive_with(f, context_images(f, k));
}

int sign_infinitesimal(const RatFunc& f) {
  if (!f.context()->vars_of_kind(VarKind::Generator).empty())
    throw Error("the infinitesimal ordering is defined on base fields only");
  return infinitesimal_sign(f.num()) * infinitesimal_sign(f.den());
}

namespace {

// Dense univariate polynomial over the constant field, low degree first.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<QuadScalar> c) : c_(std::move(c)) { trim(); }
  static UPoly constant(const QuadScalar& x) { return UPoly({x}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const QuadScalar& lc() const { return c_.back(); }
  QuadScalar coeff(int i) const { return i < static_cast<int>(c_.size()) ? c_[i] : QuadScalar(0); }

  UPoly operator+(const UPoly& o) const {
    std::vector<QuadScalar> r(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(int(i)) + o.coeff(int(i));
    return UPoly(std::move(r));
  }
  UPoly operator-() const {
    auto r = c_;
    for (auto& x : r) x = -x;
    return UPoly(std::move(r));
  }
  UPoly operator-(const UPoly& o) const { return *this + (-o); }
  UPoly operator*(const UPoly& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<QuadScalar> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return UPoly(std::move(r));
  }
  UPoly scaled(const QuadScalar& x) const {
    auto r = c_;
    for (auto& y : r) y *= x;
    return UPoly(std::move(r));
  }
  UPoly derivative() const {
    std::vector<QuadScalar> r;
    for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i] * QuadScalar(long(i)));
    return UPoly(std::move(r));
  }
  UPoly monic() const { return is_zero() ? *this : scaled(lc().inverse()); }

  std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
    if (d.is_zero()) throw DivisionByZero("univariate division by zero");
    std::vector<QuadScalar> q(std::max(0, degree() - d.degree() + 1));
    UPoly r = *this;
    QuadScalar inv = d.lc().inverse();
    while (!r.is_zero() && r.degree() >= d.degree()) {
      int shift = r.degree() - d.degree();
      QuadScalar f = r.lc() * inv;
      q[shift] = f;
      std::vector<QuadScalar> t(shift + 1);
      t[shift] = f;
      r = r - UPoly(std::move(t)) * d;
    }
    return {UPoly(std::move(q)), r};
  }
  UPoly operator/(const UPoly& d) const { return divmod(d).first; }
  UPoly operator%(const UPoly& d) const { return divmod(d).second; }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<QuadScalar> c_;
};

UPoly ugcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// s, t with s a + t b = g = gcd(a, b).
void extended_gcd(const UPoly& a, const UPoly& b, UPoly& s, UPoly& t, UPoly& g) {
  UPoly r0 = a, r1 = b;
  UPoly s0 = UPoly::constant(1), s1;
  UPoly t0, t1 = UPoly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    UPoly ns = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(ns);
    UPoly nt = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(nt);
  }
  QuadScalar inv = r0.lc().inverse();
  g = r0.scaled(inv);
  s = s0.scaled(inv);
  t = t0.scaled(inv);
}

// s, t with s a + t b = c and deg s < deg b; gcd(a, b) must divide c.
std::pair<UPoly, UPoly> solve_bezout(const UPoly& a, const UPoly& b, const UPoly& c) {
  UPoly s, t, g;
  extended_gcd(a, b, s, t, g);
  auto [cq, cr] = c.divmod(g);
  if (!cr.is_zero()) throw Error("Bezout right-hand side not divisible by gcd");
  auto [q, r] = (s * cq).divmod(b);
  UPoly tt = (c - r * a) / b;
  return {r, tt};
}

// Yun's algorithm: a = lc * prod_i out[i]^(i+1).
std::vector<UPoly> squarefree(const UPoly& a) {
  std::vector<UPoly> out;
  UPoly da = a.derivative();
  UPoly g = ugcd(a, da);
  UPoly b = a / g;
  UPoly c = da / g;
  UPoly d = c - b.derivative();
  while (b.degree() > 0) {
    UPoly ai = ugcd(b, d);
    b = b / ai;
    c = d / ai;
    d = c - b.derivative();
    out.push_back(ai);
  }
  return out;
}

UPoly to_upoly(const MultiPoly& p, std::size_t var) {
  std::vector<QuadScalar> c(p.degree(var) + 1);
  for (const auto& [e, x] : p.terms()) c[e[var]] += x;
  return UPoly(std::move(c));
}

// Hermite reduction (linear version): returns the numerator and denominator
// of the remainder a/d after removing the rational part of the integral;
// the remainder has a squarefree denominator.
std::pair<UPoly, UPoly> hermite_remainder(UPoly a, UPoly d) {
  auto parts = squarefree(d);
  for (std::size_t idx = 1; idx < parts.size(); ++idx) {
    const int i = static_cast<int>(idx) + 1;
    const UPoly& v = parts[idx];
    if (v.degree() <= 0) continue;
    UPoly vi = UPoly::constant(1);
    for (int k = 0; k < i; ++k) vi = vi * v;
    UPoly u = d / vi;
    for (int j = i - 1; j >= 1; --j) {
      auto [b, c] = solve_bezout(u * v.derivative(), v, a.scaled(QuadScalar(-1) / QuadScalar(long(j))));
      a = c.scaled(QuadScalar(long(-j))) - u * b.derivative();
    }
    d = u * v;
  }
  return {a, d};
}

}  // namespace

bool is_derivative_univariate(const RatFunc& f, std::size_t var) {
  const auto& ctx = f.context();
  for (std::size_t v = 0; v < ctx->size(); ++v)
    if (v != var && f.depends_on(v))
      throw NotUnivariate("expression involves '" + ctx->name(v) + "' besides '" +
                          ctx->name(var) + "'");
  if (f.is_zero()) return true;
  UPoly num = to_upoly(f.num(), var);
  UPoly den = to_upoly(f.den(), var);
  QuadScalar lc = den.lc();
  num = num.scaled(lc.inverse());
  den = den.monic();
  auto [poly, proper] = num.divmod(den);
  if (proper.is_zero()) return true;
  auto [a, d] = hermite_remainder(proper, den);
  return (a % d).is_zero();
}

std::optional<RatFunc> antiderive_poly(std::span<const RatFunc> f) {
  if (f.empty()) throw DimensionMismatch("antiderive_poly needs at least one component");
  const ContextPtr ctx = f[0].context();
  const std::size_t m = ctx->derivation_count();
  if (f.size() != m) throw DimensionMismatch("one component per derivation required");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (!eq(derive(f[j], i), derive(f[i], j)))
        throw CompatibilityViolation("components " + std::to_string(i + 1) + " and " +
                                     std::to_string(j + 1) + " are not compatible");
  std::vector<std::size_t> coords(m);
  for (std::size_t k = 0; k < m; ++k) {
    auto c = ctx->coordinate_of(k);
    if (!c) return std::nullopt;
    coords[k] = *c;
  }
  auto gens = ctx->vars_of_kind(VarKind::Generator);
  for (const auto& fk : f) {
    for (auto c : coords)
      if (fk.den().depends_on(c)) return std::nullopt;
    for (auto g : gens)
      if (fk.depends_on(g)) return std::nullopt;
  }
  RatFunc h(ctx);
  for (std::size_t k = 0; k < m; ++k) {
    RatFunc r = f[k] - derive(h, k);
    if (r.is_zero()) continue;
    h += RatFunc(ctx, r.num().integrate(coords[k]), r.den());
  }
  for (std::size_t k = 0; k < m; ++k)
    if (!eq(derive(h, k), f[k])) return std::nullopt;
  return h;
}

std::optional<std::vector<QuadScalar>> monomial_log_derivative(std::span<const RatFunc> b) {
  if (b.empty()) return std::nullopt;
  const ContextPtr ctx = b[0].context();
  if (b.size() != ctx->derivation_count()) throw DimensionMismatch("one entry per derivation");
  auto coords = ctx->vars_of_kind(VarKind::Coordinate);
  const std::size_t n = ctx->size();
  MultiPoly all = MultiPoly::constant(n, QuadScalar(1));
  for (auto c : coords) all = all * MultiPoly::variable(n, c);

  // For every derivation k:  num(b_k) * P == den(b_k) * sum_j q_j D_k(t_j) P/t_j.
  std::map<std::pair<std::size_t, Exponents>, std::size_t> row_of;
  std::vector<std::vector<QuadScalar>> rows;
  std::vector<QuadScalar> rhs;
  auto row = [&](std::size_t k, const Exponents& e) -> std::size_t {
    auto [it, ins] = row_of.try_emplace({k, e}, rows.size());
    if (ins) {
      rows.emplace_back(coords.size());
      rhs.emplace_back(0);
    }
    return it->second;
  };
  for (std::size_t k = 0; k < b.size(); ++k) {
    if (!same_context(b[k].context(), ctx)) throw ContextMismatch("mixed contexts");
    MultiPoly target = b[k].num() * all;
    for (const auto& [e, c] : target.terms()) rhs[row(k, e)] += c;
    const auto& d = ctx->derivation(k);
    for (std::size_t j = 0; j < coords.size(); ++j) {
      const auto& img = d.images[coords[j]];
      MultiPoly image(n);
      if (img.kind == VarImage::Kind::One) {
        image = MultiPoly::constant(n, QuadScalar(1));
      } else if (img.kind == VarImage::Kind::Variable) {
        image = MultiPoly::variable(n, img.var);
      } else if (img.kind != VarImage::Kind::Zero) {
        return std::nullopt;
      }
      if (image.is_zero()) continue;
      Exponents ej(n, 0);
      ej[coords[j]] = 1;
      MultiPoly phi = b[k].den() * image * all.divide_monomial(ej);
      for (const auto& [e, c] : phi.terms()) rows[row(k, e)][j] += c;
    }
  }
  return solve_linear(std::move(rows), std::move(rhs), coords.size());
}

}  // namespace rpv
