#include "rpv/poly.hpp"

#include <algorithm>
#include <numeric>

#include "rpv/error.hpp"

namespace rpv {

namespace {

Exponents zeros(std::size_t n) { return Exponents(n, 0); }

bool divides(const Exponents& d, const Exponents& e) {
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > e[i]) return false;
  return true;
}

Exponents add(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Exponents sub(const Exponents& a, const Exponents& b) {
  Exponents r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Infinitesimal order: the last variable is the most significant and a
// smaller exponent means a smaller (lower) monomial.
bool infinitesimal_less(const Exponents& a, const Exponents& b) {
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

}  // namespace

MultiPoly MultiPoly::constant(std::size_t nvars, const QuadScalar& c) {
  MultiPoly p(nvars);
  p.add_term(zeros(nvars), c);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t nvars, std::size_t var) {
  Exponents e = zeros(nvars);
  e.at(var) = 1;
  return monomial(std::move(e), QuadScalar(1));
}

MultiPoly MultiPoly::monomial(Exponents exps, const QuadScalar& c) {
  MultiPoly p(exps.size());
  p.add_term(exps, c);
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() != 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
}

std::optional<QuadScalar> MultiPoly::constant_value() const {
  if (terms_.empty()) return QuadScalar(0);
  if (!is_constant()) return std::nullopt;
  return terms_.begin()->second;
}

void MultiPoly::add_term(const Exponents& e, const QuadScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool MultiPoly::depends_on(std::size_t var) const {
  for (const auto& [e, c] : terms_)
    if (e[var] != 0) return true;
  return false;
}

std::uint32_t MultiPoly::degree(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

std::uint32_t MultiPoly::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0u));
  return d;
}

std::uint32_t MultiPoly::min_degree(std::size_t var) const {
  if (terms_.empty()) return 0;
  std::uint32_t d = UINT32_MAX;
  for (const auto& [e, c] : terms_) d = std::min(d, e[var]);
  return d;
}

const std::pair<const Exponents, QuadScalar>& MultiPoly::leading_term() const {
  if (terms_.empty()) throw Error("leading term of zero polynomial");
  return *terms_.rbegin();
}

const std::pair<const Exponents, QuadScalar>& MultiPoly::lowest_infinitesimal_term() const {
  if (terms_.empty()) throw Error("lowest term of zero polynomial");
  auto best = terms_.begin();
  for (auto it = terms_.begin(); it != terms_.end(); ++it)
    if (infinitesimal_less(it->first, best->first)) best = it;
  return *best;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (o.nvars_ != nvars_) throw ContextMismatch("polynomials over different variable counts");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (o.nvars_ != nvars_) throw ContextMismatch("polynomials over different variable counts");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const QuadScalar& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_) throw ContextMismatch("polynomials over different variable counts");
  MultiPoly r(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) r.add_term(add(ea, eb), ca * cb);
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(nvars_, QuadScalar(1));
  MultiPoly base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::partial(std::size_t var) const {
  MultiPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents ne = e;
    --ne[var];
    r.add_term(ne, c * QuadScalar(static_cast<long>(e[var])));
  }
  return r;
}

MultiPoly MultiPoly::integrate(std::size_t var) const {
  MultiPoly r(nvars_);
  for (const auto& [e, c] : terms_) {
    Exponents ne = e;
    ++ne[var];
    r.add_term(ne, c / QuadScalar(static_cast<long>(ne[var])));
  }
  return r;
}

MultiPoly MultiPoly::shift(std::size_t var, std::uint32_t e) const {
  if (e == 0) return *this;
  MultiPoly r(nvars_);
  for (const auto& [ex, c] : terms_) {
    Exponents ne = ex;
    ne[var] += e;
    r.terms_.emplace(std::move(ne), c);
  }
  return r;
}

std::map<std::uint32_t, MultiPoly> MultiPoly::coefficients_in(std::size_t var) const {
  std::map<std::uint32_t, MultiPoly> out;
  for (const auto& [e, c] : terms_) {
    Exponents ne = e;
    ne[var] = 0;
    auto [it, ins] = out.try_emplace(e[var], MultiPoly(nvars_));
    it->second.add_term(ne, c);
  }
  return out;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& d) const {
  if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (auto c = d.constant_value()) return *this * c->inverse();
  MultiPoly q(nvars_);
  MultiPoly r = *this;
  const auto& [ld, lc] = d.leading_term();
  QuadScalar lc_inv = lc.inverse();
  while (!r.is_zero()) {
    const auto& [lr, rc] = r.leading_term();
    if (!divides(ld, lr)) return std::nullopt;
    MultiPoly t = monomial(sub(lr, ld), rc * lc_inv);
    q += t;
    r -= t * d;
  }
  return q;
}

MultiPoly MultiPoly::remap(std::size_t nvars, std::span<const std::size_t> index_map) const {
  MultiPoly r(nvars);
  for (const auto& [e, c] : terms_) {
    Exponents ne = zeros(nvars);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      ne.at(index_map[i]) += e[i];
    }
    r.add_term(ne, c);
  }
  return r;
}

MultiPoly MultiPoly::substitute(std::size_t var, const MultiPoly& value) const {
  MultiPoly r(nvars_);
  for (const auto& [k, coeff] : coefficients_in(var)) r += coeff * value.pow(k);
  return r;
}

Exponents MultiPoly::monomial_content() const {
  if (terms_.empty()) return zeros(nvars_);
  Exponents m = terms_.begin()->first;
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < nvars_; ++i) m[i] = std::min(m[i], e[i]);
  return m;
}

MultiPoly MultiPoly::divide_monomial(const Exponents& m) const {
  MultiPoly r(nvars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(sub(e, m), c);
  return r;
}

Rat MultiPoly::integer_content_factor() const {
  Integer l = 1;
  for (const auto& [e, c] : terms_) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.a().get_den_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.b().get_den_mpz_t());
  }
  Integer g = 0;
  for (const auto& [e, c] : terms_) {
    Integer na = c.a().get_num() * (l / c.a().get_den());
    Integer nb = c.b().get_num() * (l / c.b().get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), na.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), nb.get_mpz_t());
  }
  if (g == 0) return Rat(1);
  Rat f(l, g);
  f.canonicalize();
  return f;
}

MultiPoly MultiPoly::monic() const {
  if (terms_.empty()) return *this;
  return *this * leading_term().second.inverse();
}

std::string term_to_string(const Exponents& e, const QuadScalar& c,
                           std::span<const std::string> names, bool) {
  std::string mono;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!mono.empty()) mono += "*";
    mono += names[i];
    if (e[i] != 1) mono += "^" + std::to_string(e[i]);
  }
  if (mono.empty()) return c.to_string();
  if (c.is_one()) return mono;
  if (c == QuadScalar(-1)) return "-" + mono;
  if (c.is_rational()) return c.to_string() + "*" + mono;
  return "(" + c.to_string() + ")*" + mono;
}

std::string MultiPoly::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  // Descending total degree, ties broken by descending lex order.
  std::vector<const std::pair<const Exponents, QuadScalar>*> order;
  for (const auto& t : terms_) order.push_back(&t);
  auto deg = [](const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0u); };
  std::stable_sort(order.begin(), order.end(), [&](auto* x, auto* y) {
    auto dx = deg(x->first), dy = deg(y->first);
    if (dx != dy) return dx > dy;
    return x->first > y->first;
  });
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::string s = term_to_string(order[i]->first, order[i]->second, names, i == 0);
    if (i == 0) {
      out = s;
    } else if (s.front() == '-') {
      out += " - " + s.substr(1);
    } else {
      out += " + " + s;
    }
  }
  return out;
}

namespace {

MultiPoly gcd_rec(const MultiPoly& a, const MultiPoly& b);

MultiPoly one(std::size_t n) { return MultiPoly::constant(n, QuadScalar(1)); }

std::optional<std::size_t> highest_var(const MultiPoly& a, const MultiPoly& b) {
  for (std::size_t v = a.nvars(); v-- > 0;)
    if (a.depends_on(v) || b.depends_on(v)) return v;
  return std::nullopt;
}

MultiPoly content_in(const MultiPoly& p, std::size_t var) {
  MultiPoly g(p.nvars());
  for (const auto& [k, c] : p.coefficients_in(var)) {
    g = gcd_rec(g, c);
    if (g.is_constant()) return one(p.nvars());
  }
  return g;
}

MultiPoly primitive_part(const MultiPoly& p, std::size_t var) {
  MultiPoly c = content_in(p, var);
  return p.divide_exact(c).value().monic();
}

MultiPoly leading_coeff_in(const MultiPoly& p, std::size_t var, std::uint32_t deg) {
  MultiPoly c(p.nvars());
  for (const auto& [e, x] : p.terms()) {
    if (e[var] != deg) continue;
    Exponents ne = e;
    ne[var] = 0;
    c.add_term(ne, x);
  }
  return c;
}

// Sparse pseudo-remainder of a by b with respect to `var`.
MultiPoly prem(MultiPoly r, const MultiPoly& b, std::size_t var) {
  const std::uint32_t db = b.degree(var);
  MultiPoly lc = leading_coeff_in(b, var, db);
  while (!r.is_zero() && r.degree(var) >= db) {
    std::uint32_t dr = r.degree(var);
    MultiPoly lr = leading_coeff_in(r, var, dr);
    r = r * lc - (lr * b).shift(var, dr - db);
  }
  return r;
}

MultiPoly gcd_rec(const MultiPoly& a, const MultiPoly& b) {
  const std::size_t n = a.nvars();
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return one(n);
  auto v = highest_var(a, b);
  if (!v) return one(n);
  if (!a.depends_on(*v)) return gcd_rec(a, content_in(b, *v));
  if (!b.depends_on(*v)) return gcd_rec(content_in(a, *v), b);
  MultiPoly ca = content_in(a, *v);
  MultiPoly cb = content_in(b, *v);
  MultiPoly c = gcd_rec(ca, cb);
  MultiPoly pa = a.divide_exact(ca).value();
  MultiPoly pb = b.divide_exact(cb).value();
  if (pa.degree(*v) < pb.degree(*v)) std::swap(pa, pb);
  while (!pb.is_zero()) {
    MultiPoly r = prem(pa, pb, *v);
    pa = std::move(pb);
    pb = r.is_zero() ? r : primitive_part(r, *v);
  }
  return (c * primitive_part(pa, *v)).monic();
}

}  // namespace

MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars() != b.nvars()) throw ContextMismatch("gcd over different variable counts");
  if (a.is_zero() || b.is_zero()) return gcd_rec(a, b);
  Exponents ma = a.monomial_content();
  Exponents mb = b.monomial_content();
  Exponents m(a.nvars());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::min(ma[i], mb[i]);
  MultiPoly g = gcd_rec(a.divide_monomial(ma), b.divide_monomial(mb));
  return g * MultiPoly::monomial(m, QuadScalar(1));
}

int infinitesimal_sign(const MultiPoly& p) {
  if (p.is_zero()) return 0;
  return quad_sign(p.lowest_infinitesimal_term().second);
}

}  // namespace rpv
