#include "rpv/scalar.hpp"

#include <limits>

#include "rpv/error.hpp"

namespace rpv {

ParseError::ParseError(std::size_t offset, std::size_t line, std::size_t column,
                       std::string expected, std::string message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message +
            (expected.empty() ? std::string() : " (expected " + expected + ")")),
      offset_(offset),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      message_(std::move(message)) {}

std::string to_string(const Rat& q) { return q.get_str(); }

namespace {

// Trial division bound; a cofactor below bound^3 with no factor <= bound is
// squarefree unless it is a perfect square.
constexpr unsigned long kTrialBound = 100000;

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace

SquareFreeSplit squarefree_split(const Integer& n) {
  if (sgn(n) < 0) throw Error("squarefree_split of a negative integer");
  if (sgn(n) == 0) return {Integer(0), 0};
  Integer rest = n;
  Integer root = 1;
  Integer sf = 1;
  for (unsigned long p = 2; p <= kTrialBound; p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > rest) break;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    if (e == 0) continue;
    root *= ipow(Integer(p), e / 2);
    if (e % 2) sf *= p;
  }
  if (rest > 1) {
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
      Integer s;
      mpz_sqrt(s.get_mpz_t(), rest.get_mpz_t());
      root *= s;
    } else {
      Integer bound = Integer(kTrialBound);
      if (rest >= bound * bound * bound)
        throw Error("integer too large to split into square and squarefree parts");
      sf *= rest;
    }
  }
  if (!sf.fits_slong_p()) throw Error("squarefree part exceeds 64-bit tag");
  return {root, static_cast<std::int64_t>(sf.get_si())};
}

QuadScalar::QuadScalar(Rat a, Rat b, std::int64_t d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  a_.canonicalize();
  b_.canonicalize();
  if (d_ < 0 || d_ == 1) throw Error("quadratic tag must be squarefree and > 1");
  if (d_ == 0 && sgn(b_) != 0) throw Error("rational-only scalar with irrational part");
  collapse();
}

QuadScalar QuadScalar::sqrt_of(const Integer& n) {
  if (sgn(n) < 0) throw Error("sqrt of a negative integer is not real");
  auto split = squarefree_split(n);
  if (split.squarefree <= 1) return QuadScalar(Rat(split.root));
  return QuadScalar(Rat(0), Rat(split.root), split.squarefree);
}

void QuadScalar::collapse() {
  if (sgn(b_) == 0) d_ = 0;
}

std::int64_t QuadScalar::common_tag(const QuadScalar& x, const QuadScalar& y) {
  if (x.d_ == 0) return y.d_;
  if (y.d_ == 0 || y.d_ == x.d_) return x.d_;
  throw MixedQuadraticField("cannot combine sqrt(" + std::to_string(x.d_) + ") and sqrt(" +
                            std::to_string(y.d_) + ")");
}

QuadScalar QuadScalar::conjugate() const {
  QuadScalar r = *this;
  r.b_ = -r.b_;
  return r;
}

Rat QuadScalar::norm() const { return Rat(a_ * a_ - Rat(d_) * b_ * b_); }

QuadScalar QuadScalar::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero scalar");
  Rat n = norm();
  QuadScalar r;
  r.a_ = a_ / n;
  r.b_ = -b_ / n;
  r.d_ = d_;
  r.collapse();
  return r;
}

QuadScalar QuadScalar::operator-() const {
  QuadScalar r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

QuadScalar& QuadScalar::operator+=(const QuadScalar& o) {
  d_ = common_tag(*this, o);
  a_ += o.a_;
  b_ += o.b_;
  collapse();
  return *this;
}

QuadScalar& QuadScalar::operator-=(const QuadScalar& o) {
  d_ = common_tag(*this, o);
  a_ -= o.a_;
  b_ -= o.b_;
  collapse();
  return *this;
}

QuadScalar& QuadScalar::operator*=(const QuadScalar& o) {
  std::int64_t d = common_tag(*this, o);
  Rat na = a_ * o.a_ + Rat(d) * b_ * o.b_;
  Rat nb = a_ * o.b_ + b_ * o.a_;
  a_ = na;
  b_ = nb;
  d_ = d;
  collapse();
  return *this;
}

QuadScalar& QuadScalar::operator/=(const QuadScalar& o) { return *this *= o.inverse(); }

std::string QuadScalar::to_string() const {
  if (d_ == 0) return rpv::to_string(a_);
  std::string irr;
  if (b_ == 1) {
    irr = "sqrt(" + std::to_string(d_) + ")";
  } else if (b_ == -1) {
    irr = "-sqrt(" + std::to_string(d_) + ")";
  } else {
    irr = rpv::to_string(b_) + "*sqrt(" + std::to_string(d_) + ")";
  }
  if (sgn(a_) == 0) return irr;
  if (irr.front() == '-') return rpv::to_string(a_) + " - " + irr.substr(1);
  return rpv::to_string(a_) + " + " + irr;
}

int quad_sign(const QuadScalar& x) {
  int sa = sgn(x.a());
  int sb = sgn(x.b());
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: the larger of a^2 and b^2 d wins.
  Rat a2 = x.a() * x.a();
  Rat b2d = x.b() * x.b() * Rat(x.d());
  return a2 > b2d ? sa : sb;
}

int compare(const QuadScalar& x, const QuadScalar& y) { return quad_sign(x - y); }

std::optional<QuadScalar> rational_sqrt(const QuadScalar& x) {
  if (!x.is_rational() || sgn(x.a()) < 0) return std::nullopt;
  const Integer& num = x.a().get_num();
  const Integer& den = x.a().get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  Integer sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  return QuadScalar(Rat(sn, sd));
}

std::pair<QuadScalar, QuadScalar> indicial_roots(const Rat& c) {
  Rat disc = 1 + 4 * c;
  disc.canonicalize();
  if (sgn(disc) < 0)
    throw NegativeDiscriminant("1 + 4c = " + rpv::to_string(disc) + " is negative");
  // sqrt(p/q) = sqrt(p q) / q
  Integer pq = disc.get_num() * disc.get_den();
  QuadScalar root = QuadScalar::sqrt_of(pq) / QuadScalar(Rat(disc.get_den()));
  QuadScalar half(Rat(1, 2));
  return {half + half * root, half - half * root};
}

std::optional<std::vector<QuadScalar>> solve_linear(std::vector<std::vector<QuadScalar>> rows,
                                                    std::vector<QuadScalar> rhs,
                                                    std::size_t unknowns) {
  const std::size_t n = rows.size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < unknowns && r < n; ++col) {
    std::size_t p = r;
    while (p < n && rows[p][col].is_zero()) ++p;
    if (p == n) continue;
    std::swap(rows[p], rows[r]);
    std::swap(rhs[p], rhs[r]);
    QuadScalar inv = rows[r][col].inverse();
    for (std::size_t k = col; k < unknowns; ++k) rows[r][k] *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == r || rows[i][col].is_zero()) continue;
      QuadScalar f = rows[i][col];
      for (std::size_t k = col; k < unknowns; ++k) rows[i][k] -= f * rows[r][k];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(col);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (!rhs[i].is_zero()) return std::nullopt;
  std::vector<QuadScalar> x(unknowns);
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = rhs[i];
  return x;
}

}  // namespace rpv
