#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rpv {

using Integer = mpz_class;
using Rat = mpq_class;

std::string to_string(const Rat& q);

/// n = root^2 * squarefree with squarefree >= 1 (n > 0), or (0, 0) for n = 0.
struct SquareFreeSplit {
  Integer root;
  std::int64_t squarefree = 0;
};

/// Throws Error for n < 0 or when n has a cofactor too large to certify.
SquareFreeSplit squarefree_split(const Integer& n);

/// Exact element a + b*sqrt(d) of Q(sqrt d), d squarefree > 1.
///
/// d == 0 is the "rational-only" tag; any value whose irrational part is zero
/// collapses to that tag, so equal numbers always compare equal. Combining
/// two values with different non-zero tags throws MixedQuadraticField.
class QuadScalar {
 public:
  QuadScalar() = default;
  QuadScalar(long v) : a_(v) {}  // NOLINT: implicit from integer literals
  QuadScalar(Rat a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT
  QuadScalar(Rat a, Rat b, std::int64_t d);

  /// sqrt(n) for an integer n >= 0, with the square part pulled out.
  static QuadScalar sqrt_of(const Integer& n);

  const Rat& a() const { return a_; }
  const Rat& b() const { return b_; }
  std::int64_t d() const { return d_; }

  bool is_zero() const { return sgn(a_) == 0 && d_ == 0; }
  bool is_one() const { return d_ == 0 && a_ == 1; }
  bool is_rational() const { return d_ == 0; }
  /// True for rational-only values with denominator 1.
  bool is_integer() const { return d_ == 0 && a_.get_den() == 1; }

  QuadScalar conjugate() const;
  /// a^2 - d b^2.
  Rat norm() const;
  QuadScalar inverse() const;

  QuadScalar operator-() const;
  QuadScalar& operator+=(const QuadScalar& o);
  QuadScalar& operator-=(const QuadScalar& o);
  QuadScalar& operator*=(const QuadScalar& o);
  QuadScalar& operator/=(const QuadScalar& o);

  friend QuadScalar operator+(QuadScalar x, const QuadScalar& y) { return x += y; }
  friend QuadScalar operator-(QuadScalar x, const QuadScalar& y) { return x -= y; }
  friend QuadScalar operator*(QuadScalar x, const QuadScalar& y) { return x *= y; }
  friend QuadScalar operator/(QuadScalar x, const QuadScalar& y) { return x /= y; }
  friend bool operator==(const QuadScalar& x, const QuadScalar& y) {
    return x.d_ == y.d_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

  /// Exact literal in the expression grammar: `3/2`, `sqrt(5)`, `1/2 + 1/2*sqrt(5)`.
  std::string to_string() const;

 private:
  void collapse();
  static std::int64_t common_tag(const QuadScalar& x, const QuadScalar& y);

  Rat a_{0};
  Rat b_{0};
  std::int64_t d_ = 0;
};

/// Sign of a + b*sqrt(d) under the real embedding with sqrt(d) > 0.
int quad_sign(const QuadScalar& x);

/// -1, 0, +1 for x < y, x == y, x > y.
int compare(const QuadScalar& x, const QuadScalar& y);

/// Square root inside the field, when the value is a square of a rational.
std::optional<QuadScalar> rational_sqrt(const QuadScalar& x);

/// Roots (1 + sqrt(1+4c))/2 and (1 - sqrt(1+4c))/2 of r(r-1) = c.
/// Throws NegativeDiscriminant when 1 + 4c < 0.
std::pair<QuadScalar, QuadScalar> indicial_roots(const Rat& c);

/// Solves rows * x = rhs over the constant field by Gaussian elimination.
/// Free unknowns are set to zero; nullopt when the system is inconsistent.
std::optional<std::vector<QuadScalar>> solve_linear(
    std::vector<std::vector<QuadScalar>> rows, std::vector<QuadScalar> rhs,
    std::size_t unknowns);

}  // namespace rpv
