#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rpv/scalar.hpp"

namespace rpv {

using Exponents = std::vector<std::uint32_t>;

/// Sparse polynomial over Q(sqrt d) in a fixed number of variables.
///
/// Terms are keyed by exponent vectors in lexicographic order with variable 0
/// most significant; no zero coefficient is ever stored.
class MultiPoly {
 public:
  using TermMap = std::map<Exponents, QuadScalar>;

  explicit MultiPoly(std::size_t nvars = 0) : nvars_(nvars) {}

  static MultiPoly constant(std::size_t nvars, const QuadScalar& c);
  static MultiPoly variable(std::size_t nvars, std::size_t var);
  static MultiPoly monomial(Exponents exps, const QuadScalar& c);

  std::size_t nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::optional<QuadScalar> constant_value() const;
  bool is_monomial() const { return terms_.size() == 1; }

  void add_term(const Exponents& e, const QuadScalar& c);

  bool depends_on(std::size_t var) const;
  std::uint32_t degree(std::size_t var) const;
  std::uint32_t total_degree() const;
  /// Lowest exponent of `var` over all terms (0 for the zero polynomial).
  std::uint32_t min_degree(std::size_t var) const;

  /// Largest term in lex order.
  const std::pair<const Exponents, QuadScalar>& leading_term() const;
  /// Smallest monomial for the infinitesimal ordering: compare the exponent
  /// of the last variable first, then the one before, and so on.
  const std::pair<const Exponents, QuadScalar>& lowest_infinitesimal_term() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const QuadScalar& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const QuadScalar& c) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  MultiPoly pow(unsigned e) const;
  /// Formal partial derivative with respect to a variable.
  MultiPoly partial(std::size_t var) const;
  /// Formal antiderivative with respect to a variable (term-wise).
  MultiPoly integrate(std::size_t var) const;
  /// Multiplies by var^e.
  MultiPoly shift(std::size_t var, std::uint32_t e) const;

  /// Coefficients as a polynomial in `var`: exponent -> coefficient (var-free).
  std::map<std::uint32_t, MultiPoly> coefficients_in(std::size_t var) const;

  /// Exact quotient a / d when d divides a, else nullopt.
  std::optional<MultiPoly> divide_exact(const MultiPoly& d) const;

  /// Moves variable i to position index_map[i] in a polynomial of `nvars`.
  MultiPoly remap(std::size_t nvars, std::span<const std::size_t> index_map) const;

  /// Substitutes var -> value and keeps the same variable count.
  MultiPoly substitute(std::size_t var, const MultiPoly& value) const;

  /// Common monomial factor (componentwise min of exponents).
  Exponents monomial_content() const;
  /// Divides by a monomial that must divide every term.
  MultiPoly divide_monomial(const Exponents& e) const;

  /// Scalar normalisation factor: multiplying by it clears every rational
  /// denominator and removes the integer content of all a and b parts.
  Rat integer_content_factor() const;

  /// Scales so that the lex-leading coefficient is one.
  MultiPoly monic() const;

  std::string to_string(std::span<const std::string> names) const;

 private:
  std::size_t nvars_;
  TermMap terms_;
};

/// Greatest common divisor up to a scalar unit (lex-leading coefficient 1).
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

/// Sign of a non-zero polynomial under the infinitesimal ordering.
int infinitesimal_sign(const MultiPoly& p);

/// Prints a monomial with coefficient, e.g. "-3/2*t1^2*t2".
std::string term_to_string(const Exponents& e, const QuadScalar& c,
                           std::span<const std::string> names, bool leading);

}  // namespace rpv
