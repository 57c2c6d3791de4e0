#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rpv/context.hpp"
#include "rpv/poly.hpp"

namespace rpv {

/// Element of the rational function field over a DiffContext.
///
/// Stored as numerator / denominator with the denominator non-zero, common
/// polynomial factors cancelled, integer content removed, and the lowest
/// infinitesimal monomial of the denominator carrying a positive coefficient.
/// A constant denominator is always folded into the numerator.
class RatFunc {
 public:
  explicit RatFunc(ContextPtr ctx);
  RatFunc(ContextPtr ctx, MultiPoly num, MultiPoly den = MultiPoly());

  static RatFunc constant(ContextPtr ctx, const QuadScalar& c);
  static RatFunc variable(ContextPtr ctx, std::size_t var);
  static RatFunc variable(ContextPtr ctx, const std::string& name);

  const ContextPtr& context() const { return ctx_; }
  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  std::optional<QuadScalar> constant_value() const;
  bool depends_on(std::size_t var) const { return num_.depends_on(var) || den_.depends_on(var); }

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }

  RatFunc scaled(const QuadScalar& c) const;
  RatFunc inverse() const;
  RatFunc pow(int e) const;

  /// Same element viewed in another context, matching variables by name.
  /// Throws CoefficientOutsideField when a used variable is missing.
  RatFunc in_context(const ContextPtr& target) const;

  /// Replaces a variable by a rational function of the same context.
  RatFunc substitute(std::size_t var, const RatFunc& value) const;

  /// Structural identity of the stored normal form (not field equality).
  bool same_form(const RatFunc& o) const;

  std::string to_string() const;

 private:
  void check_same(const RatFunc& o) const;
  void normalize();

  ContextPtr ctx_;
  MultiPoly num_;
  MultiPoly den_;
};

/// Field equality by cross multiplication.
bool eq(const RatFunc& f, const RatFunc& g);

/// Images of every context variable under derivation k (nullopt for
/// generators), after checking f against the indeterminate truncation.
std::vector<std::optional<RatFunc>> context_images(const RatFunc& f, std::size_t k);

/// Applies derivation k of the context.
RatFunc derive(const RatFunc& f, std::size_t k);

/// Derivation given by the image of every context variable; a variable
/// whose image is nullopt must not occur in f.
RatFunc derive_with(const RatFunc& f, std::span<const std::optional<RatFunc>> images);

/// Sign under the iterated infinitesimal ordering of the context.
int sign_infinitesimal(const RatFunc& f);

/// Decides whether f = g' for some g in the univariate field over `var`.
/// Throws NotUnivariate when f involves any other variable.
bool is_derivative_univariate(const RatFunc& f, std::size_t var);

/// Polynomial h with derive(h, k) == f[k] for every derivation k, if any.
/// Throws CompatibilityViolation when the vector is not closed.
std::optional<RatFunc> antiderive_poly(std::span<const RatFunc> f);

/// Rational constants q_j (one per coordinate) with
/// b_k = sum_j q_j * D_k(t_j) / t_j for every derivation k, i.e. b is the
/// logarithmic derivative of the monomial prod t_j^{q_j}.
std::optional<std::vector<QuadScalar>> monomial_log_derivative(std::span<const RatFunc> b);

}  // namespace rpv
