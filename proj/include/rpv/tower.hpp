#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rpv/system.hpp"

namespace rpv {

enum class StepKind { Integral, ExpIntegral, Algebraic, RotationPair };

std::string to_string(StepKind kind);

/// Outcome of a decidable-fragment check recorded on a step.
enum class CheckState { Yes, No, Assumed, NotApplicable };

std::string to_string(CheckState s);

/// Advisory facts recorded when a step is appended.
///
/// For integrals two readings of "not a derivative" are tracked separately:
/// `nonderivative` looks at every non-zero component a_k on its own
/// (a_k != d_k h), `not_exact` asks that no single h has d_k h = a_k for all k.
struct StepFlags {
  CheckState nonderivative = CheckState::NotApplicable;
  CheckState not_exact = CheckState::NotApplicable;
  CheckState irreducible = CheckState::NotApplicable;
  std::vector<std::size_t> zero_components;
  bool inherited = false;  // copied through reduce_tower
};

/// One generator (or the s, c pair) adjoined to the field below it.
///
///   Integral(a)       d_k x = a_k
///   ExpIntegral(b)    d_k x = b_k x
///   Algebraic(p)      p(x) = 0, d_k x = -p^{d_k}(x) / p'(x)
///   RotationPair(g)   d_k s = g_k c, d_k c = -g_k s, s^2 + c^2 = 1
struct TowerStep {
  StepKind kind = StepKind::Integral;
  std::vector<std::string> names;
  std::vector<RatFunc> coefficients;          // one per derivation, except Algebraic
  std::optional<RatFunc> minimal_polynomial;  // Algebraic only
  StepFlags flags;

  static TowerStep integral(std::string name, std::vector<RatFunc> a);
  static TowerStep exp_integral(std::string name, std::vector<RatFunc> b);
  /// p is a polynomial in `name` whose coefficients lie in the field below.
  static TowerStep algebraic(std::string name, RatFunc p);
  static TowerStep rotation_pair(std::string sine, std::string cosine, std::vector<RatFunc> g);
};

/// Element of a tower field: a rational function over the tower context,
/// kept reduced modulo the relation set.
using TowerElem = RatFunc;

/// Chain of differential field extensions K = F_1 < F_2 < ... < F_n.
///
/// Generators are variables of the tower context; every derivation of the
/// base context is extended to them through the step rules. Algebraic steps
/// and rotation pairs add rewrite rules that strictly lower the degree of
/// their own generator, so normal forms exist; zero tests assume the
/// transcendental generators are algebraically independent over K.
class Tower {
 public:
  /// Tower with no steps over a base field.
  static Tower base(ContextPtr base_ctx);

  /// Appends a step. Throws CompatibilityViolation, CoefficientOutsideField,
  /// DegenerateStep, VariableClash, or ReducibleMinimalPolynomial.
  Tower extend(TowerStep step) const;

  const ContextPtr& context() const { return ctx_; }
  const ContextPtr& base_context() const { return base_ctx_; }
  std::size_t derivation_count() const { return base_ctx_->derivation_count(); }
  const std::vector<TowerStep>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }

  /// Generator (or base variable) by name, as a tower element.
  TowerElem element(const std::string& name) const;
  /// Constant or base element moved into the tower context.
  TowerElem embed(const RatFunc& x) const;

  TowerElem normalize(const RatFunc& x) const;
  bool is_zero(const TowerElem& x) const;
  bool equal(const TowerElem& x, const TowerElem& y) const;

  TowerElem add(const TowerElem& x, const TowerElem& y) const { return normalize(x + y); }
  TowerElem sub(const TowerElem& x, const TowerElem& y) const { return normalize(x - y); }
  TowerElem mul(const TowerElem& x, const TowerElem& y) const { return normalize(x * y); }
  TowerElem div(const TowerElem& x, const TowerElem& y) const;

  /// Extension of derivation k to the tower.
  TowerElem derive_elem(const TowerElem& x, std::size_t k) const;

  /// Image of a generator under derivation k.
  const TowerElem& generator_derivative(const std::string& name, std::size_t k) const;

  /// Relation polynomials (p(x) for Algebraic, s^2 + c^2 - 1 for rotations).
  std::vector<TowerElem> relations() const;

  /// Generators of a given step kind, in tower order.
  std::vector<std::string> generators() const;

 private:
  struct Relation {
    std::size_t var;
    std::uint32_t degree;
    MultiPoly poly;  // leading coefficient `lead` in var^degree
    MultiPoly lead;
  };

  friend Tower reduce_tower(const Tower& t, std::vector<std::string> u_names);

  Tower() = default;
  void grow_context(const std::vector<std::string>& names);
  std::pair<MultiPoly, MultiPoly> pseudo_reduce(MultiPoly p, const Relation& rel) const;
  std::size_t var_index(const std::string& name) const;
  void check_closed(const std::vector<TowerElem>& c, const char* what) const;

  ContextPtr base_ctx_;
  ContextPtr ctx_;
  std::vector<TowerStep> steps_;
  std::vector<Relation> relations_;
  // gen_images_[k][g]: image of the g-th generator variable under derivation k.
  std::vector<std::vector<TowerElem>> gen_images_;
  std::vector<std::size_t> gen_vars_;
};

/// Same step kinds, names and coefficients (field equality) in order.
bool same_structure(const Tower& a, const Tower& b);

struct FailedEntry {
  std::size_t derivation;
  std::size_t row;
  std::size_t col;
  std::string lhs;
  std::string rhs;
};

struct Verification {
  bool ok = false;
  bool det_nonzero = false;
  std::optional<TowerElem> det;
  std::vector<FailedEntry> failures;
  /// Elements with every derivative zero that are not base constants; their
  /// presence shows the extension adds constants (negative check only).
  std::vector<std::string> new_constants;
};

/// Determinant over the tower field.
TowerElem determinant(const Tower& t, const RatMatrix& m);

/// d_j M == A_j M for every j and det M != 0.
Verification verify_fundamental(const Tower& t, const LinSystem& s, const RatMatrix& m);

enum class Certification { Liouvillian, GeneralisedLiouvillian, NotCertified };

std::string to_string(Certification c);

struct StepReport {
  std::size_t index;
  StepKind kind;
  std::vector<std::string> names;
  StepFlags flags;
  std::string note;
};

struct CertificationReport {
  Certification verdict;
  std::string reason;
  std::vector<StepReport> steps;
};

CertificationReport certify_tower(const Tower& t);

/// Ordinary tower over K_D: Integral(a) -> Integral(sum u_k a_k),
/// ExpIntegral(b) -> ExpIntegral(sum u_k b_k), Algebraic carried over.
/// Throws UnsupportedStep for rotation pairs.
Tower reduce_tower(const Tower& t, std::vector<std::string> u_names = {});

/// For a tower with one exponential step E, the subfield generated by E^n.
Tower fixed_subfield_power(const Tower& t, int n);

/// Result of quadrature solving of an upper-triangular system.
struct TriangularSolution {
  Tower tower;
  RatMatrix fundamental;
  std::vector<std::string> notes;
};

/// Builds a Liouvillian tower and an upper-triangular fundamental matrix.
/// Throws NotTriangular or NotIntegrable.
TriangularSolution solve_triangular(const LinSystem& s);

}  // namespace rpv
