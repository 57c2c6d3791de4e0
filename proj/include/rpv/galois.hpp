#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rpv/system.hpp"

namespace rpv {

/// Descriptor of a (scoped) differential Galois group.
///
/// Rendering tokens: Trivial, Cyclic(n), Ga, Gm, Gm^k, SO2, SO2^a,
/// Torus(SO2^a, Gm^b), Triangular(split; f1, f2, ...),
/// Triangular(nonsplit; ...), Product(A, B, ...), Unknown("reason").
class GaloisClass {
 public:
  enum class Kind {
    Trivial,
    FiniteCyclic,
    Additive,
    SplitTorus,
    NonSplitTorus,
    Triangular,
    Product,
    Unknown,
  };

  static GaloisClass trivial();
  static GaloisClass cyclic(long n);
  static GaloisClass additive();
  static GaloisClass split_torus(long dim);
  static GaloisClass non_split_torus(long so2_blocks, long split_dim = 0);
  static GaloisClass triangular(bool split, std::vector<GaloisClass> factors);
  /// Drops trivial factors; a single remaining factor is returned as is.
  static GaloisClass product(std::vector<GaloisClass> factors);
  static GaloisClass unknown(std::string reason);

  Kind kind() const { return kind_; }
  /// Cyclic order, split torus dimension, or number of SO2 blocks.
  long order() const { return n_; }
  long split_dim() const { return split_dim_; }
  bool split() const { return split_; }
  const std::vector<GaloisClass>& factors() const { return factors_; }
  const std::string& reason() const { return reason_; }

  /// Unverified transcendence assumptions behind the descriptor.
  const std::vector<std::string>& assumptions() const { return assumptions_; }
  GaloisClass& assume(std::string what);
  /// Assumptions of this descriptor and of all factors, without repeats.
  std::vector<std::string> all_assumptions() const;

  bool solvable() const;
  bool real_split() const;
  bool contains_unknown() const;

  std::string render() const;

  friend bool operator==(const GaloisClass& a, const GaloisClass& b) {
    return a.render() == b.render();
  }

 private:
  Kind kind_ = Kind::Trivial;
  long n_ = 0;
  long split_dim_ = 0;
  bool split_ = true;
  std::vector<GaloisClass> factors_;
  std::string reason_;
  std::vector<std::string> assumptions_;
};

/// A_j = f_j I + g_j C with C a constant matrix outside span{I}. C is
/// normalised traceless with its first non-zero entry equal to one.
struct ScalarPlusConstantForm {
  std::vector<RatFunc> f;
  std::vector<RatFunc> g;
  Matrix<QuadScalar> c;
  std::size_t pivot_row = 0;
  std::size_t pivot_col = 0;
};

std::optional<ScalarPlusConstantForm> match_scalar_plus_constant(const LinSystem& s);

/// Largest torsion order searched by the logarithmic-derivative detector.
inline constexpr long kCyclicBound = 12;

/// Rank-one rule for y with d_k y = lambda * b_k y.
GaloisClass classify_rank_one(const std::vector<RatFunc>& b,
                              const QuadScalar& lambda = QuadScalar(1));

/// Throws NotIntegrable.
GaloisClass classify(const LinSystem& s);

enum class Verdict { GeneralisedLiouvillian, NotGeneralisedLiouvillian, Unknown };

std::string to_string(Verdict v);

Verdict liouvillian_verdict(const GaloisClass& g);

/// Galois data of y'' = (c / x^2) y over R(x).
struct EulerClass {
  GaloisClass group;
  Rat discriminant;  // 1 + 4c
  std::optional<std::pair<QuadScalar, QuadScalar>> roots;
  std::vector<std::string> solutions;
  std::optional<std::string> relation;
};

EulerClass classify_euler(const Rat& c);

}  // namespace rpv
