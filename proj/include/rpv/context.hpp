#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rpv {

enum class VarKind {
  Coordinate,     // t_k, paired with a partial derivation
  Indeterminate,  // u_k introduced by Kolchin reduction
  Generator,      // tower generator; derived only through its Tower
};

/// Action of one derivation on one context variable.
struct VarImage {
  enum class Kind {
    Zero,
    One,
    Variable,   // the image is the variable `var`
    Truncated,  // u' symbols are not modelled; only u-linear input is accepted
    Undefined,  // generator variables
  };
  Kind kind = Kind::Zero;
  std::size_t var = 0;

  friend bool operator==(const VarImage&, const VarImage&) = default;
};

class DiffContext;
using ContextPtr = std::shared_ptr<const DiffContext>;

/// Ordered variable list plus the commuting derivations acting on it.
///
/// Variable order is significant: it fixes the infinitesimal ordering,
/// each later variable being positive and infinitesimal over the field
/// generated by the earlier ones.
class DiffContext {
 public:
  struct Derivation {
    std::string name;
    std::vector<VarImage> images;  // one per variable
    friend bool operator==(const Derivation&, const Derivation&) = default;
  };

  /// K = Q(sqrt d)(t_1, ..., t_m) with the partial derivations d/dt_k.
  static ContextPtr partial(std::vector<std::string> coordinates, std::int64_t sqrt_tag = 0);

  /// K_D = K(u_1, ..., u_m) with the single derivation D = sum u_k d/dt_k.
  /// Requires a partial context without indeterminates or generators.
  static ContextPtr kolchin(const DiffContext& base, std::vector<std::string> u_names);

  /// Appends generator variables (derivation images Undefined).
  ContextPtr with_generators(const std::vector<std::string>& names) const;

  /// Same variables and derivations with the variable order permuted.
  /// `order` must list every variable name exactly once.
  ContextPtr reordered(const std::vector<std::string>& order) const;

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  VarKind kind(std::size_t i) const { return kinds_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  std::size_t derivation_count() const { return derivations_.size(); }
  const Derivation& derivation(std::size_t k) const { return derivations_[k]; }
  std::optional<std::size_t> derivation_index(const std::string& name) const;

  /// Coordinate variable paired with derivation k in a partial context.
  std::optional<std::size_t> coordinate_of(std::size_t k) const;

  std::vector<std::size_t> vars_of_kind(VarKind kind) const;
  bool is_kolchin() const { return kolchin_; }
  std::int64_t sqrt_tag() const { return sqrt_tag_; }

  friend bool operator==(const DiffContext& a, const DiffContext& b) {
    return a.names_ == b.names_ && a.kinds_ == b.kinds_ && a.derivations_ == b.derivations_ &&
           a.sqrt_tag_ == b.sqrt_tag_ && a.kolchin_ == b.kolchin_;
  }

 private:
  DiffContext() = default;
  void add_var(std::string name, VarKind kind);

  std::vector<std::string> names_;
  std::vector<VarKind> kinds_;
  std::vector<Derivation> derivations_;
  std::int64_t sqrt_tag_ = 0;
  bool kolchin_ = false;
};

/// Pointer or structural equality.
bool same_context(const ContextPtr& a, const ContextPtr& b);

/// True for a well-formed identifier: [A-Za-z_][A-Za-z0-9_]*, not a keyword.
bool valid_identifier(const std::string& name);

}  // namespace rpv
