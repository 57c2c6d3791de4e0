#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rpv/matrix.hpp"

namespace rpv {

/// Linear system d_j Y = A_j Y: one square matrix per derivation of the
/// context, all of the same rank.
class LinSystem {
 public:
  LinSystem(ContextPtr ctx, std::size_t rank, std::vector<RatMatrix> matrices);

  const ContextPtr& context() const { return ctx_; }
  std::size_t rank() const { return rank_; }
  std::size_t derivation_count() const { return matrices_.size(); }
  const RatMatrix& matrix(std::size_t j) const { return matrices_[j]; }
  const std::vector<RatMatrix>& matrices() const { return matrices_; }

 private:
  ContextPtr ctx_;
  std::size_t rank_;
  std::vector<RatMatrix> matrices_;
};

struct IntegrabilityVerdict {
  bool integrable = true;
  // First offending pair (0-based, i < j) and its residual when not integrable.
  std::size_t i = 0;
  std::size_t j = 0;
  std::optional<RatMatrix> residual;
};

/// d_j A_i + A_i A_j - d_i A_j - A_j A_i for i < j; integrable iff all vanish.
IntegrabilityVerdict check_integrability(const LinSystem& s);

/// Residual of the pair (i, j).
RatMatrix integrability_residual(const LinSystem& s, std::size_t i, std::size_t j);

/// Ordinary system D Y = A_D Y over K(u_1, ..., u_m), D = sum u_k d_k.
struct ReducedSystem {
  LinSystem system;  // Kolchin context, one matrix A_D
  std::size_t source_derivations = 0;

  const RatMatrix& a_d() const { return system.matrix(0); }
  const ContextPtr& context() const { return system.context(); }
};

/// Default indeterminate names u1, ..., um.
std::vector<std::string> default_indeterminates(std::size_t m);

/// A_D = sum_k u_k A_k; throws VariableClash when a u-name is taken.
ReducedSystem kolchin_reduce(const LinSystem& s, std::vector<std::string> u_names = {});

/// D f = sum_k u_k d_k f for f in the Kolchin context. u-symbols are
/// D-constants in this truncation; input that is not polynomial and linear
/// in the u-block throws NeedsHigherIndeterminates.
RatFunc apply_D(const RatFunc& f);

/// Block-diagonal system assembled from systems over one context.
LinSystem block_diagonal(const std::vector<LinSystem>& blocks);

}  // namespace rpv
