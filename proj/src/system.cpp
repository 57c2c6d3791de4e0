#include "rpv/system.hpp"

#include "rpv/error.hpp"

namespace rpv {

LinSystem::LinSystem(ContextPtr ctx, std::size_t rank, std::vector<RatMatrix> matrices)
    : ctx_(std::move(ctx)), rank_(rank), matrices_(std::move(matrices)) {
  if (rank_ == 0) throw DimensionMismatch("system rank must be positive");
  if (matrices_.size() != ctx_->derivation_count())
    throw DimensionMismatch("expected " + std::to_string(ctx_->derivation_count()) +
                            " matrices, got " + std::to_string(matrices_.size()));
  for (auto& a : matrices_) {
    if (a.rows() != rank_ || a.cols() != rank_)
      throw DimensionMismatch("matrix is not " + std::to_string(rank_) + "x" +
                              std::to_string(rank_));
    a = in_context(a, ctx_);
  }
}

RatMatrix integrability_residual(const LinSystem& s, std::size_t i, std::size_t j) {
  const auto& ai = s.matrix(i);
  const auto& aj = s.matrix(j);
  return derive(ai, j) + ai * aj - derive(aj, i) - aj * ai;
}

IntegrabilityVerdict check_integrability(const LinSystem& s) {
  for (std::size_t i = 0; i < s.derivation_count(); ++i)
    for (std::size_t j = i + 1; j < s.derivation_count(); ++j) {
      RatMatrix r = integrability_residual(s, i, j);
      if (!is_zero(r)) return {false, i, j, std::move(r)};
    }
  return {};
}

std::vector<std::string> default_indeterminates(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < m; ++k) out.push_back("u" + std::to_string(k + 1));
  return out;
}

ReducedSystem kolchin_reduce(const LinSystem& s, std::vector<std::string> u_names) {
  const std::size_t m = s.derivation_count();
  if (u_names.empty()) u_names = default_indeterminates(m);
  ContextPtr kctx = DiffContext::kolchin(*s.context(), std::move(u_names));
  RatMatrix ad = zero_matrix(kctx, s.rank(), s.rank());
  for (std::size_t k = 0; k < m; ++k) {
    RatFunc u = RatFunc::variable(kctx, s.context()->size() + k);
    ad = ad + scale(in_context(s.matrix(k), kctx), u);
  }
  return ReducedSystem{LinSystem(kctx, s.rank(), {std::move(ad)}), m};
}

RatFunc apply_D(const RatFunc& f) {
  if (!f.context()->is_kolchin()) throw Error("apply_D needs a Kolchin context");
  return derive(f, 0);
}

LinSystem block_diagonal(const std::vector<LinSystem>& blocks) {
  if (blocks.empty()) throw DimensionMismatch("no blocks");
  const auto& ctx = blocks.front().context();
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (!same_context(b.context(), ctx)) throw ContextMismatch("blocks over different contexts");
    n += b.rank();
  }
  std::vector<RatMatrix> mats;
  for (std::size_t k = 0; k < ctx->derivation_count(); ++k) {
    RatMatrix a = zero_matrix(ctx, n, n);
    std::size_t off = 0;
    for (const auto& b : blocks) {
      for (std::size_t i = 0; i < b.rank(); ++i)
        for (std::size_t j = 0; j < b.rank(); ++j) a(off + i, off + j) = b.matrix(k)(i, j);
      off += b.rank();
    }
    mats.push_back(std::move(a));
  }
  return LinSystem(ctx, n, std::move(mats));
}

}  // namespace rpv
