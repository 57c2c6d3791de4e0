#include "rpv/matrix.hpp"

namespace rpv {

RatMatrix zero_matrix(const ContextPtr& ctx, std::size_t rows, std::size_t cols) {
  return RatMatrix(rows, cols, RatFunc(ctx));
}

RatMatrix identity_matrix(const ContextPtr& ctx, std::size_t n) {
  RatMatrix m = zero_matrix(ctx, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = RatFunc::constant(ctx, QuadScalar(1));
  return m;
}

namespace {

void check_same_shape(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("matrix shapes differ");
}

}  // namespace

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  check_same_shape(a, b);
  RatMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  check_same_shape(a, b);
  RatMatrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) -= b(i, j);
  return r;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
  if (a.rows() == 0 || b.cols() == 0) return a;
  const auto& ctx = a(0, 0).context();
  RatMatrix r = zero_matrix(ctx, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
    }
  return r;
}

RatMatrix scale(const RatMatrix& a, const RatFunc& s) {
  return a.map([&](const RatFunc& x) { return x * s; });
}

RatMatrix derive(const RatMatrix& a, std::size_t k) {
  return a.map([&](const RatFunc& x) { return derive(x, k); });
}

bool is_zero(const RatMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a(i, j).is_zero()) return false;
  return true;
}

bool eq(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!eq(a(i, j), b(i, j))) return false;
  return true;
}

bool is_upper_triangular(const RatMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < i && j < a.cols(); ++j)
      if (!a(i, j).is_zero()) return false;
  return true;
}

RatMatrix in_context(const RatMatrix& a, const ContextPtr& ctx) {
  return a.map([&](const RatFunc& x) { return x.in_context(ctx); });
}

}  // namespace rpv
