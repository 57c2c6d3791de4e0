#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rpv/error.hpp"
#include "rpv/ratfunc.hpp"

namespace rpv {

/// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  template <class F>
  auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    std::vector<U> out;
    out.reserve(data_.size());
    for (const auto& x : data_) out.push_back(f(x));
    return Matrix<U>(rows_, cols_, std::move(out));
  }

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw DimensionMismatch("matrix data size mismatch");
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = Matrix<RatFunc>;

RatMatrix zero_matrix(const ContextPtr& ctx, std::size_t rows, std::size_t cols);
RatMatrix identity_matrix(const ContextPtr& ctx, std::size_t n);

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
RatMatrix scale(const RatMatrix& a, const RatFunc& s);

/// Entry-wise derivation k.
RatMatrix derive(const RatMatrix& a, std::size_t k);

bool is_zero(const RatMatrix& a);
/// Entry-wise field equality.
bool eq(const RatMatrix& a, const RatMatrix& b);
bool is_upper_triangular(const RatMatrix& a);

RatMatrix in_context(const RatMatrix& a, const ContextPtr& ctx);

}  // namespace rpv
