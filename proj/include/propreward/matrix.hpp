#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace propreward {

// Dense row-major matrix; rows are agents, columns are proposals throughout.
template <typename T>
class Matrix
{
public:
  using value_type = T;

  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
    : rows_(rows)
    , cols_(cols)
    , data_(rows * cols, fill)
  {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows)
    , cols_(cols)
    , data_(std::move(data))
  {
    if (data_.size() != rows_ * cols_)
    {
      throw std::invalid_argument("matrix data size does not match its shape");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T&       operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T>       row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t    rows_{0};
  std::size_t    cols_{0};
  std::vector<T> data_;
};

}  // namespace propreward
