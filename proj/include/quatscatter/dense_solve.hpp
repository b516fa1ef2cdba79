#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace quatscatter {

template <typename T, std::size_t N>
using SquareMatrix = std::array<std::array<T, N>, N>;

template <typename T, std::size_t N>
using Vector = std::array<T, N>;

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(std::size_t column, double pivot, double threshold)
      : std::runtime_error("singular matrix: pivot magnitude " + std::to_string(pivot) +
                           " in column " + std::to_string(column) + " is below threshold " +
                           std::to_string(threshold)),
        column_(column),
        pivot_(pivot) {}

  std::size_t column() const { return column_; }
  double pivot_magnitude() const { return pivot_; }

 private:
  std::size_t column_;
  double pivot_;
};

template <typename T, std::size_t N>
double max_abs(const SquareMatrix<T, N>& a) {
  double m = 0.0;
  for (const auto& row : a)
    for (const auto& v : row) m = std::max(m, static_cast<double>(std::abs(v)));
  return m;
}

template <typename T, std::size_t N>
double max_abs(const Vector<T, N>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, static_cast<double>(std::abs(x)));
  return m;
}

template <typename T, std::size_t N>
Vector<T, N> multiply(const SquareMatrix<T, N>& a, const Vector<T, N>& x) {
  Vector<T, N> y{};
  for (std::size_t i = 0; i < N; ++i) {
    T acc{};
    for (std::size_t j = 0; j < N; ++j) acc += a[i][j] * x[j];
    y[i] = acc;
  }
  return y;
}

// Max-norm of a x - b.
template <typename T, std::size_t N>
double residual_norm(const SquareMatrix<T, N>& a, const Vector<T, N>& x,
                     const Vector<T, N>& b) {
  auto ax = multiply(a, x);
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    m = std::max(m, static_cast<double>(std::abs(ax[i] - b[i])));
  return m;
}

// Gaussian elimination with partial pivoting (largest magnitude in the
// column). A pivot below `relative_threshold * max|a_ij|` is singular.
template <typename T, std::size_t N>
Vector<T, N> gauss_solve(SquareMatrix<T, N> a, Vector<T, N> b,
                         double relative_threshold = 1e-13) {
  const double threshold = relative_threshold * max_abs(a);

  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot_row = col;
    double pivot_mag = std::abs(a[col][col]);
    for (std::size_t r = col + 1; r < N; ++r) {
      const double mag = std::abs(a[r][col]);
      if (mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = r;
      }
    }
    if (!(pivot_mag > threshold)) throw SingularMatrixError(col, pivot_mag, threshold);
    if (pivot_row != col) {
      std::swap(a[pivot_row], a[col]);
      std::swap(b[pivot_row], b[col]);
    }
    for (std::size_t r = col + 1; r < N; ++r) {
      const T factor = a[r][col] / a[col][col];
      if (factor == T{}) continue;
      a[r][col] = T{};
      for (std::size_t c = col + 1; c < N; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }

  Vector<T, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    T acc = b[i];
    for (std::size_t c = i + 1; c < N; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace quatscatter
