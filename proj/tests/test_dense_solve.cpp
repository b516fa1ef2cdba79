#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "quatscatter/dense_solve.hpp"

namespace {

using namespace quatscatter;
using C = std::complex<double>;

TEST(GaussSolve, NeedsPivoting) {
  // zero leading entry forces a row swap
  SquareMatrix<double, 3> a{{{0, 2, 1}, {1, 1, 1}, {2, 1, 0}}};
  Vector<double, 3> x_true{1, -2, 3};
  const auto b = multiply(a, x_true);
  const auto x = gauss_solve(a, b);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(x[i], x_true[i], 1e-14);
}

TEST(GaussSolve, RandomComplexSystems) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 200; ++trial) {
    SquareMatrix<C, 8> a;
    Vector<C, 8> x_true;
    for (auto& row : a)
      for (auto& v : row) v = {d(rng), d(rng)};
    for (auto& v : x_true) v = {d(rng), d(rng)};
    const auto b = multiply(a, x_true);
    const auto x = gauss_solve(a, b);
    EXPECT_LT(residual_norm(a, x, b), 1e-12 * (1.0 + max_abs(b)));
  }
}

TEST(GaussSolve, SingularReportsPivot) {
  SquareMatrix<C, 2> a{{{C{1, 0}, C{2, 0}}, {C{2, 0}, C{4, 0}}}};
  try {
    gauss_solve(a, Vector<C, 2>{C{1}, C{1}});
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.column(), 1u);
    EXPECT_LT(e.pivot_magnitude(), 1e-13 * 4.0);
  }
}

}  // namespace
