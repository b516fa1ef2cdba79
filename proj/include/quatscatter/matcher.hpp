#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>

#include "quatscatter/dense_solve.hpp"
#include "quatscatter/model.hpp"
#include "quatscatter/quaternion.hpp"

namespace quatscatter {

// Unknown ordering of the matching system. Index with these labels only.
enum class Unknown : std::size_t { r, r_tilde, c1, c2, c3, c4, t, t_tilde };

inline constexpr std::size_t kUnknownCount = 8;
inline constexpr std::array<std::string_view, kUnknownCount> kUnknownLabels = {
    "r", "rt", "c1", "c2", "c3", "c4", "t", "tt"};

constexpr std::size_t index_of(Unknown u) { return static_cast<std::size_t>(u); }

// Exponentials e^{p a0} beyond this are rejected.
inline constexpr double kMaxEvanescentExponent = 300.0;

// Upper wavefunction component inside one potential-free region:
//   phi_a(x) = a_plus e^{ipx} + a_minus e^{-ipx}
//   phi_b(x) = b_grow e^{px} + b_decay e^{-px}
// The full upper component is phi_a + j phi_b.
struct RegionField {
  Complex a_plus{};
  Complex a_minus{};
  Complex b_grow{};
  Complex b_decay{};
  double p = 0.0;

  Complex phi_a(double x) const {
    const Complex e = std::polar(1.0, p * x);
    return a_plus * e + a_minus * std::conj(e);
  }
  Complex dphi_a(double x) const {
    const Complex e = std::polar(1.0, p * x);
    return Complex{0.0, p} * (a_plus * e - a_minus * std::conj(e));
  }
  Complex phi_b(double x) const {
    return b_grow * std::exp(p * x) + b_decay * std::exp(-p * x);
  }
  Complex dphi_b(double x) const {
    return p * (b_grow * std::exp(p * x) - b_decay * std::exp(-p * x));
  }
  Quaternion upper(double x) const { return {phi_a(x), phi_b(x)}; }
};

using Matrix8 = SquareMatrix<Complex, kUnknownCount>;
using Vector8 = Vector<Complex, kUnknownCount>;

struct MatchingSystem {
  Matrix8 matrix{};
  Vector8 rhs{};
  ScatteringParams params{};
  double p = 0.0;

  static constexpr const auto& unknown_order = kUnknownLabels;
};

struct ScatteringSolution {
  Complex r{}, rt{}, c1{}, c2{}, c3{}, c4{}, t{}, tt{};
  double residual_norm = 0.0;
  ScatteringParams params{};
  double p = 0.0;

  Complex& operator[](Unknown u) {
    switch (u) {
      case Unknown::r: return r;
      case Unknown::r_tilde: return rt;
      case Unknown::c1: return c1;
      case Unknown::c2: return c2;
      case Unknown::c3: return c3;
      case Unknown::c4: return c4;
      case Unknown::t: return t;
      case Unknown::t_tilde: return tt;
    }
    return r;
  }
  Complex operator[](Unknown u) const { return const_cast<ScatteringSolution&>(*this)[u]; }

  double reflectance() const { return std::norm(r); }
  double transmittance() const { return std::norm(t); }

  // Region I: incident e^{ipx} plus reflected waves; region III: transmitted.
  RegionField region_I() const { return {Complex{1.0, 0.0}, r, rt, {}, p}; }
  RegionField region_II() const { return {c1, c2, c3, c4, p}; }
  RegionField region_III() const { return {t, {}, {}, tt, p}; }
};

namespace detail {

// Weights (w_a, w_b) of (phi_a, phi_b) in the b-channel jump.
inline std::pair<double, double> b_jump_weights(const ScatteringParams& params) {
  if (params.variant == JumpVariant::DerivedFromODE) return {params.vb, params.va};
  return {params.va, params.vb};
}

}  // namespace detail

// Rows, in order:
//   0  a-channel continuity at -a0
//   1  b-channel continuity at -a0
//   2  a-channel continuity at +a0
//   3  b-channel continuity at +a0
//   4  a-channel derivative jump at -a0
//   5  b-channel derivative jump at -a0
//   6  a-channel derivative jump at +a0
//   7  b-channel derivative jump at +a0
// Each row is written as (right-side expression) - (left-side expression) = 0
// with the incident-wave terms moved to the rhs.
inline MatchingSystem assemble_system(const ScatteringParams& params) {
  validate(params);
  const double p = dispersion(params).value;
  if (p * params.a0 > kMaxEvanescentExponent) {
    throw RangeError("p*a0 = " + std::to_string(p * params.a0) +
                     " overflows the evanescent exponentials");
  }

  const double a0 = params.a0;
  const Complex s = std::polar(1.0, p * a0);  // e^{i p a0}
  const Complex sinv = std::conj(s);          // e^{-i p a0}
  const double e = std::exp(p * a0);
  const double einv = std::exp(-p * a0);
  const Complex ip{0.0, p};
  const double ka = 2.0 * (params.energy + params.mass);
  const double kb = 2.0 * (params.energy - params.mass);
  const auto [wa, wb] = detail::b_jump_weights(params);
  const double va = params.va;
  const double vb = params.vb;

  MatchingSystem sys;
  sys.params = params;
  sys.p = p;
  auto& m = sys.matrix;
  auto& rhs = sys.rhs;
  auto at = [&m](std::size_t row, Unknown u) -> Complex& { return m[row][index_of(u)]; };

  // phi_a continuous at -a0: c1 e^{-ipa0} + c2 e^{ipa0} - r e^{ipa0} = e^{-ipa0}
  at(0, Unknown::r) = -s;
  at(0, Unknown::c1) = sinv;
  at(0, Unknown::c2) = s;
  rhs[0] = sinv;

  // phi_b continuous at -a0: c3 e^{-pa0} + c4 e^{pa0} - rt e^{-pa0} = 0
  at(1, Unknown::r_tilde) = -einv;
  at(1, Unknown::c3) = einv;
  at(1, Unknown::c4) = e;

  // phi_a continuous at +a0: t e^{ipa0} - c1 e^{ipa0} - c2 e^{-ipa0} = 0
  at(2, Unknown::t) = s;
  at(2, Unknown::c1) = -s;
  at(2, Unknown::c2) = -sinv;

  // phi_b continuous at +a0: tt e^{-pa0} - c3 e^{pa0} - c4 e^{-pa0} = 0
  at(3, Unknown::t_tilde) = einv;
  at(3, Unknown::c3) = -e;
  at(3, Unknown::c4) = -einv;

  // a-jump at -a0, values from region I:
  //   phi_a'(II) - phi_a'(I) - ka (va phi_a + vb phi_b) = 0
  at(4, Unknown::c1) = ip * sinv;
  at(4, Unknown::c2) = -ip * s;
  at(4, Unknown::r) = ip * s - ka * va * s;
  at(4, Unknown::r_tilde) = -ka * vb * einv;
  rhs[4] = ip * sinv + ka * va * sinv;

  // b-jump at -a0:
  //   phi_b'(II) - phi_b'(I) - kb (wa phi_a + wb phi_b) = 0
  at(5, Unknown::c3) = p * einv;
  at(5, Unknown::c4) = -p * e;
  at(5, Unknown::r_tilde) = -p * einv - kb * wb * einv;
  at(5, Unknown::r) = -kb * wa * s;
  rhs[5] = kb * wa * sinv;

  // a-jump at +a0, values from region III:
  //   phi_a'(III) - phi_a'(II) - ka (va phi_a + vb phi_b) = 0
  at(6, Unknown::t) = ip * s - ka * va * s;
  at(6, Unknown::t_tilde) = -ka * vb * einv;
  at(6, Unknown::c1) = -ip * s;
  at(6, Unknown::c2) = ip * sinv;

  // b-jump at +a0
  at(7, Unknown::t_tilde) = -p * einv - kb * wb * einv;
  at(7, Unknown::t) = -kb * wa * s;
  at(7, Unknown::c3) = -p * e;
  at(7, Unknown::c4) = p * einv;

  return sys;
}

// Evanescent columns carry entries of size e^{+-p a0}. Each column is scaled
// by a power of two bringing its largest entry near 1 (exact in binary), the
// scaled system is solved with partial pivoting, and the unknowns are scaled
// back. The residual is measured on the system as assembled.
inline ScatteringSolution solve_dense(const MatchingSystem& system) {
  Matrix8 scaled = system.matrix;
  std::array<int, kUnknownCount> exponents{};
  for (std::size_t c = 0; c < kUnknownCount; ++c) {
    double col_max = 0.0;
    for (std::size_t r = 0; r < kUnknownCount; ++r)
      col_max = std::max(col_max, std::abs(scaled[r][c]));
    if (col_max > 0.0) std::frexp(col_max, &exponents[c]);
    for (std::size_t r = 0; r < kUnknownCount; ++r)
      scaled[r][c] = Complex{std::ldexp(scaled[r][c].real(), -exponents[c]),
                             std::ldexp(scaled[r][c].imag(), -exponents[c])};
  }
  Vector8 x = gauss_solve(scaled, system.rhs, 1e-13);
  for (std::size_t c = 0; c < kUnknownCount; ++c)
    x[c] = Complex{std::ldexp(x[c].real(), -exponents[c]),
                   std::ldexp(x[c].imag(), -exponents[c])};
  ScatteringSolution sol;
  for (std::size_t i = 0; i < kUnknownCount; ++i) sol[static_cast<Unknown>(i)] = x[i];
  sol.residual_norm = residual_norm(system.matrix, x, system.rhs);
  sol.params = system.params;
  sol.p = system.p;
  return sol;
}

inline ScatteringSolution solve(const ScatteringParams& params) {
  return solve_dense(assemble_system(params));
}

struct MatchingReport {
  // Raw violations in row order (see assemble_system).
  std::array<double, kUnknownCount> violations{};
  // Each violation divided by 1 + the largest term entering its condition.
  std::array<double, kUnknownCount> scaled{};
  double max_violation = 0.0;
  double max_scaled = 0.0;
};

// Re-evaluates the eight matching conditions from the region wavefunctions,
// independently of the assembled matrix.
inline MatchingReport verify_matching(const ScatteringSolution& sol) {
  const auto& params = sol.params;
  const double a0 = params.a0;
  const double ka = 2.0 * (params.energy + params.mass);
  const double kb = 2.0 * (params.energy - params.mass);
  const auto [wa, wb] = detail::b_jump_weights(params);
  const RegionField left = sol.region_I();
  const RegionField mid = sol.region_II();
  const RegionField right = sol.region_III();

  MatchingReport rep;
  std::size_t row = 0;
  auto record = [&](Complex lhs, Complex rhs, double scale) {
    rep.violations[row] = std::abs(lhs - rhs);
    rep.scaled[row] = rep.violations[row] / (1.0 + scale);
    ++row;
  };
  auto mag = [](std::initializer_list<Complex> zs) {
    double m = 0.0;
    for (auto z : zs) m = std::max(m, std::abs(z));
    return m;
  };

  for (const auto& [outer, inner, x] : {std::tuple{left, mid, -a0}, std::tuple{right, mid, a0}}) {
    const Complex oa = outer.phi_a(x), ia = inner.phi_a(x);
    const Complex ob = outer.phi_b(x), ib = inner.phi_b(x);
    record(oa, ia, mag({oa, ia}));
    record(ob, ib, mag({ob, ib}));
  }
  for (const auto& [lo, hi, x] : {std::tuple{left, mid, -a0}, std::tuple{mid, right, a0}}) {
    const Complex fa = lo.phi_a(x);
    const Complex fb = lo.phi_b(x);
    const Complex jump_a = hi.dphi_a(x) - lo.dphi_a(x);
    const Complex jump_b = hi.dphi_b(x) - lo.dphi_b(x);
    const Complex src_a = ka * (params.va * fa + params.vb * fb);
    const Complex src_b = kb * (wa * fa + wb * fb);
    record(jump_a, src_a, mag({hi.dphi_a(x), lo.dphi_a(x), src_a}));
    record(jump_b, src_b, mag({hi.dphi_b(x), lo.dphi_b(x), src_b}));
  }

  for (std::size_t i = 0; i < kUnknownCount; ++i) {
    rep.max_violation = std::max(rep.max_violation, rep.violations[i]);
    rep.max_scaled = std::max(rep.max_scaled, rep.scaled[i]);
  }
  return rep;
}

}  // namespace quatscatter
