#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace quatscatter {

using Complex = std::complex<double>;

// Four real components of phi0 + phi1 i + phi2 j + phi3 k.
using QuaternionComponents = std::array<double, 4>;

// Quaternion in symplectic form q = za + j zb with complex za, zb.
//
// The ordering matters: j z = conj(z) j for any complex z, so keeping j on
// the left lets wavefunction components phi_a + j phi_b map directly onto
// (za, zb).
struct Quaternion {
  Complex za{};
  Complex zb{};

  constexpr Quaternion() = default;
  constexpr Quaternion(Complex a, Complex b = {}) : za(a), zb(b) {}

  static constexpr Quaternion one() { return {Complex{1.0, 0.0}}; }
  static constexpr Quaternion i() { return {Complex{0.0, 1.0}}; }
  static constexpr Quaternion j() { return {Complex{}, Complex{1.0, 0.0}}; }
  // k = ij = j(-i)
  static constexpr Quaternion k() { return {Complex{}, Complex{0.0, -1.0}}; }

  double real() const { return za.real(); }

  // Sum of the magnitudes of the three imaginary parts.
  double imag_magnitude() const {
    return std::abs(za.imag()) + std::abs(zb);
  }

  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

inline Quaternion operator+(const Quaternion& p, const Quaternion& q) {
  return {p.za + q.za, p.zb + q.zb};
}

inline Quaternion operator-(const Quaternion& p, const Quaternion& q) {
  return {p.za - q.za, p.zb - q.zb};
}

inline Quaternion operator-(const Quaternion& q) { return {-q.za, -q.zb}; }

// Real scaling commutes with everything.
inline Quaternion operator*(double s, const Quaternion& q) {
  return {s * q.za, s * q.zb};
}

// Hamilton product. With j z = conj(z) j:
//   (a + j b)(c + j d) = (a c - conj(b) d) + j (conj(a) d + b c)
inline Quaternion qmul(const Quaternion& p, const Quaternion& q) {
  return {p.za * q.za - std::conj(p.zb) * q.zb,
          std::conj(p.za) * q.zb + p.zb * q.za};
}

inline Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return qmul(p, q);
}

// conj(za + j zb) = conj(za) - j zb
inline Quaternion qconj(const Quaternion& q) { return {std::conj(q.za), -q.zb}; }

inline double norm2(const Quaternion& q) {
  return std::norm(q.za) + std::norm(q.zb);
}

inline double magnitude(const Quaternion& q) {
  return std::hypot(std::abs(q.za), std::abs(q.zb));
}

/// The quaternion j z. Equal to conj(z) j; no reordering is needed in the
/// symplectic form since j already sits on the left.
inline Quaternion jmul_left(Complex z) { return {Complex{}, z}; }

// j zb = Re(zb) j + Im(zb) j i = Re(zb) j - Im(zb) k
inline QuaternionComponents to_components(const Quaternion& q) {
  return {q.za.real(), q.za.imag(), q.zb.real(), -q.zb.imag()};
}

inline Quaternion from_components(const QuaternionComponents& c) {
  return {Complex{c[0], c[1]}, Complex{c[2], -c[3]}};
}

}  // namespace quatscatter
