#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "quatscatter/matcher.hpp"
#include "quatscatter/model.hpp"
#include "quatscatter/quaternion.hpp"

namespace quatscatter {

enum class Region { I, II, III };

inline std::string_view to_string(Region r) {
  switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
  }
  return "?";
}

// Upper and lower quaternion components of the spinor at one point. The
// sigma_x factors of the lower component are absorbed: they appear twice in
// every bilinear through alpha_x and sigma_x^2 = 1.
struct SpinorValue {
  Quaternion upper;
  Quaternion lower;
};

// Conjugate-transposed spinor, a row (conj(upper), conj(lower)). Quaternion
// conjugation reverses the order of j and the complex coefficient:
// conj(j z) = -j z.
struct SpinorRow {
  Quaternion upper;
  Quaternion lower;
};

inline SpinorRow dagger(const SpinorValue& psi) {
  return {qconj(psi.upper), qconj(psi.lower)};
}

// psi^dagger alpha_x psi, with alpha_x swapping the upper and lower blocks.
inline Quaternion alpha_contraction(const SpinorRow& row, const SpinorValue& psi) {
  return qmul(row.upper, psi.lower) + qmul(row.lower, psi.upper);
}

// psi^dagger beta psi.
inline Quaternion beta_contraction(const SpinorRow& row, const SpinorValue& psi) {
  return qmul(row.upper, psi.upper) - qmul(row.lower, psi.lower);
}

// Closed-form spinor of one region. The lower component follows from the
// upper one by
//   lower_a = phi_a' / (i (E + m)),   lower_b = phi_b' / (i (E - m)).
class RegionSpinor {
 public:
  RegionSpinor(Region region, RegionField field, double energy, double mass, double a0)
      : region_(region), field_(field), energy_(energy), mass_(mass), a0_(a0) {}

  Region region() const { return region_; }
  const RegionField& field() const { return field_; }
  double energy() const { return energy_; }
  double mass() const { return mass_; }
  double p() const { return field_.p; }

  bool contains(double x) const {
    switch (region_) {
      case Region::I: return x < -a0_;
      case Region::II: return x > -a0_ && x < a0_;
      case Region::III: return x > a0_;
    }
    return false;
  }

  Quaternion upper(double x) const { return field_.upper(x); }

  Quaternion lower(double x) const {
    const Complex ia{0.0, energy_ + mass_};
    const Complex ib{0.0, energy_ - mass_};
    return {field_.dphi_a(x) / ia, field_.dphi_b(x) / ib};
  }

  SpinorValue at(double x) const { return {upper(x), lower(x)}; }

 private:
  Region region_;
  RegionField field_;
  double energy_;
  double mass_;
  double a0_;
};

inline RegionSpinor build_spinor(const ScatteringSolution& sol, Region region) {
  const auto& prm = sol.params;
  switch (region) {
    case Region::I: return {region, sol.region_I(), prm.energy, prm.mass, prm.a0};
    case Region::II: return {region, sol.region_II(), prm.energy, prm.mass, prm.a0};
    case Region::III: break;
  }
  return {Region::III, sol.region_III(), prm.energy, prm.mass, prm.a0};
}

// Full quaternion value of J = psi^dagger alpha_x psi. Real up to rounding.
inline Quaternion current_quaternion(const RegionSpinor& spinor, double x) {
  const SpinorValue psi = spinor.at(x);
  return alpha_contraction(dagger(psi), psi);
}

inline double current_at(const RegionSpinor& spinor, double x) {
  return current_quaternion(spinor, x).real();
}

// rho = psi-bar psi = psi^dagger beta psi.
inline double density_at(const RegionSpinor& spinor, double x) {
  const SpinorValue psi = spinor.at(x);
  return beta_contraction(dagger(psi), psi).real();
}

// The eight products of the expanded current
//   J = (A1 + A2, A3 + A4) . (B1 + B2, B3 + B4)
// with A1 = conj(phi_a), A2 = conj(j phi_b), A3 = conj(lower_a),
// A4 = conj(j lower_b), B1 = lower_a, B2 = j lower_b, B3 = phi_a, B4 = j phi_b.
struct CurrentTerms {
  Quaternion a1b1, a1b2, a2b1, a2b2, a3b3, a3b4, a4b3, a4b4;

  Quaternion total() const {
    return a1b1 + a1b2 + a2b1 + a2b2 + a3b3 + a3b4 + a4b3 + a4b4;
  }
  // j-proportional cross terms between the oscillating and evanescent parts.
  Quaternion j_cross() const { return a1b2 + a2b1 + a3b4 + a4b3; }
  // Purely evanescent terms; A2B2 and A4B4 are equal and opposite.
  Quaternion evanescent() const { return a2b2 + a4b4; }
};

inline CurrentTerms current_terms(const RegionSpinor& spinor, double x) {
  const Quaternion up = spinor.upper(x);
  const Quaternion lo = spinor.lower(x);

  const Quaternion b1{lo.za};
  const Quaternion b2 = jmul_left(lo.zb);
  const Quaternion b3{up.za};
  const Quaternion b4 = jmul_left(up.zb);
  const Quaternion a1 = qconj(b3);
  const Quaternion a2 = qconj(b4);
  const Quaternion a3 = qconj(b1);
  const Quaternion a4 = qconj(b2);

  return {a1 * b1, a1 * b2, a2 * b1, a2 * b2, a3 * b3, a3 * b4, a4 * b3, a4 * b4};
}

// Flux unit 2p/(E+m) carried by a unit-amplitude plane wave.
inline double flux_unit(const ScatteringSolution& sol) {
  return 2.0 * sol.p / (sol.params.energy + sol.params.mass);
}

struct CurrentReport {
  double j_left = 0.0;    // region I, from the spinor contraction
  double j_middle = 0.0;  // region II, between the deltas
  double j_right = 0.0;   // region III
  double reflectance = 0.0;
  double transmittance = 0.0;
  double defect = 0.0;  // |R + T - 1|
  // max |J - closed form| over regions I and III, closed forms
  // (2p/(E+m))(1 - R) and (2p/(E+m)) T
  double formula_mismatch = 0.0;
  // max |J_II - J_I|, |J_III - J_I|; nonzero when the jump conditions do not
  // conserve current locally
  double local_defect = 0.0;
};

inline CurrentReport conservation_check(const ScatteringSolution& sol) {
  const double a0 = sol.params.a0;
  CurrentReport rep;
  rep.reflectance = sol.reflectance();
  rep.transmittance = sol.transmittance();
  rep.defect = std::abs(rep.reflectance + rep.transmittance - 1.0);

  rep.j_left = current_at(build_spinor(sol, Region::I), -a0 - 0.5 * a0);
  rep.j_middle = current_at(build_spinor(sol, Region::II), 0.0);
  rep.j_right = current_at(build_spinor(sol, Region::III), a0 + 0.5 * a0);

  const double unit = flux_unit(sol);
  rep.formula_mismatch = std::max(std::abs(rep.j_left - unit * (1.0 - rep.reflectance)),
                                  std::abs(rep.j_right - unit * rep.transmittance));
  rep.local_defect = std::max(std::abs(rep.j_middle - rep.j_left),
                              std::abs(rep.j_right - rep.j_left));
  return rep;
}

}  // namespace quatscatter
