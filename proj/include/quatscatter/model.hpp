#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace quatscatter {

// Numeric-domain failure: the parameters leave the scattering regime.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exponentials would overflow or lose all precision.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Which right-hand side the b-channel derivative jump uses.
//
// DerivedFromODE integrates the b-channel equation across the delta:
//   [phi_b'] = 2(E-m)(Va phi_b + Vb phi_a)
// PaperPrinted keeps the published form with the arguments swapped:
//   [phi_b'] = 2(E-m)(Va phi_a + Vb phi_b)
// The two coincide when Va == Vb. Only DerivedFromODE conserves current in
// general.
enum class JumpVariant { DerivedFromODE, PaperPrinted };

inline std::string_view to_string(JumpVariant v) {
  return v == JumpVariant::DerivedFromODE ? "derived" : "paper";
}

inline JumpVariant parse_variant(std::string_view s) {
  if (s == "derived" || s == "DerivedFromODE") return JumpVariant::DerivedFromODE;
  if (s == "paper" || s == "PaperPrinted") return JumpVariant::PaperPrinted;
  throw std::invalid_argument("unknown jump variant '" + std::string(s) +
                              "' (expected 'derived' or 'paper')");
}

// Natural units, hbar = c = 1. The deltas sit at x = -a0 and x = +a0 with
// real strength `va` and quaternionic strength `vb`.
struct ScatteringParams {
  double energy = 2.0;
  double mass = 1.0;
  double va = 0.0;
  double vb = 0.0;
  double a0 = 1.0;
  JumpVariant variant = JumpVariant::DerivedFromODE;
};

// Momentum of the free particle.
struct Wavenumber {
  double value;
};

// p = sqrt(E^2 - m^2). Requires E > m > 0; threshold and bound regimes are
// rejected.
inline Wavenumber dispersion(double energy, double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw DomainError("mass must be positive and finite, got " + std::to_string(mass));
  }
  if (!(energy > mass) || !std::isfinite(energy)) {
    throw DomainError("scattering requires E > m (E=" + std::to_string(energy) +
                      ", m=" + std::to_string(mass) + ")");
  }
  return {std::sqrt((energy - mass) * (energy + mass))};
}

inline Wavenumber dispersion(const ScatteringParams& params) {
  return dispersion(params.energy, params.mass);
}

struct DeltaStrengths {
  double real_channel;
  // The factor i in S_b = i Vb (...) is absorbed into the jump conditions.
  double quaternionic_channel;
};

inline DeltaStrengths delta_strengths(const ScatteringParams& params) {
  return {params.va, params.vb};
}

// Full validation used at solve time.
inline void validate(const ScatteringParams& params) {
  if (!std::isfinite(params.va) || !std::isfinite(params.vb)) {
    throw DomainError("delta strengths must be finite");
  }
  if (!(params.a0 > 0.0) || !std::isfinite(params.a0)) {
    throw DomainError("a0 must be positive and finite, got " + std::to_string(params.a0));
  }
  dispersion(params);
}

}  // namespace quatscatter
