#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "quatscatter/dense_solve.hpp"
#include "quatscatter/model.hpp"
#include "quatscatter/quaternion.hpp"

// Direct integration of the coupled second-order equations with the deltas
// replaced by narrow normalized Gaussians. Shares nothing with the matching
// code path apart from the parameter types, so it can serve as an oracle.
namespace quatscatter::ode {

class StepTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RegularizedProblem {
  ScatteringParams params;
  double epsilon = 1e-3;
  double x_left = 0.0;
  double x_right = 0.0;
  double step = 0.0;
};

// Default layout: h = epsilon/20, a fit window of one wavelength to the left
// of the interaction region, 12 epsilon margins around the Gaussian tails.
inline RegularizedProblem make_problem(const ScatteringParams& params, double epsilon) {
  const double p = dispersion(params).value;
  RegularizedProblem prob;
  prob.params = params;
  prob.epsilon = epsilon;
  prob.x_right = params.a0 + 12.0 * epsilon;
  prob.x_left = -params.a0 - 12.0 * epsilon - 2.0 * std::numbers::pi / p;
  prob.step = epsilon / 20.0;
  return prob;
}

struct Diagnostics {
  std::size_t steps = 0;
  double max_truncation_estimate = 0.0;
  double fit_residual = 0.0;  // relative rms misfit of the asymptotic fit
  std::size_t window_samples = 0;
};

struct OracleResult {
  Complex r{};
  Complex t{};
  Complex r_tilde{};
  Complex t_tilde{};
  Diagnostics diagnostics{};

  double reflectance() const { return std::norm(r); }
  double transmittance() const { return std::norm(t); }
};

namespace detail {

// (phi_a, phi_a', phi_b, phi_b')
using State = std::array<Complex, 4>;

struct Rhs {
  double p2;
  double ka;  // 2(E+m)
  double kb;  // 2(E-m)
  double va, vb;
  double a0, epsilon;

  double gaussian_pair(double x) const {
    const double norm = 1.0 / (epsilon * std::sqrt(2.0 * std::numbers::pi));
    const double u = (x - a0) / epsilon;
    const double w = (x + a0) / epsilon;
    return norm * (std::exp(-0.5 * u * u) + std::exp(-0.5 * w * w));
  }

  // S_a = va g, S_b = i vb g:
  //   phi_a'' = -(p^2 - ka S_a) phi_a + i ka conj(S_b) phi_b
  //   phi_b'' =  (p^2 + kb S_a) phi_b - i kb S_b phi_a
  State operator()(double x, const State& y) const {
    const double g = gaussian_pair(x);
    const Complex sb{0.0, vb * g};
    const Complex i{0.0, 1.0};
    return {y[1], -(p2 - ka * va * g) * y[0] + i * ka * std::conj(sb) * y[2],
            y[3], (p2 + kb * va * g) * y[2] - i * kb * sb * y[0]};
  }
};

inline State axpy(const State& y, double h, const State& k) {
  return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

inline State rk4(const Rhs& f, double x, const State& y, double h) {
  const State k1 = f(x, y);
  const State k2 = f(x + 0.5 * h, axpy(y, 0.5 * h, k1));
  const State k3 = f(x + 0.5 * h, axpy(y, 0.5 * h, k2));
  const State k4 = f(x + h, axpy(y, h, k3));
  State out;
  for (std::size_t n = 0; n < 4; ++n)
    out[n] = y[n] + (h / 6.0) * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
  return out;
}

inline double max_abs(const State& y) {
  double m = 0.0;
  for (const auto& v : y) m = std::max(m, std::abs(v));
  return m;
}

struct Sample {
  double x;
  Complex phi_a;
  Complex phi_b;
};

struct ChannelFit {
  Complex first;   // coefficient of the first basis function
  Complex second;  // coefficient of the second basis function
  double misfit_sq = 0.0;
  double norm_sq = 0.0;
};

// Least squares of samples onto two basis functions f, g.
template <typename Value, typename F, typename G>
ChannelFit fit_two(const std::vector<Sample>& samples, Value value, F f, G g) {
  // normal equations [ <f,f> <f,g> ; <g,f> <g,g> ] c = [ <f,y> ; <g,y> ]
  SquareMatrix<Complex, 2> gram{};
  Vector<Complex, 2> proj{};
  for (const auto& s : samples) {
    const Complex fx = f(s.x), gx = g(s.x), y = value(s);
    gram[0][0] += std::conj(fx) * fx;
    gram[0][1] += std::conj(fx) * gx;
    gram[1][0] += std::conj(gx) * fx;
    gram[1][1] += std::conj(gx) * gx;
    proj[0] += std::conj(fx) * y;
    proj[1] += std::conj(gx) * y;
  }
  const auto c = gauss_solve(gram, proj, 1e-15);
  ChannelFit fit{c[0], c[1]};
  for (const auto& s : samples) {
    const Complex y = value(s);
    fit.misfit_sq += std::norm(y - c[0] * f(s.x) - c[1] * g(s.x));
    fit.norm_sq += std::norm(y);
  }
  return fit;
}

}  // namespace detail

inline void validate(const RegularizedProblem& prob) {
  const auto& prm = prob.params;
  quatscatter::validate(prm);
  if (!(prob.epsilon > 0.0) || prob.epsilon > prm.a0 / 20.0) {
    throw DomainError("epsilon must lie in (0, a0/20], got " + std::to_string(prob.epsilon));
  }
  if (!(prob.x_left < -prm.a0 - 10.0 * prob.epsilon) ||
      !(prob.x_right > prm.a0 + 10.0 * prob.epsilon)) {
    throw DomainError("integration interval must extend 10 epsilon beyond both deltas");
  }
  if (!(prob.step > 0.0)) throw DomainError("step must be positive");
}

// Integrates from x_right to x_left twice, seeding the transmitted forms
// (t, tt) = (1, 0) and (0, 1). On the fit window left of the interaction
// region each run is decomposed into e^{+-ipx} (a-channel) and e^{+-px}
// (b-channel). The physical combination has unit incident amplitude and no
// e^{-px} component growing towards x -> -inf.
inline OracleResult integrate(const RegularizedProblem& prob) {
  validate(prob);
  const auto& prm = prob.params;
  const double p = dispersion(prm).value;
  const double span = prob.x_right - prob.x_left;
  if (p * span > 600.0) {
    throw RangeError("evanescent growth e^{p L} overflows for p*L = " +
                     std::to_string(p * span));
  }

  const double window_width = 2.0 * std::numbers::pi / p;
  const double window_end = std::min(prob.x_left + window_width, -prm.a0 - 10.0 * prob.epsilon);

  const detail::Rhs f{p * p,   2.0 * (prm.energy + prm.mass), 2.0 * (prm.energy - prm.mass),
                      prm.va,  prm.vb,
                      prm.a0,  prob.epsilon};

  const auto n_steps = static_cast<std::size_t>(std::ceil(span / prob.step));
  const double h = -span / static_cast<double>(n_steps);

  const Complex ip{0.0, p};
  auto seed = [&](Complex t, Complex tt) {
    const double x = prob.x_right;
    const Complex ea = t * std::polar(1.0, p * x);
    const Complex eb = tt * std::exp(-p * x);
    return detail::State{ea, ip * ea, eb, -p * eb};
  };

  std::array<detail::State, 2> y = {seed(1.0, 0.0), seed(0.0, 1.0)};
  std::array<std::vector<detail::Sample>, 2> window;
  Diagnostics diag;
  diag.steps = n_steps;

  auto record = [&](double x) {
    if (x > window_end) return;
    for (std::size_t s = 0; s < 2; ++s) window[s].push_back({x, y[s][0], y[s][2]});
  };

  double x = prob.x_right;
  for (std::size_t n = 0; n < n_steps; ++n) {
    for (auto& ys : y) {
      // step doubling: one full step against two half steps
      const detail::State full = detail::rk4(f, x, ys, h);
      const detail::State half = detail::rk4(f, x + 0.5 * h, detail::rk4(f, x, ys, 0.5 * h), 0.5 * h);
      double diff = 0.0;
      for (std::size_t k = 0; k < 4; ++k) diff = std::max(diff, std::abs(full[k] - half[k]));
      const double estimate = diff / 15.0 / std::max(1.0, detail::max_abs(half));
      diag.max_truncation_estimate = std::max(diag.max_truncation_estimate, estimate);
      ys = half;
    }
    if (diag.max_truncation_estimate > 1e-8) {
      throw StepTooLargeError("local truncation estimate " +
                              std::to_string(diag.max_truncation_estimate) +
                              " exceeds 1e-8; reduce the step");
    }
    x = prob.x_right + static_cast<double>(n + 1) * h;
    record(x);
  }

  // Basis functions centred on the window keep the Gram matrix well scaled.
  const double xc = 0.5 * (prob.x_left + window_end);
  auto osc_plus = [p](double x) { return std::polar(1.0, p * x); };
  auto osc_minus = [p](double x) { return std::polar(1.0, -p * x); };
  auto grow = [p, xc](double x) { return Complex{std::exp(p * (x - xc))}; };
  auto decay = [p, xc](double x) { return Complex{std::exp(-p * (x - xc))}; };

  struct Decomposition {
    Complex incident, reflected, rt, blowup;
  };
  std::array<Decomposition, 2> dec;
  double misfit = 0.0, norm = 0.0;
  for (std::size_t s = 0; s < 2; ++s) {
    const auto fa = detail::fit_two(window[s], [](const detail::Sample& v) { return v.phi_a; },
                                    osc_plus, osc_minus);
    const auto fb = detail::fit_two(window[s], [](const detail::Sample& v) { return v.phi_b; },
                                    grow, decay);
    // undo the centring: e^{p(x-xc)} = e^{-p xc} e^{px}
    dec[s] = {fa.first, fa.second, fb.first * std::exp(-p * xc), fb.second * std::exp(p * xc)};
    misfit += fa.misfit_sq + fb.misfit_sq;
    norm += fa.norm_sq + fb.norm_sq;
  }
  diag.window_samples = window[0].size();
  diag.fit_residual = norm > 0.0 ? std::sqrt(misfit / norm) : 0.0;

  // alpha * incident_0 + beta * incident_1 = 1, alpha * blowup_0 + beta * blowup_1 = 0
  SquareMatrix<Complex, 2> mix{{{dec[0].incident, dec[1].incident},
                                {dec[0].blowup, dec[1].blowup}}};
  const auto coef = gauss_solve(mix, Vector<Complex, 2>{Complex{1.0}, Complex{}}, 1e-15);

  OracleResult out;
  out.t = coef[0];
  out.t_tilde = coef[1];
  out.r = coef[0] * dec[0].reflected + coef[1] * dec[1].reflected;
  out.r_tilde = coef[0] * dec[0].rt + coef[1] * dec[1].rt;
  out.diagnostics = diag;
  return out;
}

inline OracleResult integrate(const ScatteringParams& params, double epsilon) {
  return integrate(make_problem(params, epsilon));
}

}  // namespace quatscatter::ode
