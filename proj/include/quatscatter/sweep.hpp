#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "quatscatter/matcher.hpp"
#include "quatscatter/model.hpp"
#include "quatscatter/observables.hpp"

namespace quatscatter {

inline constexpr std::string_view kToolName = "quatscatter";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class SweepAxis { energy, va, vb, a0 };

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::energy: return "E";
    case SweepAxis::va: return "Va";
    case SweepAxis::vb: return "Vb";
    case SweepAxis::a0: return "a0";
  }
  return "?";
}

inline SweepAxis parse_axis(std::string_view s) {
  if (s == "E" || s == "energy") return SweepAxis::energy;
  if (s == "Va" || s == "va") return SweepAxis::va;
  if (s == "Vb" || s == "vb") return SweepAxis::vb;
  if (s == "a0") return SweepAxis::a0;
  throw std::invalid_argument("unknown sweep axis '" + std::string(s) +
                              "' (expected E, Va, Vb or a0)");
}

// `base` supplies every parameter except the swept one, which is overwritten
// point by point. The jump variant is taken from `base`.
struct SweepSpec {
  ScatteringParams base{};
  SweepAxis axis = SweepAxis::energy;
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;
};

// Energies closer than this (relative) to the threshold E = m are rejected.
inline constexpr double kThresholdMargin = 1e-6;

// A degenerate single-point sweep is allowed as lo == hi with steps == 1.
inline void validate(const SweepSpec& spec) {
  if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi))
    throw std::invalid_argument("sweep range must be finite");
  if (spec.steps < 1) throw std::invalid_argument("steps must be positive");
  if (spec.lo == spec.hi) {
    if (spec.steps != 1)
      throw std::invalid_argument("lo == hi is only valid as a single-point sweep (steps = 1)");
  } else if (!(spec.lo < spec.hi)) {
    throw std::invalid_argument("sweep requires lo < hi");
  } else if (spec.steps < 2) {
    throw std::invalid_argument("steps must be at least 2");
  }
  if (spec.axis == SweepAxis::energy &&
      !(spec.lo > spec.base.mass * (1.0 + kThresholdMargin))) {
    throw std::invalid_argument("energy sweeps require lo > m (threshold excluded)");
  }
}

inline double grid_point(const SweepSpec& spec, int i) {
  if (spec.steps == 1) return spec.lo;
  if (i == spec.steps - 1) return spec.hi;
  return spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) / (spec.steps - 1);
}

inline ScatteringParams params_at(const SweepSpec& spec, double value) {
  ScatteringParams p = spec.base;
  switch (spec.axis) {
    case SweepAxis::energy: p.energy = value; break;
    case SweepAxis::va: p.va = value; break;
    case SweepAxis::vb: p.vb = value; break;
    case SweepAxis::a0: p.a0 = value; break;
  }
  return p;
}

struct SweepRow {
  double axis_value = 0.0;
  double reflectance = 0.0;
  double transmittance = 0.0;
  double sum = 0.0;
  double defect = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepFailure {
  double axis_value = 0.0;
  std::string message;

  friend bool operator==(const SweepFailure&, const SweepFailure&) = default;
};

struct SweepResult {
  SweepSpec spec{};
  std::vector<SweepRow> rows;
  std::vector<SweepFailure> errors;
};

// Thrown when not a single grid point could be solved.
class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 1) {
  validate(spec);
  const auto n = static_cast<std::size_t>(spec.steps);
  std::vector<SweepRow> rows(n);
  std::vector<std::string> failures(n);
  std::vector<char> ok(n, 0);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      const double v = grid_point(spec, static_cast<int>(i));
      try {
        const auto sol = solve(params_at(spec, v));
        const double R = sol.reflectance();
        const double T = sol.transmittance();
        if (!std::isfinite(R) || !std::isfinite(T)) throw RangeError("non-finite amplitudes");
        rows[i] = {v, R, T, R + T, std::abs(R + T - 1.0)};
        ok[i] = 1;
      } catch (const std::exception& e) {
        rows[i].axis_value = v;
        failures[i] = e.what();
      }
    }
  };

  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  SweepResult res;
  res.spec = spec;
  for (std::size_t i = 0; i < n; ++i) {
    if (ok[i])
      res.rows.push_back(rows[i]);
    else
      res.errors.push_back({rows[i].axis_value, failures[i]});
  }
  if (res.rows.empty()) {
    throw SweepError("every sweep point failed; first error: " +
                     (res.errors.empty() ? std::string("none") : res.errors.front().message));
  }
  return res;
}

// Number of strict interior local maxima of R along the sweep. Runs of equal
// values (within 1e-12 relative to max R) form a plateau that counts once.
inline int count_fluctuations(const SweepResult& result) {
  const auto& rows = result.rows;
  if (rows.size() < 50) {
    throw std::invalid_argument("fluctuation count needs at least 50 samples, got " +
                                std::to_string(rows.size()));
  }
  double scale = 0.0;
  for (const auto& r : rows) scale = std::max(scale, std::abs(r.reflectance));
  const double tol = 1e-12 * scale;

  // collapse plateaus
  std::vector<double> levels;
  for (const auto& r : rows) {
    if (levels.empty() || std::abs(r.reflectance - levels.back()) > tol)
      levels.push_back(r.reflectance);
  }
  int count = 0;
  for (std::size_t i = 1; i + 1 < levels.size(); ++i)
    if (levels[i] > levels[i - 1] && levels[i] > levels[i + 1]) ++count;
  return count;
}

// ---- output ----

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv(const SweepResult& result) {
  std::string out = "axis_value,R,T,sum,defect\n";
  for (const auto& r : result.rows) {
    out += format_number(r.axis_value);
    out += ',';
    out += format_number(r.reflectance);
    out += ',';
    out += format_number(r.transmittance);
    out += ',';
    out += format_number(r.sum);
    out += ',';
    out += format_number(r.defect);
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const SweepResult& result) {
  using nlohmann::ordered_json;
  const auto& s = result.spec;
  ordered_json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["axis"] = to_string(s.axis);
  meta["lo"] = s.lo;
  meta["hi"] = s.hi;
  meta["steps"] = s.steps;
  meta["variant"] = to_string(s.base.variant);
  meta["params"] = {{"E", s.base.energy}, {"m", s.base.mass}, {"Va", s.base.va},
                    {"Vb", s.base.vb},    {"a0", s.base.a0}};

  ordered_json rows = ordered_json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"axis_value", r.axis_value},
                    {"R", r.reflectance},
                    {"T", r.transmittance},
                    {"sum", r.sum},
                    {"defect", r.defect}});
  }
  ordered_json errors = ordered_json::array();
  for (const auto& e : result.errors)
    errors.push_back({{"axis_value", e.axis_value}, {"message", e.message}});

  return {{"metadata", meta}, {"rows", rows}, {"errors", errors}};
}

inline SweepResult sweep_result_from_json(const nlohmann::json& j) {
  SweepResult res;
  const auto& meta = j.at("metadata");
  auto& s = res.spec;
  s.axis = parse_axis(meta.at("axis").get<std::string>());
  s.lo = meta.at("lo").get<double>();
  s.hi = meta.at("hi").get<double>();
  s.steps = meta.at("steps").get<int>();
  s.base.variant = parse_variant(meta.at("variant").get<std::string>());
  const auto& prm = meta.at("params");
  s.base.energy = prm.at("E").get<double>();
  s.base.mass = prm.at("m").get<double>();
  s.base.va = prm.at("Va").get<double>();
  s.base.vb = prm.at("Vb").get<double>();
  s.base.a0 = prm.at("a0").get<double>();
  for (const auto& r : j.at("rows")) {
    res.rows.push_back({r.at("axis_value").get<double>(), r.at("R").get<double>(),
                        r.at("T").get<double>(), r.at("sum").get<double>(),
                        r.at("defect").get<double>()});
  }
  for (const auto& e : j.at("errors"))
    res.errors.push_back({e.at("axis_value").get<double>(), e.at("message").get<std::string>()});
  return res;
}

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + std::string(s) + "'");
}

inline std::string render(const SweepResult& result, OutputFormat format) {
  if (format == OutputFormat::csv) return to_csv(result);
  return to_json(result).dump(2) + "\n";
}

inline void emit(const SweepResult& result, OutputFormat format,
                 const std::filesystem::path& path) {
  // binary mode keeps LF line endings everywhere
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  const std::string text = render(result, format);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

// ---- canonical figure sweeps ----

struct FigureSweep {
  std::string name;
  SweepSpec spec;
};

// Reference parameters m = a0 = Va = Vb = 1.
inline ScatteringParams reference_params() { return {2.0, 1.0, 1.0, 1.0, 1.0}; }

inline constexpr double kFigureEnergyLo = 1.001;
inline constexpr double kFigureEnergyHi = 4.0;

// fig1: R, T against E. fig2/fig3: against Va / Vb at E = 2. fig4: against
// the half-separation a0 at E = 2.
inline std::vector<FigureSweep> canonical_figures(JumpVariant variant = JumpVariant::DerivedFromODE) {
  ScatteringParams base = reference_params();
  base.variant = variant;
  return {
      {"fig1", {base, SweepAxis::energy, kFigureEnergyLo, kFigureEnergyHi, 200}},
      {"fig2", {base, SweepAxis::va, 0.0, 3.0, 301}},
      {"fig3", {base, SweepAxis::vb, 0.0, 3.0, 301}},
      {"fig4", {base, SweepAxis::a0, 0.1, 5.0, 491}},
  };
}

// Energy sweeps for curve families: Va and Vb in {0.5, 1, 2}, a0 in {1, 2, 4}.
inline std::vector<FigureSweep> figure_families(JumpVariant variant = JumpVariant::DerivedFromODE) {
  ScatteringParams base = reference_params();
  base.variant = variant;
  std::vector<FigureSweep> out;
  auto add = [&](const std::string& name, ScatteringParams p, int steps) {
    out.push_back({name, {p, SweepAxis::energy, kFigureEnergyLo, kFigureEnergyHi, steps}});
  };
  for (double v : {0.5, 1.0, 2.0}) {
    auto p = base;
    p.va = v;
    add("fig2_va_" + format_number(v), p, 400);
  }
  for (double v : {0.5, 1.0, 2.0}) {
    auto p = base;
    p.vb = v;
    add("fig3_vb_" + format_number(v), p, 400);
  }
  for (double a : {1.0, 2.0, 4.0}) {
    auto p = base;
    p.a0 = a;
    add("fig4_a0_" + format_number(a), p, 400);
  }
  return out;
}

// Writes one file per sweep into `dir`; returns the written paths in order.
inline std::vector<std::filesystem::path> emit_figures(const std::filesystem::path& dir,
                                                       OutputFormat format,
                                                       bool families = false,
                                                       JumpVariant variant = JumpVariant::DerivedFromODE,
                                                       unsigned threads = 1) {
  std::filesystem::create_directories(dir);
  auto sweeps = canonical_figures(variant);
  if (families) {
    auto more = figure_families(variant);
    sweeps.insert(sweeps.end(), more.begin(), more.end());
  }
  std::vector<std::filesystem::path> written;
  for (const auto& fig : sweeps) {
    const auto path = dir / (fig.name + (format == OutputFormat::csv ? ".csv" : ".json"));
    emit(run_sweep(fig.spec, threads), format, path);
    written.push_back(path);
  }
  return written;
}

}  // namespace quatscatter
