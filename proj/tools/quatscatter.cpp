// Command-line front end: single solves, parameter sweeps, ODE cross-checks
// and the canonical figure data.
//
// Exit codes: 0 success, 1 argument or I/O errors, 2 numeric-domain errors.

#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quatscatter/quatscatter.hpp"

namespace qs = quatscatter;
using nlohmann::json;

namespace {

constexpr int kExitArgs = 1;
constexpr int kExitNumeric = 2;

struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags bound to a subcommand. Values left unset on the command line can be
// filled from the --config JSON object, keyed by long flag name.
class ConfigBindings {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& target, const std::string& help) {
    CLI::Option* opt = app->add_option("--" + name, target, help)->capture_default_str();
    entries_.push_back({app, opt, name, [&target](const json& v) { target = v.get<T>(); }});
    return opt;
  }

  void apply(const json& config) const {
    for (const auto& e : entries_) {
      if (!e.app->parsed() || e.option->count() > 0 || !config.contains(e.key)) continue;
      try {
        e.assign(config.at(e.key));
      } catch (const json::exception& ex) {
        throw ArgumentError("config key '" + e.key + "': " + ex.what());
      }
    }
  }

 private:
  struct Entry {
    CLI::App* app;
    CLI::Option* option;
    std::string key;
    std::function<void(const json&)> assign;
  };
  std::vector<Entry> entries_;
};

struct PhysicsFlags {
  double energy = 2.0;
  double mass = 1.0;
  double va = 1.0;
  double vb = 1.0;
  double a0 = 1.0;
  std::string variant = "derived";

  qs::ScatteringParams params() const {
    return {energy, mass, va, vb, a0, qs::parse_variant(variant)};
  }
};

void bind_physics(ConfigBindings& cfg, CLI::App* app, PhysicsFlags& f, bool with_energy) {
  if (with_energy) cfg.add(app, "E", f.energy, "energy (natural units)");
  cfg.add(app, "m", f.mass, "mass");
  cfg.add(app, "va", f.va, "delta strength, real channel");
  cfg.add(app, "vb", f.vb, "delta strength, quaternionic channel");
  cfg.add(app, "a0", f.a0, "half-separation of the deltas");
  cfg.add(app, "variant", f.variant, "b-channel jump condition: derived | paper");
}

json complex_json(qs::Complex z) { return json::array({z.real(), z.imag()}); }

void print_complex(const char* label, qs::Complex z) {
  std::printf("%-3s = %s %s\n", label, qs::format_number(z.real()).c_str(),
              qs::format_number(z.imag()).c_str());
}

int run_solve(const PhysicsFlags& flags, bool as_json) {
  const auto params = flags.params();
  const auto sol = qs::solve(params);
  const auto rep = qs::conservation_check(sol);
  const auto match = qs::verify_matching(sol);

  if (as_json) {
    json out;
    out["params"] = {{"E", params.energy}, {"m", params.mass}, {"Va", params.va},
                     {"Vb", params.vb},    {"a0", params.a0},  {"variant", qs::to_string(params.variant)}};
    out["p"] = sol.p;
    json amps;
    for (std::size_t i = 0; i < qs::kUnknownCount; ++i)
      amps[std::string(qs::kUnknownLabels[i])] = complex_json(sol[static_cast<qs::Unknown>(i)]);
    out["amplitudes"] = amps;
    out["R"] = rep.reflectance;
    out["T"] = rep.transmittance;
    out["defect"] = rep.defect;
    out["J_left"] = rep.j_left;
    out["J_middle"] = rep.j_middle;
    out["J_right"] = rep.j_right;
    out["residual_norm"] = sol.residual_norm;
    out["matching_violation"] = match.max_scaled;
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  std::printf("E=%s m=%s Va=%s Vb=%s a0=%s variant=%s\n", qs::format_number(params.energy).c_str(),
              qs::format_number(params.mass).c_str(), qs::format_number(params.va).c_str(),
              qs::format_number(params.vb).c_str(), qs::format_number(params.a0).c_str(),
              std::string(qs::to_string(params.variant)).c_str());
  std::printf("p   = %s\n", qs::format_number(sol.p).c_str());
  for (std::size_t i = 0; i < qs::kUnknownCount; ++i)
    print_complex(std::string(qs::kUnknownLabels[i]).c_str(), sol[static_cast<qs::Unknown>(i)]);
  std::printf("R = %s\nT = %s\nR+T = %s\ndefect = %s\n", qs::format_number(rep.reflectance).c_str(),
              qs::format_number(rep.transmittance).c_str(),
              qs::format_number(rep.reflectance + rep.transmittance).c_str(),
              qs::format_number(rep.defect).c_str());
  std::printf("J_left = %s\nJ_middle = %s\nJ_right = %s\n", qs::format_number(rep.j_left).c_str(),
              qs::format_number(rep.j_middle).c_str(), qs::format_number(rep.j_right).c_str());
  std::printf("residual = %s\nmatching_violation = %s\n", qs::format_number(sol.residual_norm).c_str(),
              qs::format_number(match.max_scaled).c_str());
  return 0;
}

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot open '" + out_path + "' for writing");
  out << text;
  if (!out) throw ArgumentError("failed writing '" + out_path + "'");
}

int run_oracle(const PhysicsFlags& flags, double epsilon, bool convergence) {
  const auto params = flags.params();
  const auto sol = qs::solve(params);
  std::vector<double> eps{epsilon};
  if (convergence) eps = {8 * epsilon, 4 * epsilon, 2 * epsilon, epsilon};

  std::printf("matcher: r = %s %s  t = %s %s\n", qs::format_number(sol.r.real()).c_str(),
              qs::format_number(sol.r.imag()).c_str(), qs::format_number(sol.t.real()).c_str(),
              qs::format_number(sol.t.imag()).c_str());
  std::printf("epsilon,abs_r_diff,abs_t_diff,r_diff,t_diff,oracle_defect,truncation_estimate\n");
  for (double e : eps) {
    const auto o = qs::ode::integrate(params, e);
    std::printf("%s,%s,%s,%s,%s,%s,%s\n", qs::format_number(e).c_str(),
                qs::format_number(std::abs(std::abs(o.r) - std::abs(sol.r))).c_str(),
                qs::format_number(std::abs(std::abs(o.t) - std::abs(sol.t))).c_str(),
                qs::format_number(std::abs(o.r - sol.r)).c_str(),
                qs::format_number(std::abs(o.t - sol.t)).c_str(),
                qs::format_number(std::abs(o.reflectance() + o.transmittance() - 1.0)).c_str(),
                qs::format_number(o.diagnostics.max_truncation_estimate).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scattering by a quaternionic double delta potential in the Dirac equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qs::kToolVersion));

  std::string config_path;
  app.add_option("--config", config_path, "JSON file with default flag values")
      ->check(CLI::ExistingFile);

  ConfigBindings cfg;

  // solve
  PhysicsFlags solve_flags;
  bool solve_json = false;
  auto* solve_cmd = app.add_subcommand("solve", "solve one parameter point");
  bind_physics(cfg, solve_cmd, solve_flags, true);
  solve_cmd->add_flag("--json", solve_json, "print JSON instead of text");

  // sweep
  PhysicsFlags sweep_flags;
  std::string axis = "E";
  double lo = qs::kFigureEnergyLo;
  double hi = qs::kFigureEnergyHi;
  int steps = 200;
  std::string format = "csv";
  std::string out_path;
  unsigned threads = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter on a uniform grid");
  bind_physics(cfg, sweep_cmd, sweep_flags, true);
  cfg.add(sweep_cmd, "axis", axis, "swept parameter: E | Va | Vb | a0");
  cfg.add(sweep_cmd, "lo", lo, "lower end of the range");
  cfg.add(sweep_cmd, "hi", hi, "upper end of the range");
  cfg.add(sweep_cmd, "steps", steps, "number of grid points");
  cfg.add(sweep_cmd, "format", format, "csv | json");
  cfg.add(sweep_cmd, "out", out_path, "output path ('-' or empty for stdout)");
  cfg.add(sweep_cmd, "threads", threads, "worker threads");
  bool count = false;
  sweep_cmd->add_flag("--count-fluctuations", count,
                      "print the number of local maxima of R to stderr");

  // oracle
  PhysicsFlags oracle_flags;
  double epsilon = 1e-3;
  bool convergence = false;
  auto* oracle_cmd = app.add_subcommand("oracle", "compare with direct ODE integration");
  bind_physics(cfg, oracle_cmd, oracle_flags, true);
  cfg.add(oracle_cmd, "epsilon", epsilon, "Gaussian width of the regularized deltas");
  oracle_cmd->add_flag("--convergence", convergence, "also run 8, 4 and 2 times epsilon");

  // figures
  std::string out_dir = "figures";
  std::string fig_format = "csv";
  std::string fig_variant = "derived";
  bool families = false;
  unsigned fig_threads = 1;
  auto* fig_cmd = app.add_subcommand("figures", "emit the canonical sweep files");
  cfg.add(fig_cmd, "out-dir", out_dir, "output directory");
  cfg.add(fig_cmd, "format", fig_format, "csv | json");
  cfg.add(fig_cmd, "variant", fig_variant, "derived | paper");
  cfg.add(fig_cmd, "threads", fig_threads, "worker threads");
  fig_cmd->add_flag("--families", families, "also emit the energy-sweep curve families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitArgs;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      json config;
      try {
        config = json::parse(in);
      } catch (const json::exception& e) {
        throw ArgumentError("cannot parse config '" + config_path + "': " + e.what());
      }
      if (!config.is_object()) throw ArgumentError("config must be a JSON object");
      cfg.apply(config);
    }

    if (solve_cmd->parsed()) return run_solve(solve_flags, solve_json);

    if (sweep_cmd->parsed()) {
      qs::SweepSpec spec{sweep_flags.params(), qs::parse_axis(axis), lo, hi, steps};
      const auto fmt = qs::parse_format(format);
      const auto result = qs::run_sweep(spec, threads);
      write_or_print(qs::render(result, fmt), out_path);
      for (const auto& err : result.errors)
        std::cerr << "point " << qs::format_number(err.axis_value) << " failed: " << err.message << "\n";
      if (count) std::cerr << "fluctuations = " << qs::count_fluctuations(result) << "\n";
      return 0;
    }

    if (oracle_cmd->parsed()) return run_oracle(oracle_flags, epsilon, convergence);

    if (fig_cmd->parsed()) {
      const auto paths = qs::emit_figures(out_dir, qs::parse_format(fig_format), families,
                                          qs::parse_variant(fig_variant), fig_threads);
      for (const auto& p : paths) std::cout << p.string() << "\n";
      return 0;
    }
  } catch (const qs::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const qs::RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const qs::SingularMatrixError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const qs::SweepError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const qs::ode::StepTooLargeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitArgs;
  }
  return kExitArgs;
}
