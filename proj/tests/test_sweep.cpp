#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "quatscatter/sweep.hpp"

namespace {

using namespace quatscatter;

SweepResult synthetic(const std::vector<double>& r) {
  SweepResult res;
  for (std::size_t i = 0; i < r.size(); ++i)
    res.rows.push_back({static_cast<double>(i), r[i], 1.0 - r[i], 1.0, 0.0});
  return res;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepSpec fig1_spec() {
  return {reference_params(), SweepAxis::energy, kFigureEnergyLo, kFigureEnergyHi, 200};
}

TEST(SweepSpecValidation, Rules) {
  SweepSpec spec = fig1_spec();
  EXPECT_NO_THROW(validate(spec));
  spec.steps = 1;
  EXPECT_THROW(validate(spec), std::invalid_argument);
  spec = fig1_spec();
  spec.lo = 1.0;  // threshold
  EXPECT_THROW(validate(spec), std::invalid_argument);
  spec = fig1_spec();
  std::swap(spec.lo, spec.hi);
  EXPECT_THROW(validate(spec), std::invalid_argument);
  spec = {reference_params(), SweepAxis::va, 0.5, 0.5, 3};
  EXPECT_THROW(validate(spec), std::invalid_argument);
  spec.steps = 1;
  EXPECT_NO_THROW(validate(spec));
}

TEST(RunSweep, Fig1AllUnitary) {
  const auto res = run_sweep(fig1_spec());
  ASSERT_EQ(res.rows.size(), 200u);
  EXPECT_TRUE(res.errors.empty());
  EXPECT_DOUBLE_EQ(res.rows.front().axis_value, 1.001);
  EXPECT_DOUBLE_EQ(res.rows.back().axis_value, 4.0);
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    ASSERT_LT(res.rows[i].defect, 1e-10);
    if (i > 0) {
      ASSERT_GT(res.rows[i].axis_value, res.rows[i - 1].axis_value);
    }
  }
}

TEST(RunSweep, DegenerateSinglePointAtZeroStrength) {
  ScatteringParams base = reference_params();
  base.vb = 0.0;
  const auto res = run_sweep({base, SweepAxis::va, 0.0, 0.0, 1});
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_NEAR(res.rows[0].reflectance, 0.0, 1e-24);
  EXPECT_NEAR(res.rows[0].transmittance, 1.0, 1e-14);
}

TEST(RunSweep, PerPointFailuresAreCollected) {
  // a0 <= 0 fails at the first grid point only
  const auto res = run_sweep({reference_params(), SweepAxis::a0, 0.0, 1.0, 11});
  ASSERT_EQ(res.errors.size(), 1u);
  EXPECT_EQ(res.errors[0].axis_value, 0.0);
  EXPECT_EQ(res.rows.size(), 10u);

  EXPECT_THROW(run_sweep({reference_params(), SweepAxis::a0, -2.0, -1.0, 5}), SweepError);
}

TEST(RunSweep, ThreadedMatchesSerial) {
  const auto serial = run_sweep(fig1_spec(), 1);
  const auto threaded = run_sweep(fig1_spec(), 4);
  EXPECT_EQ(serial.rows, threaded.rows);
}

TEST(CountFluctuations, SyntheticShapes) {
  std::vector<double> mono(60);
  for (std::size_t i = 0; i < mono.size(); ++i) mono[i] = 0.01 * i;
  EXPECT_EQ(count_fluctuations(synthetic(mono)), 0);

  std::vector<double> tri(61);
  for (std::size_t i = 0; i < tri.size(); ++i) tri[i] = 30.0 - std::abs(30.0 - double(i));
  EXPECT_EQ(count_fluctuations(synthetic(tri)), 1);

  // flat-topped peak counts once
  std::vector<double> plateau = tri;
  for (std::size_t i = 28; i <= 32; ++i) plateau[i] = 30.0;
  EXPECT_EQ(count_fluctuations(synthetic(plateau)), 1);

  // plateau on a rising edge is not a maximum
  std::vector<double> step = mono;
  for (std::size_t i = 20; i < 25; ++i) step[i] = step[20];
  EXPECT_EQ(count_fluctuations(synthetic(step)), 0);

  EXPECT_THROW(count_fluctuations(synthetic(std::vector<double>(49, 0.0))), std::invalid_argument);
}

TEST(CountFluctuations, InvariantUnderRescaling) {
  ScatteringParams base = reference_params();
  base.a0 = 4.0;
  auto res = run_sweep({base, SweepAxis::energy, kFigureEnergyLo, kFigureEnergyHi, 400});
  const int count = count_fluctuations(res);
  EXPECT_GT(count, 0);
  for (double scale : {1e-3, 0.5, 7.0}) {
    auto scaled = res;
    for (auto& r : scaled.rows) r.reflectance *= scale;
    EXPECT_EQ(count_fluctuations(scaled), count);
  }
}

TEST(CountFluctuations, GrowWithSeparation) {
  int prev = -1;
  for (double a0 : {1.0, 2.0, 4.0}) {
    ScatteringParams base = reference_params();
    base.a0 = a0;
    const int c =
        count_fluctuations(run_sweep({base, SweepAxis::energy, kFigureEnergyLo, kFigureEnergyHi, 400}));
    EXPECT_GT(c, prev) << "a0=" << a0;
    prev = c;
  }
}

TEST(Emit, CsvSchema) {
  const auto res = run_sweep({reference_params(), SweepAxis::energy, 1.5, 2.5, 11});
  const std::string csv = to_csv(res);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "axis_value,R,T,sum,defect");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
  }
  EXPECT_EQ(rows, 11);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.substr(26, 4), "1.5,");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(Emit, DeterministicFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "quatscatter_test_emit";
  std::filesystem::create_directories(dir);
  for (auto fmt : {OutputFormat::csv, OutputFormat::json}) {
    emit(run_sweep(fig1_spec()), fmt, dir / "a");
    emit(run_sweep(fig1_spec(), 3), fmt, dir / "b");
    EXPECT_EQ(slurp(dir / "a"), slurp(dir / "b"));
  }
  EXPECT_THROW(emit(run_sweep(fig1_spec()), OutputFormat::csv, dir / "missing" / "x.csv"),
               std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST(Emit, JsonRoundTrip) {
  ScatteringParams base = reference_params();
  base.variant = JumpVariant::PaperPrinted;
  base.vb = 0.5;
  auto res = run_sweep({base, SweepAxis::a0, 0.0, 2.0, 21});
  ASSERT_FALSE(res.errors.empty());
  const auto text = render(res, OutputFormat::json);
  const auto back = sweep_result_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back.rows, res.rows);
  EXPECT_EQ(back.errors, res.errors);
  EXPECT_EQ(back.spec.axis, res.spec.axis);
  EXPECT_EQ(back.spec.steps, res.spec.steps);
  EXPECT_EQ(back.spec.lo, res.spec.lo);
  EXPECT_EQ(back.spec.hi, res.spec.hi);
  EXPECT_EQ(back.spec.base.vb, 0.5);
  EXPECT_EQ(back.spec.base.variant, JumpVariant::PaperPrinted);
  const auto meta = nlohmann::json::parse(text).at("metadata");
  EXPECT_EQ(meta.at("tool"), "quatscatter");
  EXPECT_EQ(meta.at("version"), std::string(kToolVersion));
}

TEST(Figures, CanonicalSetHasFourSweeps) {
  const auto figs = canonical_figures();
  ASSERT_EQ(figs.size(), 4u);
  EXPECT_EQ(figs[0].spec.axis, SweepAxis::energy);
  EXPECT_EQ(figs[0].spec.steps, 200);
  EXPECT_EQ(figs[1].spec.axis, SweepAxis::va);
  EXPECT_EQ(figs[2].spec.axis, SweepAxis::vb);
  EXPECT_EQ(figs[3].spec.axis, SweepAxis::a0);
  const auto fams = figure_families();
  ASSERT_EQ(fams.size(), 9u);
  EXPECT_EQ(fams[0].name, "fig2_va_0.5");
  EXPECT_EQ(fams[8].name, "fig4_a0_4");
}

}  // namespace
