#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "dephasim/io.hpp"
#include "dephasim/sweep.hpp"

namespace dephasim {
namespace {

const char* const kPhiMinus = "(|10> - |01>)/sqrt(2)";
const char* const kPsiPlus = "(|11> + |00>)/sqrt(2)";

SweepResult synthetic(const std::function<double(double)>& profile, double upper,
                      std::size_t samples) {
  SweepResult r;
  for (double t : uniform_grid(upper, samples)) r.rows.push_back({t, profile(t), profile(t)});
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("dephasim_" + name)).string();
}

TEST(DetectTransitions, ConstantProfileHasNone) {
  const auto one = [](double) { return 1.0; };
  EXPECT_TRUE(detect_transitions(synthetic(one, 2.0, 50), one).empty());
}

TEST(DetectTransitions, SyntheticSineZeros) {
  const auto profile = [](double t) { return std::max(0.0, std::sin(10.0 * t)); };
  const SweepResult r = synthetic(profile, 2.0, 401);
  const std::vector<double> t = detect_transitions(r, profile);
  // C(0) = 0 exactly, so the first crossing sits just after the origin;
  // the rest are the zeros k pi / 10 for k = 1..6.
  ASSERT_EQ(t.size(), 7u);
  for (std::size_t k = 0; k < t.size(); ++k)
    EXPECT_NEAR(t[k], static_cast<double>(k) * M_PI / 10.0, 2e-6);
  for (std::size_t k = 1; k < t.size(); ++k) EXPECT_LT(t[k - 1], t[k]);
}

TEST(DetectLocalMaxima, MonotoneProfileHasNone) {
  EXPECT_TRUE(detect_local_maxima(synthetic([](double t) { return t; }, 1.0, 20)).empty());
}

TEST(DetectLocalMaxima, SyntheticPeaks) {
  const auto profile = [](double t) { return std::max(0.0, std::sin(10.0 * t)); };
  const std::vector<LocalMaximum> m = detect_local_maxima(synthetic(profile, 2.0, 401));
  ASSERT_EQ(m.size(), 3u);
  for (std::size_t k = 0; k < m.size(); ++k)
    EXPECT_NEAR(m[k].gamma_t, (0.5 + 2.0 * static_cast<double>(k)) * M_PI / 10.0, 0.005);
}

TEST(CompareWindows, SelfComparisonOverlapsWhereEntangled) {
  const auto profile = [](double t) { return std::max(0.0, std::sin(10.0 * t)); };
  const SweepResult r = synthetic(profile, 2.0, 101);
  const WindowOverlap o = compare_windows(r, r);
  EXPECT_EQ(o.overlap_points, o.a_entangled_points);
  for (std::size_t k = 0; k < r.rows.size(); ++k)
    EXPECT_EQ(o.both_entangled[k], r.rows[k].concurrence > kEntanglementThreshold);
}

TEST(CompareWindows, DisjointWindows) {
  const SweepResult a = synthetic([](double t) { return t < 0.5 ? 1.0 : 0.0; }, 1.0, 11);
  const SweepResult b = synthetic([](double t) { return t > 0.5 ? 1.0 : 0.0; }, 1.0, 11);
  const WindowOverlap o = compare_windows(a, b);
  EXPECT_EQ(o.overlap_points, 0u);
  EXPECT_EQ(o.a_entangled_points, 5u);
  EXPECT_EQ(o.b_entangled_points, 5u);
}

TEST(CompareWindows, GridMismatch) {
  const auto one = [](double) { return 1.0; };
  try {
    compare_windows(synthetic(one, 1.0, 10), synthetic(one, 1.0, 11));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
  try {
    compare_windows(synthetic(one, 1.0, 10), synthetic(one, 2.0, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(Windows, AlternateAndMarkCompleteness) {
  const auto profile = [](double t) { return std::max(0.0, std::cos(10.0 * t)); };
  SweepResult r = synthetic(profile, 1.0, 201);
  r.transitions = detect_transitions(r, profile);
  const std::vector<Window> w = windows(r);
  ASSERT_EQ(w.size(), r.transitions.size() + 1);
  EXPECT_TRUE(w.front().entangled);
  EXPECT_FALSE(w.front().complete);
  EXPECT_FALSE(w.back().complete);
  for (std::size_t k = 1; k < w.size(); ++k) EXPECT_NE(w[k].entangled, w[k - 1].entangled);
  for (std::size_t k = 1; k + 1 < w.size(); ++k) EXPECT_TRUE(w[k].complete);
}

TEST(RunSweep, SingletStartsMaximallyEntangled) {
  SweepConfig config;
  config.initial_state = kPhiMinus;
  config.omega_ratio = 31.25;
  config.gamma_t_max = 0.05;
  config.samples = 11;
  const SweepResult r = run_sweep(config);
  ASSERT_EQ(r.rows.size(), 11u);
  EXPECT_EQ(r.rows[0].gamma_t, 0.0);
  EXPECT_NEAR(r.rows[0].concurrence, 1.0, 1e-12);
  EXPECT_NEAR(r.rows[0].mutual_information, 2.0, 1e-12);
  for (std::size_t k = 1; k < r.rows.size(); ++k) EXPECT_GT(r.rows[k].gamma_t, r.rows[k - 1].gamma_t);
}

TEST(RunSweep, NoDriveKeepsTheSingletFixed) {
  SweepConfig config;
  config.initial_state = kPhiMinus;
  config.omega_ratio = 0.0;
  config.gamma_t_max = 3.0;
  config.samples = 31;
  const SweepResult r = run_sweep(config);
  for (const SweepRow& row : r.rows) {
    EXPECT_NEAR(row.concurrence, 1.0, 1e-12);
    EXPECT_NEAR(row.mutual_information, 2.0, 1e-12);
  }
  EXPECT_TRUE(r.transitions.empty());
  EXPECT_TRUE(r.maxima.empty());
}

TEST(RunSweep, FragileStateStartsSeparable) {
  SweepConfig config;
  config.initial_state = kPsiPlus;
  config.gamma_t_max = 0.02;
  config.samples = 5;
  for (const SweepRow& row : run_sweep(config).rows) EXPECT_EQ(row.concurrence, 0.0);
}

TEST(RunSweep, RejectsInvalidConfig) {
  SweepConfig config;
  config.initial_state = kPhiMinus;
  config.samples = 1;
  EXPECT_THROW(run_sweep(config), Error);
  config.samples = 10;
  config.gamma_t_max = 0.0;
  EXPECT_THROW(run_sweep(config), Error);
  config.gamma_t_max = 1.0;
  config.omega_ratio = -2.0;
  EXPECT_THROW(run_sweep(config), Error);
  config.omega_ratio = 1.0;
  config.initial_state = "|1,-1>";
  EXPECT_THROW(run_sweep(config), Error);
}

class SingletSweep : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    config_.initial_state = kPhiMinus;
    config_.omega_ratio = 31.25;
    config_.gamma_t_max = 1.0;
    config_.samples = 400;
    result_ = new SweepResult(run_sweep(config_));
  }
  static void TearDownTestSuite() { delete result_; }

  static SweepConfig config_;
  static SweepResult* result_;
};

SweepConfig SingletSweep::config_;
SweepResult* SingletSweep::result_ = nullptr;

TEST_F(SingletSweep, RefinedTransitionsAreSeparable) {
  ASSERT_FALSE(result_->transitions.empty());
  const StationaryEvaluator evaluator = StationaryEvaluator::from_config(config_);
  for (double t : result_->transitions) EXPECT_LE(std::abs(evaluator.concurrence(t)), 1e-6) << t;
  EXPECT_EQ(detect_transitions(config_, *result_), result_->transitions);
}

TEST_F(SingletSweep, MutualInformationDominatesConcurrence) {
  for (const SweepRow& row : result_->rows)
    EXPECT_GE(row.mutual_information, row.concurrence - 1e-9) << row.gamma_t;
}

TEST_F(SingletSweep, MaximaLieInsideEntangledWindows) {
  ASSERT_FALSE(result_->maxima.empty());
  for (const LocalMaximum& m : result_->maxima) EXPECT_GT(m.concurrence, kEntanglementThreshold);
}

TEST_F(SingletSweep, MaximaStableUnderGridRefinement) {
  SweepConfig fine = config_;
  fine.samples = 2 * config_.samples - 1;
  const SweepResult refined = run_sweep(fine);
  ASSERT_EQ(refined.maxima.size(), result_->maxima.size());
  const double coarse_step = config_.gamma_t_max / static_cast<double>(config_.samples - 1);
  for (std::size_t k = 0; k < refined.maxima.size(); ++k)
    EXPECT_LE(std::abs(refined.maxima[k].gamma_t - result_->maxima[k].gamma_t), coarse_step);
}

TEST_F(SingletSweep, WorkerCountDoesNotChangeResults) {
  SweepConfig threaded = config_;
  threaded.workers = 4;
  SweepConfig serial = config_;
  serial.workers = 1;
  EXPECT_EQ(format_csv(run_sweep(threaded)), format_csv(run_sweep(serial)));
  EXPECT_EQ(run_sweep(threaded).rows, result_->rows);
}

TEST_F(SingletSweep, CsvRoundTrip) {
  const std::string path = temp_path("roundtrip.csv");
  write_csv(*result_, path);
  const SweepResult back = read_csv(path);
  ASSERT_EQ(back.rows.size(), result_->rows.size());
  for (std::size_t k = 0; k < back.rows.size(); ++k) {
    EXPECT_EQ(format_number(back.rows[k].gamma_t), format_number(result_->rows[k].gamma_t));
    EXPECT_EQ(format_number(back.rows[k].concurrence),
              format_number(result_->rows[k].concurrence));
    EXPECT_EQ(format_number(back.rows[k].mutual_information),
              format_number(result_->rows[k].mutual_information));
    EXPECT_NEAR(back.rows[k].concurrence, result_->rows[k].concurrence, 1e-11);
  }
  EXPECT_EQ(back.transitions.size(), result_->transitions.size());
  ASSERT_EQ(back.maxima.size(), result_->maxima.size());
  for (std::size_t k = 0; k < back.maxima.size(); ++k)
    EXPECT_EQ(back.maxima[k].index, result_->maxima[k].index);
  // The re-serialized file is byte-identical.
  EXPECT_EQ(format_csv(back), read_text(path));
  std::remove(path.c_str());
}

TEST(WriteCsv, Structure) {
  SweepResult r;
  r.rows = {{0.0, 1.0, 2.0}, {0.5, 0.25, 1.125}};
  r.transitions = {0.3};
  r.maxima = {{0.5, 0.25, 1.125, 1}};
  const std::string text = format_csv(r);
  EXPECT_EQ(text,
            "gamma_T,concurrence,mutual_information\n"
            "0,1,2\n"
            "0.5,0.25,1.125\n"
            "# transition,0.3\n"
            "# maximum,0.5,0.25,1.125\n");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
}

TEST(WriteCsv, IoErrorNamesThePath) {
  try {
    write_csv(SweepResult{}, "/nonexistent-dir/x.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
}

TEST(ReadCsv, RejectsMalformedInput) {
  EXPECT_THROW(parse_csv("wrong,header\n"), Error);
  EXPECT_THROW(parse_csv("gamma_T,concurrence,mutual_information\n0,1\n"), Error);
  EXPECT_THROW(parse_csv("gamma_T,concurrence,mutual_information\n0,1,x\n"), Error);
  EXPECT_THROW(parse_csv("gamma_T,concurrence,mutual_information\n1,1,1\n0,1,1\n"), Error);
  EXPECT_THROW(read_csv("/nonexistent-dir/x.csv"), Error);
}

TEST(Config, ParsesKeyValueText) {
  const auto entries = parse_config_text(
      "# drive sweep\n"
      "initial-state = \"(|10> - |01>)/sqrt(2)\"\n"
      "omega_ratio = 31.25   # drive\n"
      "\n"
      "gamma_t_max=4\n"
      "samples = 2000\n"
      "output = fig1.csv\n"
      "mode = qubit-sweep\n");
  SweepConfig config;
  apply_config(entries, config);
  EXPECT_EQ(config.initial_state, "(|10> - |01>)/sqrt(2)");
  EXPECT_EQ(config.omega_ratio, 31.25);
  EXPECT_EQ(config.gamma_t_max, 4.0);
  EXPECT_EQ(config.samples, 2000u);
  EXPECT_EQ(config.output_path, "fig1.csv");
  EXPECT_EQ(config.mode, SweepMode::qubit_sweep);
}

TEST(Config, Errors) {
  SweepConfig config;
  EXPECT_THROW(parse_config_text("no equals sign\n"), Error);
  EXPECT_THROW(apply_config(parse_config_text("colour = red\n"), config), Error);
  EXPECT_THROW(apply_config(parse_config_text("samples = 2.5\n"), config), Error);
  EXPECT_THROW(apply_config(parse_config_text("omega_ratio = fast\n"), config), Error);
  EXPECT_THROW(apply_config(parse_config_text("mode = other\n"), config), Error);
}

TEST(QutritScan, FragileCoherenceIsDestroyed) {
  SweepConfig config;
  config.mode = SweepMode::qutrit_criterion;
  config.initial_state = "(|1,1> + |-1,-1>)/sqrt(2)";
  const QutritScan scan = run_qutrit_scan(config);
  const ComplexMatrix& m = scan.stationary.matrix();
  EXPECT_LT(max_abs(m - ComplexMatrix(m.diagonal().asDiagonal())), 1e-15);
  EXPECT_FALSE(scan.report.sufficient_entangled);
}

TEST(QutritScan, SurvivingBlockCoherenceIsDetected) {
  SweepConfig config;
  config.mode = SweepMode::qutrit_criterion;
  config.initial_state = "(|1,0> + |0,1>)/sqrt(2)";
  const QutritScan scan = run_qutrit_scan(config);
  EXPECT_TRUE(scan.report.sufficient_entangled);
  // The 2x2 principal minor of the central PT block on |1,1>,|0,0>.
  const ComplexMatrix block = qutrit_pt_central_block(scan.stationary);
  EXPECT_NEAR((block(0, 0) * block(1, 1) - block(0, 1) * block(1, 0)).real(), -0.25, 1e-15);
  EXPECT_LT(scan.report.min_pt_eigenvalue, -kNptTolerance);
}

TEST(QutritScan, ProductStateIsNotFlagged) {
  SweepConfig config;
  config.mode = SweepMode::qutrit_criterion;
  config.initial_state = "|0,0>";
  EXPECT_FALSE(run_qutrit_scan(config).report.sufficient_entangled);
}

TEST(QutritScan, ReportFormat) {
  SweepConfig config;
  config.initial_state = "(|1,-1> + |0,0>)/sqrt(2)";
  const QutritScan scan = run_qutrit_scan(config);
  const std::string text = format_report(scan.report, config.initial_state);
  EXPECT_NE(text.find("ineq14 = true\n"), std::string::npos);
  EXPECT_NE(text.find("sufficient_entangled = true\n"), std::string::npos);
  const auto entries = parse_config_text(text);
  for (const char* key : {"xi", "zeta", "eta", "xi_squared_form", "cubic_has_negative_root",
                          "ineq14", "ineq15", "sufficient_entangled", "min_pt_eigenvalue"})
    EXPECT_EQ(entries.count(key), 1u) << key;
}

}  // namespace
}  // namespace dephasim
