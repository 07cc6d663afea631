#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "srrls/config.hpp"
#include "srrls/errors.hpp"
#include "srrls/harness.hpp"

using namespace srrls;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_case1(std::size_t runs = 3, std::size_t iterations = 400) {
  ExperimentConfig c = case1_defaults();
  c.order = 16;
  c.active = 2;
  c.active_after = 4;
  c.change_at = iterations / 2 + 1;
  c.iterations = iterations;
  c.runs = runs;
  c.threads = 1;
  return c;
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("srrls_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST(Nmsd, Definition) {
  Vector wo = (Vector(2) << 3, 4).finished();
  EXPECT_DOUBLE_EQ(nmsd(Vector::Zero(2), wo), 0.0);
  EXPECT_NEAR(nmsd(wo * 1.1, wo), 10.0 * std::log10(0.01), 1e-12);
  EXPECT_EQ(nmsd(wo, wo), kNmsdFloorDb);
  EXPECT_THROW(nmsd(wo, Vector::Zero(2)), ConfigError);
  EXPECT_EQ(ratio_to_db(1e-40), kNmsdFloorDb);
  EXPECT_DOUBLE_EQ(ratio_to_db(100.0), 20.0);
}

TEST(Nmsd, WindowMean) {
  std::vector<double> v{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(window_mean(v, 2, 4), 3.0);
  EXPECT_DOUBLE_EQ(window_mean(v, 5, 5), 5.0);
  EXPECT_THROW(window_mean(v, 0, 2), ParameterError);
  EXPECT_THROW(window_mean(v, 3, 6), ParameterError);
  EXPECT_THROW(window_mean(v, 4, 3), ParameterError);
}

TEST(CaseDefaults, FirstScenario) {
  ExperimentConfig c = case1_defaults();
  EXPECT_EQ(c.order, 64u);
  EXPECT_EQ(c.active, 4u);
  EXPECT_EQ(c.active_after, 8u);
  EXPECT_EQ(c.change_at, 1501u);
  EXPECT_EQ(c.iterations, 3000u);
  EXPECT_EQ(c.runs, 100u);
  EXPECT_EQ(c.noise, NoiseKind::kContaminatedGaussian);
  EXPECT_EQ(c.impulse_probability, 0.001);
  EXPECT_EQ(c.snr_db, 30.0);
  ASSERT_EQ(c.algorithms.size(), 7u);
  for (const AlgorithmSpec& s : c.algorithms) {
    EXPECT_EQ(s.lambda, 0.995);
    EXPECT_EQ(s.delta, 0.5);
    EXPECT_EQ(s.mu, 0.01);
    EXPECT_EQ(s.m_estimator.window, 9u);
    EXPECT_EQ(s.m_estimator.zeta, 0.99);
    EXPECT_EQ(s.m_estimator.vartheta, 2.576);
    EXPECT_EQ(s.vff.lambda_max, 0.99999);
    EXPECT_EQ(s.vff.chi, 0.96);
    EXPECT_EQ(s.vff.tau, 1.5);
    if (is_sparse(s.variant) && !has_adaptive_rho(s.variant)) EXPECT_GT(s.rho, 0.0);
  }
  EXPECT_NO_THROW(c.validate());
}

TEST(CaseDefaults, SecondScenario) {
  ExperimentConfig c = case2_defaults();
  EXPECT_EQ(c.order, 256u);
  EXPECT_EQ(c.system, SystemKind::kChannel);
  EXPECT_FALSE(c.change_at.has_value());
  EXPECT_EQ(c.noise, NoiseKind::kAlphaStable);
  EXPECT_EQ(c.alpha, 1.65);
  EXPECT_EQ(c.gamma, 0.02);
  ASSERT_EQ(c.algorithms.size(), 4u);
  for (const AlgorithmSpec& s : c.algorithms) {
    EXPECT_EQ(s.lambda, 0.977);
    EXPECT_EQ(s.m_estimator.window, 16u);
    EXPECT_EQ(s.mu, 0.001);
  }
  EXPECT_NO_THROW(c.validate());
}

TEST(CaseKindNames, Parse) {
  EXPECT_EQ(parse_case_kind("case1"), CaseKind::kCase1);
  EXPECT_EQ(parse_case_kind("2"), CaseKind::kCase2);
  EXPECT_EQ(parse_case_kind("custom"), CaseKind::kCustom);
  EXPECT_FALSE(parse_case_kind("3").has_value());
  EXPECT_EQ(parse_system_kind("channel"), SystemKind::kChannel);
  EXPECT_FALSE(parse_system_kind("dense").has_value());
}

TEST(ExperimentConfig, Validation) {
  ExperimentConfig c = small_case1();
  c.runs = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_case1();
  c.active = 17;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_case1();
  c.algorithms.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_case1();
  c.algorithms[0].label = "a,b";
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_case1();
  c.algorithms[1].label = "RLS";
  EXPECT_THROW(c.validate(), ConfigError);
  c = case2_defaults();
  c.change_at = 10;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_case1();
  c.change_at = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_case1();
  c.algorithms[0].mu = -1.0;
  EXPECT_THROW(c.validate(), std::exception);
}

TEST(Scenario, DeterministicPerRunAndDistinctAcrossRuns) {
  ExperimentConfig c = small_case1();
  Scenario a(c, 0), b(c, 0), other(c, 1);
  EXPECT_EQ(a.w_o(), b.w_o());
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    auto sa = a.next(), sb = b.next(), so = other.next();
    ASSERT_EQ(sa.x, sb.x);
    ASSERT_EQ(sa.d, sb.d);
    differs |= sa.x != so.x;
  }
  EXPECT_TRUE(differs);
}

TEST(Scenario, DesiredSignalIsSystemOutputPlusNoise) {
  ExperimentConfig c = small_case1(1, 400);
  Scenario s(c, 2);
  Regressor reg(c.order);
  for (std::size_t k = 1; k <= c.iterations; ++k) {
    auto smp = s.next();
    reg.push(smp.x);
    ASSERT_EQ(s.time(), k);
    ASSERT_NEAR(smp.d - smp.noise, reg.values().dot(s.w_o()), 1e-12);
  }
}

TEST(Scenario, AbruptChangeAtConfiguredIteration) {
  ExperimentConfig c = small_case1(1, 400);
  Scenario s(c, 0);
  Vector before = s.w_o();
  for (std::size_t k = 1; k < *c.change_at; ++k) s.next();
  EXPECT_EQ(s.w_o(), before);
  s.next();
  EXPECT_NE(s.w_o(), before);
  std::size_t nz = 0;
  for (double v : s.w_o()) nz += v != 0.0;
  EXPECT_EQ(nz, c.active_after);
}

TEST(Scenario, NoiseLevelsFollowSnrAndImpulseRatio) {
  ExperimentConfig c = small_case1(1, 10);
  Scenario s(c, 0);
  const NoiseModel& m = s.noise_model();
  EXPECT_NEAR(m.sigma_g_sq, s.signal_power() * 1e-3, 1e-15);
  EXPECT_NEAR(m.sigma_eta_sq, s.signal_power() * 1000.0, 1e-9);
  EXPECT_EQ(m.p, 0.001);
  ExperimentConfig c2 = case2_defaults();
  Scenario s2(c2, 0);
  EXPECT_EQ(s2.noise_model().kind, NoiseKind::kAlphaStable);
  EXPECT_EQ(s2.w_o(), synthetic_echo_channel(256));
}

TEST(RunExperiment, FirstIterationIsNearZeroDb) {
  ExperimentConfig c = small_case1(1, 1);
  c.algorithms = {default_algorithm(CaseKind::kCase1, Variant::kRls)};
  ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.curves.size(), 1u);
  ASSERT_EQ(r.curves[0].values.size(), 1u);
  EXPECT_NEAR(r.curves[0].values[0], 0.0, 3.0);
  EXPECT_LE(r.curves[0].values[0], 0.5);
}

TEST(RunExperiment, AveragesLinearRatiosThenConvertsToDb) {
  ExperimentConfig c = small_case1(4, 200);
  ExperimentResult r = run_experiment(c);
  EXPECT_EQ(r.runs_used, 4u);
  ASSERT_EQ(r.curves.size(), c.algorithms.size());
  std::vector<RunTrace> traces;
  for (std::size_t run = 0; run < 4; ++run) traces.push_back(run_single(c, run));
  for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
    EXPECT_EQ(r.curves[a].label, c.algorithms[a].display_label());
    for (std::size_t k = 0; k < c.iterations; k += 17) {
      double sum = 0;
      for (const RunTrace& t : traces) sum += t.ratio[a][k];
      EXPECT_DOUBLE_EQ(r.curves[a].values[k], ratio_to_db(sum / 4.0));
    }
  }
}

TEST(RunExperiment, ThreadCountDoesNotChangeResult) {
  ExperimentConfig c = small_case1(5, 150);
  ExperimentResult one = run_experiment(c);
  c.threads = 3;
  ExperimentResult three = run_experiment(c);
  for (std::size_t a = 0; a < one.curves.size(); ++a) {
    EXPECT_EQ(one.curves[a].values, three.curves[a].values);
  }
}

TEST(RunExperiment, ObserverSeesEveryStep) {
  ExperimentConfig c = small_case1(1, 50);
  std::size_t calls = 0;
  run_single(c, 0, [&](std::size_t alg, const StepDiagnostics&, const AdaptiveFilter& f,
                       const Scenario& s) {
    ++calls;
    EXPECT_EQ(f.state().k, s.time());
    EXPECT_LT(alg, c.algorithms.size());
  });
  EXPECT_EQ(calls, 50u * c.algorithms.size());
}

TEST(Outputs, CsvShapeAndRoundTrip) {
  ExperimentConfig c = small_case1(1, 10);
  c.algorithms = {default_algorithm(CaseKind::kCase1, Variant::kRlm),
                  default_algorithm(CaseKind::kCase1, Variant::kJoSRRls)};
  ExperimentResult r = run_experiment(c);
  r.curves[0].values[3] = 0.1 + 0.2;  // needs all 17 digits
  fs::path dir = fresh_dir("csv");
  emit_outputs(r.curves, c, dir);
  EXPECT_EQ(count_lines(dir / "nmsd.csv"), 11u);
  std::ifstream in(dir / "nmsd.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "iteration,RLM,JO-S-RRLS");
  auto back = read_nmsd_csv(dir / "nmsd.csv");
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_EQ(back[a].label, r.curves[a].label);
    EXPECT_EQ(back[a].values, r.curves[a].values);
  }
  EXPECT_TRUE(fs::exists(dir / "plot_nmsd.py"));
  ExperimentConfig resolved = load_config(dir / "config_resolved.cfg");
  EXPECT_EQ(format_config(resolved), format_config(c));
  fs::remove_all(dir);
}

TEST(Outputs, ReadRejectsMalformedCsv) {
  fs::path dir = fresh_dir("bad_csv");
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "a.csv");
    out << "iteration,X\n1,0.5,0.7\n";
  }
  EXPECT_THROW(read_nmsd_csv(dir / "a.csv"), ConfigError);
  {
    std::ofstream out(dir / "b.csv");
    out << "k,X\n1,0.5\n";
  }
  EXPECT_THROW(read_nmsd_csv(dir / "b.csv"), ConfigError);
  EXPECT_THROW(read_nmsd_csv(dir / "missing.csv"), ConfigError);
  fs::remove_all(dir);
}
