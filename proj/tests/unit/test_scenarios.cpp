// Empirical checks on full-size scenario streams.
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "srrls/harness.hpp"

using namespace srrls;

namespace {

ExperimentConfig case1_with(std::initializer_list<Variant> variants) {
  ExperimentConfig c = case1_defaults();
  c.algorithms.clear();
  for (Variant v : variants) c.algorithms.push_back(default_algorithm(CaseKind::kCase1, v));
  return c;
}

}  // namespace

TEST(Scenario1, NoiseVarianceEstimateNearTruth) {
  ExperimentConfig c = case1_with({Variant::kJoSRRls});
  c.iterations = 1500;
  for (std::size_t run = 0; run < 10; ++run) {
    double acc = 0.0, truth = 0.0;
    std::size_t n = 0;
    run_single(c, run, [&](std::size_t, const StepDiagnostics&, const AdaptiveFilter& f,
                           const Scenario& s) {
      truth = s.noise_model().sigma_g_sq;
      if (s.time() >= 1300) {
        acc += f.vff()->noise_variance();
        ++n;
      }
    });
    const double est = acc / static_cast<double>(n);
    EXPECT_GT(est, truth / 2.0) << run;
    EXPECT_LT(est, truth * 2.0) << run;
  }
}

TEST(Scenario1, ForgettingFactorDropsAfterChange) {
  ExperimentConfig c = case1_with({Variant::kJoSRRls});
  c.iterations = 1600;
  const std::size_t runs = 20;
  std::size_t dropped = 0;
  for (std::size_t run = 0; run < runs; ++run) {
    bool hit = false;
    run_single(c, run, [&](std::size_t, const StepDiagnostics& d, const AdaptiveFilter&,
                           const Scenario& s) {
      if (s.time() >= 1501 && s.time() <= 1550 && d.lambda_used < 0.9) hit = true;
    });
    dropped += hit;
  }
  EXPECT_GE(dropped, runs * 9 / 10) << dropped << "/" << runs;
}

TEST(Scenario1, ResetFiresSoonAfterChange) {
  ExperimentConfig c = case1_with({Variant::kSRRlsOptRs});
  c.iterations = 1700;
  const std::size_t runs = 20;
  std::size_t detected = 0;
  for (std::size_t run = 0; run < runs; ++run) {
    bool hit = false;
    run_single(c, run, [&](std::size_t, const StepDiagnostics& d, const AdaptiveFilter&,
                           const Scenario& s) {
      if (d.reset_fired && s.time() >= 1501 && s.time() <= 1600) hit = true;
    });
    detected += hit;
  }
  EXPECT_GE(detected * 10, runs * 9) << detected << "/" << runs;
}

TEST(Scenario1, ResetRareWithoutChange) {
  ExperimentConfig c = case1_with({Variant::kSRRlsOptRs});
  c.change_at.reset();
  std::size_t fired = 0, steps = 0;
  for (std::size_t run = 0; run < 10; ++run) {
    run_single(c, run, [&](std::size_t, const StepDiagnostics& d, const AdaptiveFilter&,
                           const Scenario&) {
      fired += d.reset_fired;
      ++steps;
    });
  }
  EXPECT_LT(static_cast<double>(fired), 0.01 * static_cast<double>(steps)) << fired << "/" << steps;
}

const ExperimentResult& reference_ensemble() {
  static const ExperimentResult r =
      run_experiment(case1_with({Variant::kRlm, Variant::kSRRlsOpt, Variant::kJoSRRls}));
  return r;
}

TEST(Scenario1, SteadyStateOrdering) {
  const ExperimentResult& r = reference_ensemble();
  ASSERT_EQ(r.runs_used, 100u);
  const double rlm = window_mean(r.curves[0].values, 1300, 1500);
  const double opt = window_mean(r.curves[1].values, 1300, 1500);
  const double jo = window_mean(r.curves[2].values, 1300, 1500);
  EXPECT_LE(jo + 1.0, opt);
  EXPECT_LE(opt + 1.0, rlm);
}

TEST(Scenario1, JointlyOptimisedFinalLevel) {
  const ExperimentResult& r = reference_ensemble();
  EXPECT_LT(r.curves[2].values.back(), -25.0);
}
