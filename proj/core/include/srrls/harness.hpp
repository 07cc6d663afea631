#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srrls/algorithms.hpp"
#include "srrls/signalgen.hpp"

namespace srrls {

enum class CaseKind { kCase1, kCase2, kCustom };
enum class SystemKind { kSparse, kChannel };

std::string_view to_string(CaseKind kind);
std::optional<CaseKind> parse_case_kind(std::string_view name);
std::string_view to_string(SystemKind kind);
std::optional<SystemKind> parse_system_kind(std::string_view name);

struct ExperimentConfig {
  CaseKind case_kind = CaseKind::kCustom;
  SystemKind system = SystemKind::kSparse;
  std::size_t order = 64;                  // M
  std::size_t active = 4;                  // Q before the change
  std::size_t active_after = 8;            // Q after the change
  std::optional<std::size_t> change_at;    // 1-based iteration of the abrupt change
  std::size_t iterations = 3000;
  std::size_t runs = 100;

  NoiseKind noise = NoiseKind::kContaminatedGaussian;
  double snr_db = 30.0;                    // background Gaussian level
  double impulse_probability = 0.001;
  double impulse_power_ratio = 1000.0;     // sigma_eta^2 / E{(x'w_o)^2}
  double alpha = 1.65;
  double gamma = 0.02;
  std::string channel;                     // empty: synthetic echo channel

  std::uint64_t seed = 1;
  std::size_t threads = 0;                 // 0: hardware concurrency
  std::string output_dir = "out";
  std::vector<AlgorithmSpec> algorithms;

  void validate() const;
};

/// Fig.-1-style scenario: M = 64, Q 4 -> 8 at k = 1501, contaminated
/// Gaussian noise at 30 dB SNR with p = 0.001.
ExperimentConfig case1_defaults();

/// Echo-channel scenario: M = 256, symmetric alpha-stable noise.
ExperimentConfig case2_defaults();

ExperimentConfig defaults_for(CaseKind kind);

/// Parameters a given scenario uses for `variant` unless overridden.
AlgorithmSpec default_algorithm(CaseKind kind, Variant variant);

inline constexpr double kNmsdFloorDb = -300.0;

/// 10 log10(||w - w_o||^2 / ||w_o||^2), floored at -300 dB.
/// Throws ConfigError for a zero ground truth.
double nmsd(const Vector& w, const Vector& w_o);

/// Linear ratio ||w - w_o||^2 / ||w_o||^2.
double deviation_ratio(const Vector& w, const Vector& w_o);

/// dB of a linear ratio with the -300 dB floor.
double ratio_to_db(double ratio);

/// Input, ground truth and noise for one Monte-Carlo run.
class Scenario {
 public:
  struct Sample {
    double x = 0.0;
    double d = 0.0;
    double noise = 0.0;
    bool impulse = false;
  };

  Scenario(const ExperimentConfig& config, std::size_t run_index);
  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;

  /// Advances time by one sample (k is 1-based after the call).
  Sample next();

  const Vector& w_o() const { return current_->w_o; }
  std::size_t time() const { return k_; }
  double signal_power() const { return signal_power_; }
  const NoiseModel& noise_model() const { return noise_.model(); }

 private:
  const ExperimentConfig& config_;
  std::uint64_t run_seed_;
  SparseSystem before_;
  std::optional<SparseSystem> after_;
  const SparseSystem* current_;
  double signal_power_ = 0.0;
  Ar2Source input_;
  Regressor regressor_;
  NoiseSource noise_;
  std::size_t k_ = 0;
};

/// Observer invoked after every filter step of run_single.
using StepObserver = std::function<void(std::size_t algorithm, const StepDiagnostics& diag,
                                        const AdaptiveFilter& filter, const Scenario& scenario)>;

/// Per-algorithm, per-iteration deviation ratios of one run.
struct RunTrace {
  std::vector<std::vector<double>> ratio;
};

/// Runs every configured algorithm over one shared stream.
/// Throws NumericalError naming the algorithm and iteration on a non-finite state.
RunTrace run_single(const ExperimentConfig& config, std::size_t run_index,
                    const StepObserver& observer = {});

struct NmsdCurve {
  std::string label;
  std::vector<double> values;  // dB, one per iteration
};

struct ExperimentResult {
  std::vector<NmsdCurve> curves;
  std::size_t runs_used = 0;
  std::vector<std::string> discarded;  // one message per dropped run
};

/// Monte-Carlo ensemble: ratios are averaged over runs in run-index order
/// and converted to dB afterwards.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes nmsd.csv, config_resolved.cfg and plot_nmsd.py into `dir`.
void emit_outputs(const std::vector<NmsdCurve>& curves, const ExperimentConfig& config,
                  const std::filesystem::path& dir);

/// Reads back a CSV written by emit_outputs.
std::vector<NmsdCurve> read_nmsd_csv(const std::filesystem::path& path);

/// Mean of values[first-1 .. last-1] (1-based, inclusive).
double window_mean(const std::vector<double>& values, std::size_t first, std::size_t last);

}  // namespace srrls
