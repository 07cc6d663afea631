#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "srrls/filter_core.hpp"

namespace srrls {

using Rng = std::mt19937_64;

/// Counter-based seed mixing (splitmix64 finaliser over seed and stream id).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// x_k = 0.4 x_{k-1} - 0.4 x_{k-2} + nu_k.
struct Ar2Process {
  static constexpr double kA1 = 0.4;
  static constexpr double kA2 = -0.4;

  double x1 = 0.0;
  double x2 = 0.0;

  double advance(double innovation);
};

/// AR(2) process driven by unit-variance Gaussian innovations.
class Ar2Source {
 public:
  explicit Ar2Source(std::uint64_t seed);

  double next();
  const Ar2Process& process() const { return process_; }

 private:
  Rng rng_;
  std::normal_distribution<double> innovation_{0.0, 1.0};
  Ar2Process process_;
};

struct SparseSystem {
  Vector w_o;
  std::size_t active = 0;          // Q
  std::vector<std::size_t> support;
};

/// Q taps at positions drawn uniformly without replacement, each N(0, 1/sqrt(Q)).
SparseSystem make_sparse_system(std::size_t order, std::size_t active, Rng& rng);

enum class NoiseKind { kGaussian, kContaminatedGaussian, kAlphaStable };

std::string_view to_string(NoiseKind kind);
std::optional<NoiseKind> parse_noise_kind(std::string_view name);

struct NoiseModel {
  NoiseKind kind = NoiseKind::kGaussian;
  double sigma_g_sq = 0.0;    // background Gaussian variance
  double p = 0.0;             // impulse probability
  double sigma_eta_sq = 0.0;  // impulse variance
  double alpha = 2.0;
  double gamma = 1.0;

  void validate() const;
};

struct CgSample {
  double value = 0.0;
  bool impulse = false;
};

double gaussian_noise_next(double variance, Rng& rng);

/// g + b eta with g ~ N(0, sigma_g^2), b ~ Bernoulli(p), eta ~ N(0, sigma_eta^2).
/// The background draw uses `background` only, so p = 0 reproduces
/// gaussian_noise_next sample for sample.
CgSample cg_noise_next(const NoiseModel& model, Rng& background, Rng& impulse);

/// Symmetric alpha-stable draw with characteristic function exp(-gamma |t|^alpha)
/// (Chambers-Mallows-Stuck, scale gamma^(1/alpha)).
double alpha_stable_next(double alpha, double gamma, Rng& rng);

/// Noise stream owning its random sources.
class NoiseSource {
 public:
  NoiseSource(NoiseModel model, std::uint64_t seed);

  double next();
  bool last_was_impulse() const { return last_impulse_; }
  const NoiseModel& model() const { return model_; }

 private:
  NoiseModel model_;
  Rng background_;
  Rng impulse_;
  bool last_impulse_ = false;
};

/// Mean of (x'w)^2 over `samples` outputs of an input generator fed
/// through a tapped delay line of length w.size().
template <typename InputGen>
double estimate_output_power(const Vector& w, InputGen&& next_input, std::size_t samples) {
  Regressor x(static_cast<std::size_t>(w.size()));
  double acc = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    x.push(next_input());
    const double y = x.values().dot(w);
    acc += y * y;
  }
  return samples == 0 ? 0.0 : acc / static_cast<double>(samples);
}

/// E{(x'w_o)^2} estimated over a 1e5-sample AR(2) pilot stream.
double ar2_output_power(const Vector& w_o, std::uint64_t pilot_seed,
                        std::size_t samples = 100000);

/// signal_power / 10^(snr_db / 10). Throws ParameterError when signal_power <= 0.
double snr_to_sigma_g(double signal_power, double snr_db);

/// Plain-text channel: one coefficient per line, '#' comments and blank
/// lines ignored. Throws ConfigError with the offending line number.
Vector load_channel(const std::filesystem::path& path,
                    std::optional<std::size_t> expected_order = std::nullopt);

/// Writes coefficients with round-trip precision.
void save_channel(const std::filesystem::path& path, const Vector& taps);

/// Deterministic 256-tap-style sparse echo-like response: a pure delay
/// followed by a short decaying oscillation. A stand-in for a measured
/// hybrid echo path.
Vector synthetic_echo_channel(std::size_t order = 256);

}  // namespace srrls
