#include "srrls/signalgen.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "srrls/errors.hpp"

namespace srrls {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

double Ar2Process::advance(double innovation) {
  const double x = kA1 * x1 + kA2 * x2 + innovation;
  x2 = x1;
  x1 = x;
  return x;
}

Ar2Source::Ar2Source(std::uint64_t seed) : rng_(seed) {}

double Ar2Source::next() { return process_.advance(innovation_(rng_)); }

SparseSystem make_sparse_system(std::size_t order, std::size_t active, Rng& rng) {
  if (order == 0) throw ParameterError("system order must be at least 1");
  if (active == 0 || active > order) {
    throw ParameterError("active tap count must lie in [1, M], got " + std::to_string(active));
  }
  std::vector<std::size_t> positions(order);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `active` entries form a uniform subset.
  for (std::size_t i = 0; i < active; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order - 1);
    std::swap(positions[i], positions[pick(rng)]);
  }
  positions.resize(active);
  std::sort(positions.begin(), positions.end());

  SparseSystem sys;
  sys.w_o = Vector::Zero(static_cast<Eigen::Index>(order));
  sys.active = active;
  sys.support = positions;
  // Variance 1/sqrt(Q), i.e. standard deviation Q^(-1/4).
  std::normal_distribution<double> tap(0.0, std::pow(static_cast<double>(active), -0.25));
  for (std::size_t idx : positions) {
    double v = 0.0;
    while (v == 0.0) v = tap(rng);
    sys.w_o[static_cast<Eigen::Index>(idx)] = v;
  }
  return sys;
}

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kGaussian:
      return "gaussian";
    case NoiseKind::kContaminatedGaussian:
      return "contaminated-gaussian";
    case NoiseKind::kAlphaStable:
      return "alpha-stable";
  }
  return "?";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view name) {
  for (NoiseKind k : {NoiseKind::kGaussian, NoiseKind::kContaminatedGaussian,
                      NoiseKind::kAlphaStable}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

void NoiseModel::validate() const {
  switch (kind) {
    case NoiseKind::kContaminatedGaussian:
      if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("impulse probability must lie in [0, 1]");
      if (!(sigma_eta_sq >= 0.0)) throw ParameterError("impulse variance must be nonnegative");
      [[fallthrough]];
    case NoiseKind::kGaussian:
      if (!(sigma_g_sq >= 0.0)) throw ParameterError("Gaussian noise variance must be nonnegative");
      break;
    case NoiseKind::kAlphaStable:
      if (!(alpha > 0.0 && alpha <= 2.0)) throw ParameterError("alpha must lie in (0, 2]");
      if (!(gamma > 0.0)) throw ParameterError("gamma must be positive");
      break;
  }
}

double gaussian_noise_next(double variance, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return std::sqrt(variance) * n(rng);
}

CgSample cg_noise_next(const NoiseModel& model, Rng& background, Rng& impulse) {
  CgSample out;
  out.value = gaussian_noise_next(model.sigma_g_sq, background);
  std::bernoulli_distribution gate(model.p);
  out.impulse = gate(impulse);
  if (out.impulse) out.value += gaussian_noise_next(model.sigma_eta_sq, impulse);
  return out;
}

double alpha_stable_next(double alpha, double gamma, Rng& rng) {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  std::uniform_real_distribution<double> angle(-kHalfPi, kHalfPi);
  std::exponential_distribution<double> expo(1.0);
  double v = angle(rng);
  while (v <= -kHalfPi) v = angle(rng);
  const double w = expo(rng);
  const double scale = std::pow(gamma, 1.0 / alpha);

  if (alpha == 1.0) return scale * std::tan(v);
  const double a = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
  const double b = std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return scale * a * b;
}

NoiseSource::NoiseSource(NoiseModel model, std::uint64_t seed)
    : model_(model), background_(mix_seed(seed, 0)), impulse_(mix_seed(seed, 1)) {
  model_.validate();
}

double NoiseSource::next() {
  last_impulse_ = false;
  switch (model_.kind) {
    case NoiseKind::kGaussian:
      return gaussian_noise_next(model_.sigma_g_sq, background_);
    case NoiseKind::kContaminatedGaussian: {
      const CgSample s = cg_noise_next(model_, background_, impulse_);
      last_impulse_ = s.impulse;
      return s.value;
    }
    case NoiseKind::kAlphaStable:
      return alpha_stable_next(model_.alpha, model_.gamma, background_);
  }
  return 0.0;
}

double ar2_output_power(const Vector& w_o, std::uint64_t pilot_seed, std::size_t samples) {
  Ar2Source pilot(pilot_seed);
  return estimate_output_power(w_o, [&] { return pilot.next(); }, samples);
}

double snr_to_sigma_g(double signal_power, double snr_db) {
  if (!(signal_power > 0.0)) throw ParameterError("SNR is undefined for a zero-power system output");
  return signal_power / std::pow(10.0, snr_db / 10.0);
}

Vector load_channel(const std::filesystem::path& path, std::optional<std::size_t> expected_order) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open channel file " + path.string());
  std::vector<double> taps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string_view token(line.data() + first, last - first + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected one real coefficient, got '" + std::string(token) + "'");
    }
    taps.push_back(v);
  }
  if (taps.empty()) throw ConfigError(path.string() + ": channel file has no coefficients");
  if (expected_order && taps.size() != *expected_order) {
    throw ConfigError(path.string() + ": channel has " + std::to_string(taps.size()) +
                      " taps but M = " + std::to_string(*expected_order));
  }
  return Eigen::Map<const Vector>(taps.data(), static_cast<Eigen::Index>(taps.size()));
}

void save_channel(const std::filesystem::path& path, const Vector& taps) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write channel file " + path.string());
  out << "# " << taps.size() << " taps\n";
  std::array<char, 64> buf{};
  for (Eigen::Index i = 0; i < taps.size(); ++i) {
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), taps[i]);
    out.write(buf.data(), ptr - buf.data());
    out << '\n';
  }
  if (!out) throw ConfigError("failed writing channel file " + path.string());
}

Vector synthetic_echo_channel(std::size_t order) {
  if (order == 0) throw ParameterError("channel order must be at least 1");
  Vector h = Vector::Zero(static_cast<Eigen::Index>(order));
  // Bulk delay of M/8 taps, then a 3M/16-tap decaying oscillation.
  const std::size_t delay = order / 8;
  const std::size_t span = std::max<std::size_t>(1, 3 * order / 16);
  for (std::size_t n = 0; n < span && delay + n < order; ++n) {
    const double t = static_cast<double>(n);
    const double envelope = std::exp(-t / (static_cast<double>(span) / 5.0));
    h[static_cast<Eigen::Index>(delay + n)] =
        0.8 * envelope * std::cos(2.0 * std::numbers::pi * 0.11 * t + 0.3) +
        0.15 * envelope * std::sin(2.0 * std::numbers::pi * 0.31 * t);
  }
  return h;
}

}  // namespace srrls
