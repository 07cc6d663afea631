#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace srrls {

/// Modified M-estimator weight: 1 when |e| <= xi, 0 otherwise.
double m_estimate_weight(double e, double xi);

/// Sample median; the mean of the two central order statistics for even
/// sizes. Throws ParameterError on empty input.
double median(std::span<const double> values);

struct RobustScaleParams {
  std::size_t window = 9;   // N_w
  double zeta = 0.99;       // exponential weighting of the scale estimate
  double vartheta = 2.576;  // threshold multiplier

  void validate() const;
};

/// Median-window scale estimator producing the M-estimator threshold xi.
///
/// The window holds the last N_w squared a priori errors. The scale follows
///   s_k = zeta s_{k-1} + c (1 - zeta) med(window),  c = 1.483 (1 + 5 / (N_w - 1)),
/// with zeta replaced by 0 on the first sample, and xi = vartheta sqrt(s_k).
/// Until N_w samples have been seen the median runs over the partial window.
class RobustScaleState {
 public:
  static constexpr double kScaleFloor = 1e-12;

  explicit RobustScaleState(RobustScaleParams params = {});

  /// Pushes e^2, updates the scale and returns the new threshold.
  double update_threshold(double e);

  double sigma_eps_sq() const { return sigma_eps_sq_; }
  double threshold() const;
  double c_sigma() const { return c_sigma_; }
  std::size_t samples_seen() const { return k_; }
  std::vector<double> window() const;
  const RobustScaleParams& params() const { return params_; }

 private:
  RobustScaleParams params_;
  double c_sigma_;
  std::vector<double> ring_;
  std::size_t head_ = 0;
  std::size_t filled_ = 0;
  double sigma_eps_sq_ = 0.0;
  std::size_t k_ = 0;
  mutable std::vector<double> scratch_;
};

struct ResetDetectorParams {
  double t = 0.98;          // smoothing of the error-energy average
  double threshold = 1.5;   // log-ratio trigger
  double log_base = 10.0;

  void validate() const;
};

/// Abrupt-change detector: fires when log(q^2 e^2 / e_avr^2) exceeds the
/// threshold, comparing against the average before it absorbs the sample.
class ResetDetectorState {
 public:
  static constexpr double kEnergyFloor = 1e-12;

  explicit ResetDetectorState(ResetDetectorParams params = {});

  bool check(double q, double e);

  double e_avr_sq() const { return e_avr_sq_; }
  bool primed() const { return primed_; }
  const ResetDetectorParams& params() const { return params_; }

 private:
  ResetDetectorParams params_;
  double e_avr_sq_ = kEnergyFloor;
  bool primed_ = false;
};

}  // namespace srrls
