#include "srrls/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srrls/errors.hpp"

namespace srrls {

double m_estimate_weight(double e, double xi) { return std::abs(e) <= xi ? 1.0 : 0.0; }

double median(std::span<const double> values) {
  if (values.empty()) throw ParameterError("median of an empty sequence");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

void RobustScaleParams::validate() const {
  if (window < 2) throw ParameterError("M-estimator window N_w must be at least 2");
  if (!(zeta >= 0.0 && zeta < 1.0)) throw ParameterError("zeta must lie in [0, 1)");
  if (!(vartheta > 0.0)) throw ParameterError("vartheta must be positive");
}

RobustScaleState::RobustScaleState(RobustScaleParams params)
    : params_(params),
      c_sigma_(0.0) {
  params_.validate();
  c_sigma_ = 1.483 * (1.0 + 5.0 / static_cast<double>(params_.window - 1));
  ring_.assign(params_.window, 0.0);
  scratch_.reserve(params_.window);
}

double RobustScaleState::update_threshold(double e) {
  ring_[head_] = e * e;
  head_ = (head_ + 1) % ring_.size();
  filled_ = std::min(filled_ + 1, ring_.size());

  scratch_.assign(ring_.begin(), ring_.begin() + static_cast<std::ptrdiff_t>(filled_));
  const double med = median(scratch_);
  const double zeta = k_ == 0 ? 0.0 : params_.zeta;
  sigma_eps_sq_ = zeta * sigma_eps_sq_ + c_sigma_ * (1.0 - zeta) * med;
  sigma_eps_sq_ = std::max(sigma_eps_sq_, kScaleFloor);
  ++k_;
  return threshold();
}

double RobustScaleState::threshold() const {
  return params_.vartheta * std::sqrt(std::max(sigma_eps_sq_, kScaleFloor));
}

std::vector<double> RobustScaleState::window() const {
  // Newest first.
  std::vector<double> out;
  out.reserve(filled_);
  for (std::size_t i = 0; i < filled_; ++i) {
    out.push_back(ring_[(head_ + ring_.size() - 1 - i) % ring_.size()]);
  }
  return out;
}

void ResetDetectorParams::validate() const {
  if (!(t > 0.0 && t < 1.0)) throw ParameterError("reset smoothing t must lie in (0, 1)");
  if (!(threshold > 0.0)) throw ParameterError("reset threshold must be positive");
  if (!(log_base > 1.0)) throw ParameterError("reset log base must exceed 1");
}

ResetDetectorState::ResetDetectorState(ResetDetectorParams params) : params_(params) {
  params_.validate();
}

bool ResetDetectorState::check(double q, double e) {
  const double energy = q * q * e * e;
  if (!primed_) {
    if (energy > 0.0) {
      e_avr_sq_ = std::max(energy, kEnergyFloor);
      primed_ = true;
    }
    return false;
  }
  bool fired = false;
  if (energy > 0.0) {
    fired = std::log(energy / e_avr_sq_) / std::log(params_.log_base) > params_.threshold;
  }
  e_avr_sq_ = params_.t * e_avr_sq_ + (1.0 - params_.t) * energy;
  e_avr_sq_ = std::max(e_avr_sq_, kEnergyFloor);
  return fired;
}

}  // namespace srrls
