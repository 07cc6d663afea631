#include "srrls/vff.hpp"

#include <algorithm>
#include <cmath>

#include "srrls/errors.hpp"

namespace srrls {

void VffParams::validate() const {
  if (!(chi >= 0.0 && chi < 1.0)) throw ParameterError("chi must lie in [0, 1)");
  if (!(tau >= 1.0)) throw ParameterError("tau must be at least 1");
  if (!(lambda_max > 0.0 && lambda_max <= 1.0)) throw ParameterError("lambda_max must lie in (0, 1]");
  if (!(lambda_min > 0.0 && lambda_min < lambda_max)) {
    throw ParameterError("lambda_min must lie in (0, lambda_max)");
  }
  if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
}

VffState::VffState(VffParams params) : params_(params) { params_.validate(); }

void VffState::update_powers(double q, double e, double theta, double d, double y) {
  const double chi = params_.chi;
  const double q2 = q * q;
  sigma_e_sq_ = chi * sigma_e_sq_ + (1.0 - chi) * q2 * e * e;
  sigma_theta_sq_ = chi * sigma_theta_sq_ + (1.0 - chi) * theta * theta;
  sigma_d_sq_ = chi * sigma_d_sq_ + (1.0 - chi) * q2 * d * d;
  sigma_y_sq_ = chi * sigma_y_sq_ + (1.0 - chi) * y * y;
}

void VffState::set_powers(double sigma_e_sq, double sigma_theta_sq, double sigma_d_sq,
                          double sigma_y_sq) {
  if (!(sigma_e_sq >= 0.0 && sigma_theta_sq >= 0.0 && sigma_d_sq >= 0.0 && sigma_y_sq >= 0.0)) {
    throw ParameterError("power estimates must be nonnegative");
  }
  sigma_e_sq_ = sigma_e_sq;
  sigma_theta_sq_ = sigma_theta_sq;
  sigma_d_sq_ = sigma_d_sq;
  sigma_y_sq_ = sigma_y_sq;
}

double VffState::noise_variance() const {
  const double denom = sigma_e_sq_ + sigma_y_sq_;
  if (!(denom >= 1e-20)) return 0.0;
  return sigma_d_sq_ * sigma_e_sq_ / denom;
}

double VffState::forgetting_factor() const {
  const double sv_sq = noise_variance();
  if (sigma_e_sq_ < params_.tau * sv_sq) return params_.lambda_max;

  const double sv = std::sqrt(sv_sq);
  const double se = std::sqrt(sigma_e_sq_);
  const double st = std::sqrt(sigma_theta_sq_);
  const double lambda = st * sv / (std::abs(se - sv) + params_.kappa);
  if (!std::isfinite(lambda)) return params_.lambda_max;
  return std::clamp(lambda, params_.lambda_min, params_.lambda_max);
}

}  // namespace srrls
