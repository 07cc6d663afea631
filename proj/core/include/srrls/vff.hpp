#pragma once

namespace srrls {

struct VffParams {
  double chi = 0.96;          // power-estimate smoothing
  double tau = 1.5;           // convergence-state factor
  double lambda_max = 0.99999;
  double kappa = 1e-6;
  double lambda_min = 0.5;    // stability floor for the forgetting factor

  void validate() const;
};

/// Variable forgetting factor driven by recursive power estimates of the
/// robust-weighted error, theta, the weighted desired signal and the filter
/// output.
class VffState {
 public:
  explicit VffState(VffParams params = {});

  /// One recursion of the four power estimates; y is x'w_{k-1}.
  void update_powers(double q, double e, double theta, double d, double y);

  /// Background noise variance s_d s_e / (s_e + s_y), 0 when the
  /// denominator is below 1e-20.
  double noise_variance() const;

  /// lambda_max while s_e < tau s_v, otherwise
  /// clamp(sqrt(s_theta) sqrt(s_v) / (|sqrt(s_e) - sqrt(s_v)| + kappa)).
  double forgetting_factor() const;

  double sigma_e_sq() const { return sigma_e_sq_; }
  double sigma_theta_sq() const { return sigma_theta_sq_; }
  double sigma_d_sq() const { return sigma_d_sq_; }
  double sigma_y_sq() const { return sigma_y_sq_; }
  const VffParams& params() const { return params_; }

  void set_powers(double sigma_e_sq, double sigma_theta_sq, double sigma_d_sq,
                  double sigma_y_sq);

 private:
  VffParams params_;
  double sigma_e_sq_ = 0.0;
  double sigma_theta_sq_ = 0.0;
  double sigma_d_sq_ = 0.0;
  double sigma_y_sq_ = 0.0;
};

}  // namespace srrls
