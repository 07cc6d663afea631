#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace srrls {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Adaptive-filter memory: coefficients, inverse correlation matrix and the
/// number of samples processed so far.
struct FilterState {
  Vector w;
  Matrix P;
  std::size_t k = 0;

  std::size_t order() const { return static_cast<std::size_t>(w.size()); }
};

/// Tapped delay line holding [x_k, x_{k-1}, ..., x_{k-M+1}], newest first.
class Regressor {
 public:
  explicit Regressor(std::size_t order);

  void push(double sample);
  void clear();

  const Vector& values() const { return buffer_; }
  std::size_t order() const { return static_cast<std::size_t>(buffer_.size()); }

 private:
  Vector buffer_;
};

/// Per-sample quantities reported by AdaptiveFilter::step.
struct StepDiagnostics {
  double e = 0.0;            // a priori error d - x'w_{k-1}
  double xi_err = 0.0;       // intermediate error d - x'psi_k
  double q = 1.0;            // robust weight
  double theta = 0.0;        // q * x'P_{k-1}x
  double lambda_used = 1.0;
  double rho_used = 0.0;
  bool reset_fired = false;
  bool covariance_clamped = false;
};

struct GainResult {
  Vector K;
  double theta = 0.0;
  double scale = 0.0;  // K = scale * P x
};

/// w = 0, P = I/delta, k = 0. Throws ParameterError for order 0 or delta <= 0.
FilterState init_state(std::size_t order, double delta);

/// d - x'w.
double a_priori_error(const FilterState& state, const Vector& x, double d);

/// K = q P x / (lambda + q x'Px), theta = q x'Px.
GainResult kalman_gain(const Matrix& P, const Vector& x, double q, double lambda);

/// Same as kalman_gain with the product P x already available.
GainResult kalman_gain_from_projection(const Vector& Px, const Vector& x, double q,
                                       double lambda);

/// (P - K x'P) / lambda, symmetrized as (A + A') / 2.
Matrix update_covariance(const Matrix& P, const Vector& K, const Vector& x, double lambda);

/// In-place form of update_covariance for symmetric P, with K = gain_scale * Px
/// (gain_scale = q / (lambda + theta)). Keeps P exactly symmetric.
void update_covariance_in_place(Matrix& P, double gain_scale, const Vector& Px, double lambda);

/// psi = w + K e.
Vector half_update(const Vector& w, const Vector& K, double e);

/// psi - rho P grad.
Vector sparsity_correction(const Vector& psi, const Matrix& P, double rho, const Vector& grad);

/// Replaces P by (P + P') / 2. The result is exactly symmetric.
void symmetrize(Matrix& P);

/// Rescales P so that its largest diagonal entry does not exceed `ceiling`.
/// Returns true when a rescale happened.
bool clamp_covariance(Matrix& P, double ceiling);

}  // namespace srrls
