#include "srrls/filter_core.hpp"

#include <cmath>
#include <string>

#include "srrls/errors.hpp"

namespace srrls {

Regressor::Regressor(std::size_t order) : buffer_(Vector::Zero(static_cast<Eigen::Index>(order))) {}

void Regressor::push(double sample) {
  const Eigen::Index n = buffer_.size();
  if (n == 0) return;
  for (Eigen::Index i = n - 1; i > 0; --i) buffer_[i] = buffer_[i - 1];
  buffer_[0] = sample;
}

void Regressor::clear() { buffer_.setZero(); }

FilterState init_state(std::size_t order, double delta) {
  if (order == 0) throw ParameterError("filter order must be at least 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ParameterError("regularization delta must be positive, got " + std::to_string(delta));
  }
  const auto n = static_cast<Eigen::Index>(order);
  FilterState state;
  state.w = Vector::Zero(n);
  state.P = Matrix::Identity(n, n) / delta;
  state.k = 0;
  return state;
}

double a_priori_error(const FilterState& state, const Vector& x, double d) {
  if (x.size() != state.w.size()) throw ParameterError("regressor and weight sizes differ");
  return d - x.dot(state.w);
}

GainResult kalman_gain_from_projection(const Vector& Px, const Vector& x, double q,
                                       double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw ParameterError("forgetting factor must lie in (0, 1], got " + std::to_string(lambda));
  }
  if (!(q >= 0.0)) throw ParameterError("robust weight must be nonnegative");
  if (Px.size() != x.size()) throw ParameterError("P x and x sizes differ");

  GainResult out;
  if (q == 0.0) {
    out.K = Vector::Zero(x.size());
    out.theta = 0.0;
    return out;
  }
  out.theta = q * x.dot(Px);
  const double denom = lambda + out.theta;
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw NumericalError("degenerate gain denominator lambda + theta = " + std::to_string(denom));
  }
  out.scale = q / denom;
  out.K = out.scale * Px;
  return out;
}

GainResult kalman_gain(const Matrix& P, const Vector& x, double q, double lambda) {
  if (P.rows() != x.size() || P.cols() != x.size()) throw ParameterError("P and x sizes differ");
  const Vector Px = P * x;
  return kalman_gain_from_projection(Px, x, q, lambda);
}

void symmetrize(Matrix& P) {
  const Eigen::Index n = P.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double avg = 0.5 * (P(i, j) + P(j, i));
      P(i, j) = avg;
      P(j, i) = avg;
    }
  }
}

Matrix update_covariance(const Matrix& P, const Vector& K, const Vector& x, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ParameterError("forgetting factor must lie in (0, 1]");
  Matrix out = P;
  const Eigen::RowVectorXd xP = x.transpose() * P;
  out.noalias() -= K * xP;
  out /= lambda;
  symmetrize(out);
  return out;
}

void update_covariance_in_place(Matrix& P, double gain_scale, const Vector& Px, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ParameterError("forgetting factor must lie in (0, 1]");
  if (!(gain_scale >= 0.0)) throw ParameterError("gain scale must be nonnegative");
  const double inv_lambda = 1.0 / lambda;
  if (gain_scale == 0.0) {
    P *= inv_lambda;
    return;
  }
  // K x'P = c (Px)(Px)' = u u' with u = sqrt(c) Px. u_i u_j == u_j u_i bit for
  // bit, so a symmetric P stays exactly symmetric.
  const Vector u = std::sqrt(gain_scale) * Px;
  const Eigen::Index n = P.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    P.col(j) = (P.col(j) - u * u[j]) * inv_lambda;
  }
}

Vector half_update(const Vector& w, const Vector& K, double e) {
  if (w.size() != K.size()) throw ParameterError("weight and gain sizes differ");
  return w + K * e;
}

Vector sparsity_correction(const Vector& psi, const Matrix& P, double rho, const Vector& grad) {
  if (!(rho >= 0.0)) throw ParameterError("sparsity penalty parameter must be nonnegative");
  if (rho == 0.0) return psi;
  return psi - rho * (P * grad);
}

bool clamp_covariance(Matrix& P, double ceiling) {
  if (P.size() == 0) return false;
  const double peak = P.diagonal().maxCoeff();
  if (!(peak > ceiling)) return false;
  P *= ceiling / peak;
  return true;
}

}  // namespace srrls
