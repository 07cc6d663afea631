#include "srrls/sparsity.hpp"

#include <algorithm>
#include <cmath>

#include "srrls/errors.hpp"

namespace srrls {
namespace {

void require_positive_mu(double mu) {
  if (!(mu > 0.0)) throw ParameterError("log-penalty shrinkage mu must be positive");
}

}  // namespace

double log_penalty(const Vector& w, double mu) {
  require_positive_mu(mu);
  double sum = 0.0;
  for (Eigen::Index m = 0; m < w.size(); ++m) sum += std::log1p(std::abs(w[m]) / mu);
  return sum;
}

Vector log_penalty_subgradient(const Vector& w, double mu) {
  require_positive_mu(mu);
  Vector g(w.size());
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    const double v = w[m];
    const double sgn = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    g[m] = sgn / (mu + std::abs(v));
  }
  return g;
}

double rho_opt_along(const Vector& psi, const Vector& w_prev, const Vector& g, std::size_t k,
                     std::size_t warmup_len) {
  if (k <= warmup_len) return 0.0;
  const double gg = g.squaredNorm();
  if (!(gg >= kDegenerateDirection) || !std::isfinite(gg)) return 0.0;
  const double rho = (psi - w_prev).dot(g) / gg;
  return std::isfinite(rho) ? std::max(rho, 0.0) : 0.0;
}

double rho_opt(const Vector& psi, const Vector& w_prev, const Matrix& P, const Vector& grad,
               std::size_t k, std::size_t warmup_len) {
  if (k <= warmup_len) return 0.0;
  const Vector g = P * grad;
  return rho_opt_along(psi, w_prev, g, k, warmup_len);
}

double rho_opt_oracle(const Vector& psi, const Vector& w_true, const Vector& g) {
  const double gg = g.squaredNorm();
  if (!(gg >= kDegenerateDirection)) return 0.0;
  return (psi - w_true).dot(g) / gg;
}

double deviation_change(const Vector& psi, const Vector& w_true, const Vector& g, double rho) {
  return 2.0 * rho * (w_true - psi).dot(g) + rho * rho * g.squaredNorm();
}

}  // namespace srrls
