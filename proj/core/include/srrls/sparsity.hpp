#pragma once

#include <cstddef>

#include "srrls/filter_core.hpp"

namespace srrls {

/// sum_m ln(1 + |w_m| / mu).
double log_penalty(const Vector& w, double mu);

/// Entries sgn(w_m) / (mu + |w_m|), with sgn(0) = 0.
Vector log_penalty_subgradient(const Vector& w, double mu);

/// Default length of the initial interval during which the adaptive
/// penalty is held at zero: ceil(M / 2).
inline std::size_t default_rho_warmup(std::size_t order) { return (order + 1) / 2; }

/// Directions with squared norm below this are treated as "no sparsity step".
inline constexpr double kDegenerateDirection = 1e-20;

/// Practical penalty parameter
///   max((psi - w_prev)' g / ||g||^2, 0),  g = P grad,
/// returning 0 while k <= warmup_len or when ||g||^2 is degenerate.
double rho_opt(const Vector& psi, const Vector& w_prev, const Matrix& P, const Vector& grad,
               std::size_t k, std::size_t warmup_len);

/// rho_opt with g = P grad already formed.
double rho_opt_along(const Vector& psi, const Vector& w_prev, const Vector& g, std::size_t k,
                     std::size_t warmup_len);

/// Ground-truth minimiser of ||w_true - (psi - rho g)||^2 over rho, unclamped:
///   (psi - w_true)' g / ||g||^2.
/// Returns 0 for a degenerate direction.
double rho_opt_oracle(const Vector& psi, const Vector& w_true, const Vector& g);

/// Change in squared deviation caused by the sparsity step of size rho:
///   2 rho (w_true - psi)' g + rho^2 ||g||^2.
double deviation_change(const Vector& psi, const Vector& w_true, const Vector& g, double rho);

}  // namespace srrls
