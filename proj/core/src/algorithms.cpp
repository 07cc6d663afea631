#include "srrls/algorithms.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "srrls/errors.hpp"
#include "srrls/sparsity.hpp"

namespace srrls {
namespace {

constexpr std::array<Variant, 7> kVariants = {
    Variant::kRls,      Variant::kSRls,       Variant::kRlm,     Variant::kSRRls,
    Variant::kSRRlsOpt, Variant::kSRRlsOptRs, Variant::kJoSRRls,
};

constexpr std::array<std::string_view, 7> kVariantNames = {
    "RLS", "S-RLS", "RLM", "S-RRLS", "S-RRLS-OPT", "S-RRLS-OPT-RS", "JO-S-RRLS",
};

}  // namespace

std::string_view to_string(Variant variant) {
  return kVariantNames[static_cast<std::size_t>(variant)];
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (std::size_t i = 0; i < kVariants.size(); ++i) {
    if (kVariantNames[i] == name) return kVariants[i];
  }
  return std::nullopt;
}

std::span<const Variant> all_variants() { return kVariants; }

bool is_robust(Variant variant) { return variant != Variant::kRls && variant != Variant::kSRls; }

bool is_sparse(Variant variant) { return variant != Variant::kRls && variant != Variant::kRlm; }

bool has_adaptive_rho(Variant variant) {
  return variant == Variant::kSRRlsOpt || variant == Variant::kSRRlsOptRs ||
         variant == Variant::kJoSRRls;
}

bool has_variable_lambda(Variant variant) { return variant == Variant::kJoSRRls; }

std::string AlgorithmSpec::display_label() const {
  return label.empty() ? std::string(to_string(variant)) : label;
}

bool AlgorithmSpec::uses_reset() const {
  return variant == Variant::kSRRlsOptRs || (variant == Variant::kJoSRRls && enable_reset);
}

void AlgorithmSpec::validate() const {
  const std::string who = display_label() + ": ";
  if (!has_variable_lambda(variant) && !(lambda > 0.0 && lambda <= 1.0)) {
    throw ParameterError(who + "lambda must lie in (0, 1]");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw ParameterError(who + "rho must be nonnegative");
  if (!(mu > 0.0)) throw ParameterError(who + "mu must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ParameterError(who + "delta must be positive");
  if (covariance_ceiling && !(*covariance_ceiling > 0.0)) {
    throw ParameterError(who + "covariance ceiling must be positive");
  }
  if (is_robust(variant)) m_estimator.validate();
  if (has_variable_lambda(variant)) vff.validate();
  if (uses_reset()) reset.validate();
}

AdaptiveFilter::AdaptiveFilter(AlgorithmSpec spec, std::size_t order)
    : spec_(std::move(spec)),
      state_(init_state(order, spec_.delta)),
      regressor_(order),
      rho_warmup_(spec_.rho_warmup.value_or(default_rho_warmup(order))),
      covariance_ceiling_(spec_.covariance_ceiling.value_or(1e6 / spec_.delta)),
      px_(Vector::Zero(static_cast<Eigen::Index>(order))),
      g_(Vector::Zero(static_cast<Eigen::Index>(order))) {
  spec_.validate();
  if (is_robust(spec_.variant)) robust_.emplace(spec_.m_estimator);
  if (has_variable_lambda(spec_.variant)) vff_.emplace(spec_.vff);
  if (spec_.uses_reset()) reset_.emplace(spec_.reset);
}

double AdaptiveFilter::select_lambda(double q, double e, double theta, double d, double y) {
  if (!vff_) return spec_.lambda;
  vff_->update_powers(q, e, theta, d, y);
  // Scale estimators warm up over the first N_w samples.
  if (state_.k < spec_.m_estimator.window) return spec_.vff.lambda_max;
  return vff_->forgetting_factor();
}

double AdaptiveFilter::select_rho(const Vector& psi, const Vector& w_prev, const Vector& g,
                                  double lambda) const {
  if (has_adaptive_rho(spec_.variant)) return rho_opt_along(psi, w_prev, g, state_.k + 1, rho_warmup_);
  return spec_.rho * (1.0 - lambda);
}

StepDiagnostics AdaptiveFilter::step(double x_sample, double d) {
  try {
    return advance(x_sample, d);
  } catch (const NumericalError& e) {
    if (std::string_view(e.what()).starts_with(spec_.display_label() + ":")) throw;
    throw NumericalError(spec_.display_label() + ": " + e.what() + " at iteration " +
                         std::to_string(state_.k + 1));
  }
}

StepDiagnostics AdaptiveFilter::advance(double x_sample, double d) {
  StepDiagnostics diag;
  regressor_.push(x_sample);
  const Vector& x = regressor_.values();

  const double y = x.dot(state_.w);
  diag.e = d - y;

  if (robust_) {
    const double xi = robust_->update_threshold(diag.e);
    diag.q = m_estimate_weight(diag.e, xi);
  } else {
    diag.q = 1.0;
  }

  px_.noalias() = state_.P * x;
  diag.theta = diag.q == 0.0 ? 0.0 : diag.q * x.dot(px_);
  diag.lambda_used = select_lambda(diag.q, diag.e, diag.theta, d, y);

  const GainResult gain = kalman_gain_from_projection(px_, x, diag.q, diag.lambda_used);
  Vector psi = half_update(state_.w, gain.K, diag.e);
  diag.xi_err = d - x.dot(psi);

  update_covariance_in_place(state_.P, gain.scale, px_, diag.lambda_used);
  diag.covariance_clamped = clamp_covariance(state_.P, covariance_ceiling_);

  if (is_sparse(spec_.variant)) {
    // Fixed-rho variants take the subgradient at w_{k-1}, adaptive ones at psi_k.
    const Vector grad = has_adaptive_rho(spec_.variant)
                            ? log_penalty_subgradient(psi, spec_.mu)
                            : log_penalty_subgradient(state_.w, spec_.mu);
    g_.noalias() = state_.P * grad;
    diag.rho_used = select_rho(psi, state_.w, g_, diag.lambda_used);
    if (diag.rho_used != 0.0) psi -= diag.rho_used * g_;
  }
  state_.w = std::move(psi);

  if (reset_ && reset_->check(diag.q, diag.e)) {
    reset_covariance();
    diag.reset_fired = true;
  }

  if (!state_.w.allFinite() || !state_.P.allFinite()) {
    throw NumericalError(spec_.display_label() + ": non-finite filter state at iteration " +
                         std::to_string(state_.k + 1));
  }
  ++state_.k;
  return diag;
}

void AdaptiveFilter::reset_covariance() {
  const Eigen::Index n = state_.P.rows();
  state_.P = Matrix::Identity(n, n) / spec_.delta;
}

}  // namespace srrls
