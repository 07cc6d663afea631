#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "srrls/filter_core.hpp"
#include "srrls/robustness.hpp"
#include "srrls/vff.hpp"

namespace srrls {

enum class Variant {
  kRls,         // RLS
  kSRls,        // S-RLS: fixed rho, q = 1
  kRlm,         // RLM: M-estimator weighting, no sparsity step
  kSRRls,       // S-RRLS: M-estimator + fixed rho
  kSRRlsOpt,    // S-RRLS-OPT: M-estimator + adaptive rho
  kSRRlsOptRs,  // S-RRLS-OPT-RS: adaptive rho + covariance reset
  kJoSRRls,     // JO-S-RRLS: adaptive rho + variable forgetting factor
};

std::string_view to_string(Variant variant);
std::optional<Variant> parse_variant(std::string_view name);
std::span<const Variant> all_variants();

bool is_robust(Variant variant);
bool is_sparse(Variant variant);
bool has_adaptive_rho(Variant variant);
bool has_variable_lambda(Variant variant);

struct AlgorithmSpec {
  Variant variant = Variant::kRls;
  std::string label;             // defaults to the variant name
  double lambda = 0.995;         // ignored by JO-S-RRLS
  double rho = 0.0;              // fixed-rho variants; scaled by (1 - lambda)
  double mu = 0.01;              // log-penalty shrinkage
  double delta = 0.5;            // P_0 = I / delta
  RobustScaleParams m_estimator;
  VffParams vff;
  ResetDetectorParams reset;
  bool enable_reset = false;     // adds the reset detector to JO-S-RRLS
  std::optional<std::size_t> rho_warmup;   // defaults to ceil(M / 2)
  std::optional<double> covariance_ceiling;  // defaults to 1e6 / delta

  std::string display_label() const;
  bool uses_reset() const;
  void validate() const;
};

/// One sparsity-aware robust RLS filter, advanced one sample at a time.
///
/// Per sample: a priori error, robust weight, forgetting factor, gain, half
/// update psi, covariance update, sparsity correction along P_k grad, and the
/// optional covariance reset.
class AdaptiveFilter {
 public:
  AdaptiveFilter(AlgorithmSpec spec, std::size_t order);

  StepDiagnostics step(double x_sample, double d);

  /// P <- I / delta; weights and scale/VFF estimators are kept.
  void reset_covariance();

  const AlgorithmSpec& spec() const { return spec_; }
  const FilterState& state() const { return state_; }
  const Vector& weights() const { return state_.w; }
  const Regressor& regressor() const { return regressor_; }
  const std::optional<RobustScaleState>& robust() const { return robust_; }
  const std::optional<VffState>& vff() const { return vff_; }
  const std::optional<ResetDetectorState>& reset_detector() const { return reset_; }
  std::size_t order() const { return state_.order(); }

 private:
  StepDiagnostics advance(double x_sample, double d);
  double select_lambda(double q, double e, double theta, double d, double y);
  double select_rho(const Vector& psi, const Vector& w_prev, const Vector& g, double lambda) const;

  AlgorithmSpec spec_;
  FilterState state_;
  Regressor regressor_;
  std::optional<RobustScaleState> robust_;
  std::optional<VffState> vff_;
  std::optional<ResetDetectorState> reset_;
  std::size_t rho_warmup_;
  double covariance_ceiling_;
  Vector px_;
  Vector g_;
};

}  // namespace srrls
