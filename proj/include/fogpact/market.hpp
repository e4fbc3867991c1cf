#pragma once

#include <cstdint>
#include <span>

#include "fogpact/matrix.hpp"

namespace fogpact {

struct InstanceOptions {
  /// Permit negative entries in the cost matrix (technologically
  /// complementary resources). Positive definiteness is still required.
  bool allow_complementarity = false;
};

/// One network operator, one fog node.
///
/// cost   - C, quadratic operation-cost matrix (strictly positive definite)
/// noise  - Sigma, QoS measurement-noise covariance (PSD, zero allowed)
/// beta   - marginal value of each unit of effort to the operator
/// eta    - absolute risk aversion of the fog node (> 0)
/// w_bar  - reservation certainty equivalent of the fog node
///
/// Instances are immutable once built; create() validates every invariant.
class MarketInstance {
 public:
  static MarketInstance create(SymMatrix cost, SymMatrix noise, Vector beta, double eta,
                               double w_bar, InstanceOptions options = {});

  std::size_t dimension() const noexcept { return beta_.size(); }
  const SymMatrix& cost() const noexcept { return cost_; }
  const SymMatrix& noise() const noexcept { return noise_; }
  const Vector& beta() const noexcept { return beta_; }
  double eta() const noexcept { return eta_; }
  double w_bar() const noexcept { return w_bar_; }
  const InstanceOptions& options() const noexcept { return options_; }

  /// C^-1, computed once at construction.
  const SymMatrix& cost_inverse() const noexcept { return cost_inverse_; }

  /// Copies with one field replaced; each result is validated again.
  MarketInstance with_cost(SymMatrix cost) const;
  MarketInstance with_noise(SymMatrix noise) const;
  MarketInstance with_beta(Vector beta) const;
  MarketInstance with_eta(double eta) const;
  MarketInstance with_w_bar(double w_bar) const;

  /// FNV-1a over the defining fields; identical instances hash identically.
  std::uint64_t digest() const;

 private:
  MarketInstance() = default;

  SymMatrix cost_;
  SymMatrix noise_;
  Vector beta_;
  double eta_ = 1.0;
  double w_bar_ = 0.0;
  InstanceOptions options_;
  SymMatrix cost_inverse_;
};

/// Linear payment w = t + s^T q.
struct Contract {
  double t = 0.0;
  Vector s;
};

/// Resource quantities, normalized to a common unit.
struct EffortVector {
  Vector a;
};

/// 1/2 a^T C a
double operation_cost(const MarketInstance& inst, const EffortVector& effort);

/// t + s^T a - 1/2 a^T C a - 1/2 eta s^T Sigma s
double fn_certainty_equivalent(const MarketInstance& inst, const Contract& k,
                               const EffortVector& effort);

/// -exp(-eta (w - psi(a))). Throws Overflow when the exponent exceeds
/// kMaxExponent.
double fn_exponential_utility(const MarketInstance& inst, double w_realized,
                              const EffortVector& effort);

inline constexpr double kMaxExponent = 700.0;

/// beta^T a - s^T a - t. The operator is risk neutral.
double no_certainty_equivalent(const MarketInstance& inst, const Contract& k,
                               const EffortVector& effort);

/// beta^T a - 1/2 a^T C a - 1/2 eta s^T Sigma s. Does not depend on t.
double social_welfare(const MarketInstance& inst, const Contract& k, const EffortVector& effort);

/// a = C^-1 s, the fog node's optimal effort under contract k.
EffortVector fn_best_response(const MarketInstance& inst, const Contract& k);

/// Variance of the payment, s^T Sigma s.
double payment_variance(const MarketInstance& inst, std::span<const double> s);

}  // namespace fogpact
