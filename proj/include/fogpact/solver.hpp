#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogpact/market.hpp"

namespace fogpact {

/// The six payment mechanisms, in enumeration (tie-break) order.
enum class PlanType {
  General,
  Independent,
  StochasticIndependent,
  TechnologicallyIndependent,
  SingleBonus,
  OpeningReward,
};

struct PlanKind {
  PlanType type = PlanType::General;
  /// SingleBonus only: the paid dimension, or nullopt for automatic choice.
  std::optional<std::size_t> dim;

  friend bool operator==(const PlanKind&, const PlanKind&) = default;
};

/// All six plans; SingleBonus in automatic mode.
std::vector<PlanKind> all_plans();

/// "general", "independent", "stochastic-independent",
/// "technologically-independent", "single-bonus" (or "single-bonus:<i>"),
/// "opening-reward".
std::string plan_name(const PlanKind& plan);
/// Inverse of plan_name. Throws InvalidSpec on an unknown name.
PlanKind parse_plan(std::string_view name);

struct SolveReport {
  PlanKind plan;
  Contract contract;
  EffortVector effort;
  double no_utility = 0.0;
  double fn_ce = 0.0;
  double welfare = 0.0;
  std::uint64_t instance_digest = 0;
  /// SingleBonus: the dimension actually paid on.
  std::optional<std::size_t> bonus_dim;
};

/// s* = (I + eta C Sigma)^-1 beta, a* = C^-1 s*, t* = w_bar + 1/2 s*^T (eta Sigma - C^-1) s*.
/// Throws SingularMatrix when I + eta C Sigma has condition number above
/// kMaxCondition.
SolveReport solve_general(const MarketInstance& inst);

/// General solution on the instance with both C and Sigma diagonalized.
/// Utilities in the report are measured on that diagonalized instance.
SolveReport solve_independent(const MarketInstance& inst);
/// General solution with only Sigma diagonalized.
SolveReport solve_stochastic_independent(const MarketInstance& inst);
/// General solution with only C diagonalized.
SolveReport solve_technologically_independent(const MarketInstance& inst);

/// Bonus on a single QoS dimension, s = s_i e_i, with the fog node still
/// best-responding a = C^-1 s. The optimal rate is
///   s_i = (C^-1 beta)_i / ((C^-1)_ii + eta Sigma_ii).
/// With dim == nullopt, every dimension is tried and the one with the largest
/// operator utility kept (lowest index on ties). Throws BadDimension.
SolveReport solve_single_bonus(const MarketInstance& inst, std::optional<std::size_t> dim);

/// First-best benchmark: the operator dictates a = C^-1 beta and pays only the
/// fixed salary t = w_bar + 1/2 a^T C a. Never reads eta or Sigma.
SolveReport solve_opening_reward(const MarketInstance& inst);

SolveReport solve_plan(const MarketInstance& inst, const PlanKind& plan);

/// The instance a plan is designed on (diagonalized for the independent
/// variants, unchanged otherwise).
MarketInstance plan_instance(const MarketInstance& inst, PlanType type);

/// Re-scores a plan's QoS payments on another instance: the fog node
/// best-responds under truth.cost() and the fixed salary is reset so that its
/// participation constraint binds again. OpeningReward keeps its dictated
/// effort.
SolveReport evaluate_on(const MarketInstance& truth, const SolveReport& report);

struct OracleOptions {
  double gradient_tol = 1e-10;
  long max_iterations = 100000;
};

/// Gradient ascent with backtracking on the reduced concave objective
///   g(s) = beta^T C^-1 s - 1/2 s^T C^-1 s - 1/2 eta s^T Sigma s
/// from s = 0, stopping when ||grad g||_inf <= gradient_tol. With `axis`, only
/// that coordinate of s moves. t comes from the binding participation
/// constraint. Throws NoConvergence after max_iterations.
SolveReport solve_numeric_oracle(const MarketInstance& inst, std::optional<std::size_t> axis = {},
                                 const OracleOptions& options = {});

struct Parameter {
  enum class Kind { CostEntry, NoiseEntry, Eta, Beta };
  Kind kind = Kind::Eta;
  std::size_t i = 0;
  std::size_t j = 0;

  static Parameter cost(std::size_t i, std::size_t j) { return {Kind::CostEntry, i, j}; }
  static Parameter noise(std::size_t i, std::size_t j) { return {Kind::NoiseEntry, i, j}; }
  static Parameter eta() { return {Kind::Eta, 0, 0}; }
  static Parameter beta(std::size_t i) { return {Kind::Beta, i, 0}; }
};

double parameter_value(const MarketInstance& inst, const Parameter& p);
/// Copy of inst with p set to value (off-diagonal matrix entries are set
/// symmetrically). Throws InvalidPerturbation if the result is not a valid
/// instance.
MarketInstance with_parameter(const MarketInstance& inst, const Parameter& p, double value);

/// Central finite difference of the General s* with respect to p. Default step
/// is 1e-5 * max(1, |p|).
Vector comparative_static_sensitivity(const MarketInstance& inst, const Parameter& p,
                                      std::optional<double> h = {});

}  // namespace fogpact
