#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fogpact/solver.hpp"

namespace fogpact {

enum class EvaluationMode {
  /// Each plan is scored on the instance it was designed on.
  OwnInstance,
  /// Every plan is scored on the undiagonalized instance (see evaluate_on).
  TrueInstance,
};

std::string mode_name(EvaluationMode mode);
/// "own" or "true".
EvaluationMode parse_mode(std::string_view name);

struct SweepSpec {
  MarketInstance base;
  /// Swept parameter: a diagonal cost entry, a variance, eta or a beta entry.
  Parameter parameter;
  std::vector<double> values;
  std::vector<PlanKind> plans;
  EvaluationMode mode = EvaluationMode::OwnInstance;
};

struct SweepRow {
  double param_value = 0.0;
  PlanKind plan;
  double no_utility = 0.0;
  double fn_ce = 0.0;
  double welfare = 0.0;
  double t = 0.0;
  Vector s;
};

struct SweepResult {
  std::size_t dimension = 0;
  std::vector<SweepRow> rows;
};

/// Throws InvalidSpec (empty or non-increasing values, off-diagonal swept
/// entry, no plans) or InvalidPerturbation (a value yields an invalid instance).
void validate_sweep(const SweepSpec& spec);

/// One row per (value, plan), ordered by value then by position in spec.plans.
SweepResult run_sweep(const SweepSpec& spec);

struct RankedPlan {
  PlanKind plan;
  double no_utility = 0.0;
  double fn_ce = 0.0;
  double welfare = 0.0;
};

/// All six plans, sorted by operator utility, highest first. Ties keep
/// enumeration order.
std::vector<RankedPlan> rank_plans(const MarketInstance& inst, EvaluationMode mode);

/// Fixed-width formatting used by every text and CSV output: 12 significant
/// digits, printf %.12g.
std::string format_value(double v);

/// param_value,plan,no_utility,fn_ce,welfare,t,s_0,...,s_{n-1}
void write_sweep_csv(const SweepResult& result, std::ostream& out);
/// Writes to `path` (UTF-8, LF). Throws IoError.
void emit_csv(const SweepResult& result, const std::string& path);
/// Parses a file produced by emit_csv. Throws IoError or ConfigError.
SweepResult read_sweep_csv(const std::string& path);

/// plan,no_utility,fn_ce,welfare
void write_ranking_csv(const std::vector<RankedPlan>& ranking, std::ostream& out);

/// Two-resource instance in the regime the fog-computing comparison assumes:
/// positive (substitute) cost cross-terms, noise covariances larger than the
/// cost cross-terms, w_bar = 0. Mirrors fixtures/reference.ini.
MarketInstance reference_fixture();

}  // namespace fogpact
