#include "fogpact/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fogpact/error.hpp"

namespace fogpact {

std::string mode_name(EvaluationMode mode) {
  return mode == EvaluationMode::OwnInstance ? "own" : "true";
}

EvaluationMode parse_mode(std::string_view name) {
  if (name == "own" || name == "own_instance") return EvaluationMode::OwnInstance;
  if (name == "true" || name == "true_instance") return EvaluationMode::TrueInstance;
  throw Error(ErrorKind::InvalidSpec, "unknown evaluation mode: " + std::string(name));
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw Error(ErrorKind::InvalidSpec, "sweep values are empty");
  if (spec.plans.empty()) throw Error(ErrorKind::InvalidSpec, "sweep has no plans");
  for (std::size_t k = 1; k < spec.values.size(); ++k) {
    if (!(spec.values[k] > spec.values[k - 1])) {
      std::ostringstream msg;
      msg << "sweep values must be strictly increasing (value " << k << " = "
          << format_value(spec.values[k]) << " follows " << format_value(spec.values[k - 1])
          << ")";
      throw Error(ErrorKind::InvalidSpec, msg.str());
    }
  }
  const Parameter& p = spec.parameter;
  if ((p.kind == Parameter::Kind::CostEntry || p.kind == Parameter::Kind::NoiseEntry) &&
      p.i != p.j) {
    throw Error(ErrorKind::InvalidSpec, "sweeps vary diagonal matrix entries only");
  }
  try {
    parameter_value(spec.base, p);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidSpec, e.what());
  }
  for (const PlanKind& plan : spec.plans) {
    if (plan.type == PlanType::SingleBonus && plan.dim && *plan.dim >= spec.base.dimension()) {
      throw Error(ErrorKind::InvalidSpec, "single-bonus dimension out of range");
    }
  }
}

SweepResult run_sweep(const SweepSpec& spec) {
  validate_sweep(spec);
  SweepResult result;
  result.dimension = spec.base.dimension();
  result.rows.reserve(spec.values.size() * spec.plans.size());
  for (double value : spec.values) {
    const MarketInstance inst = with_parameter(spec.base, spec.parameter, value);
    for (const PlanKind& plan : spec.plans) {
      SolveReport r = solve_plan(inst, plan);
      if (spec.mode == EvaluationMode::TrueInstance) r = evaluate_on(inst, r);
      result.rows.push_back(SweepRow{value, plan, r.no_utility, r.fn_ce, r.welfare,
                                     r.contract.t, r.contract.s});
    }
  }
  return result;
}

std::vector<RankedPlan> rank_plans(const MarketInstance& inst, EvaluationMode mode) {
  std::vector<RankedPlan> ranking;
  for (const PlanKind& plan : all_plans()) {
    SolveReport r = solve_plan(inst, plan);
    if (mode == EvaluationMode::TrueInstance) r = evaluate_on(inst, r);
    ranking.push_back(RankedPlan{plan, r.no_utility, r.fn_ce, r.welfare});
  }
  std::stable_sort(ranking.begin(), ranking.end(), [](const RankedPlan& a, const RankedPlan& b) {
    return a.no_utility > b.no_utility;
  });
  return ranking;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
  out << "param_value,plan,no_utility,fn_ce,welfare,t";
  for (std::size_t i = 0; i < result.dimension; ++i) out << ",s_" << i;
  out << '\n';
  for (const SweepRow& row : result.rows) {
    out << format_value(row.param_value) << ',' << plan_name(row.plan) << ','
        << format_value(row.no_utility) << ',' << format_value(row.fn_ce) << ','
        << format_value(row.welfare) << ',' << format_value(row.t);
    for (double v : row.s) out << ',' << format_value(v);
    out << '\n';
  }
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  write_sweep_csv(result, out);
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path);
}

SweepResult read_sweep_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    return cells;
  };
  auto number = [&](const std::string& cell, std::size_t line_no) {
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError,
                  path + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
    }
  };

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ConfigError, path + ": missing header");
  const std::vector<std::string> header = split(line);
  if (header.size() < 6 || header[0] != "param_value") {
    throw Error(ErrorKind::ConfigError, path + ": unexpected header");
  }
  SweepResult result;
  result.dimension = header.size() - 6;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::ConfigError,
                  path + ":" + std::to_string(line_no) + ": wrong number of columns");
    }
    SweepRow row;
    row.param_value = number(cells[0], line_no);
    row.plan = parse_plan(cells[1]);
    row.no_utility = number(cells[2], line_no);
    row.fn_ce = number(cells[3], line_no);
    row.welfare = number(cells[4], line_no);
    row.t = number(cells[5], line_no);
    for (std::size_t i = 6; i < cells.size(); ++i) row.s.push_back(number(cells[i], line_no));
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_ranking_csv(const std::vector<RankedPlan>& ranking, std::ostream& out) {
  out << "plan,no_utility,fn_ce,welfare\n";
  for (const RankedPlan& r : ranking) {
    out << plan_name(r.plan) << ',' << format_value(r.no_utility) << ',' << format_value(r.fn_ce)
        << ',' << format_value(r.welfare) << '\n';
  }
}

MarketInstance reference_fixture() {
  // Chosen by tools/fixture_search.cpp; keep in sync with fixtures/reference.ini.
  return MarketInstance::create(SymMatrix::from_rows({{1.0, 0.1}, {0.1, 1.0}}),
                                SymMatrix::from_rows({{1.0, 0.7}, {0.7, 1.0}}), {1.0, 1.0}, 0.5,
                                0.0);
}

}  // namespace fogpact
