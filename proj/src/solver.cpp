#include "fogpact/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fogpact/error.hpp"

namespace fogpact {
namespace {

// Binding participation constraint: t + s^T a - psi(a) - 1/2 eta s^T Sigma s = w_bar.
double binding_salary(const MarketInstance& inst, const Vector& s, const EffortVector& effort) {
  return inst.w_bar() - dot(s, effort.a) + operation_cost(inst, effort) +
         0.5 * inst.eta() * payment_variance(inst, s);
}

SolveReport make_report(const MarketInstance& inst, PlanKind plan, Contract contract,
                        EffortVector effort) {
  SolveReport r;
  r.plan = plan;
  r.no_utility = no_certainty_equivalent(inst, contract, effort);
  r.fn_ce = fn_certainty_equivalent(inst, contract, effort);
  r.welfare = social_welfare(inst, contract, effort);
  r.contract = std::move(contract);
  r.effort = std::move(effort);
  r.instance_digest = inst.digest();
  return r;
}

SolveReport general_closed_form(const MarketInstance& inst, PlanKind plan) {
  const std::size_t n = inst.dimension();
  // I + eta C Sigma is not symmetric in general.
  Matrix m = multiply(inst.cost().matrix(), inst.noise().matrix());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) *= inst.eta();
    m(i, i) += 1.0;
  }
  const double cond = condition_number(m);
  if (!(cond <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "I + eta*C*Sigma is numerically singular (condition number " << cond << ")";
    throw Error(ErrorKind::SingularMatrix, msg.str());
  }
  Vector s = solve_general(m, inst.beta());
  EffortVector effort{multiply(inst.cost_inverse(), s)};
  const double t = inst.w_bar() + 0.5 * (inst.eta() * payment_variance(inst, s) - dot(s, effort.a));
  return make_report(inst, plan, Contract{t, std::move(s)}, std::move(effort));
}

SolveReport single_bonus_on(const MarketInstance& inst, std::size_t dim) {
  const SymMatrix& cinv = inst.cost_inverse();
  const Vector cinv_beta = multiply(cinv, inst.beta());
  const double rate = cinv_beta[dim] / (cinv(dim, dim) + inst.eta() * inst.noise()(dim, dim));
  Vector s(inst.dimension(), 0.0);
  s[dim] = rate;
  EffortVector effort{multiply(cinv, s)};
  const double t = binding_salary(inst, s, effort);
  SolveReport r = make_report(inst, PlanKind{PlanType::SingleBonus, dim}, Contract{t, std::move(s)},
                              std::move(effort));
  r.bonus_dim = dim;
  return r;
}

}  // namespace

std::vector<PlanKind> all_plans() {
  return {{PlanType::General, {}},
          {PlanType::Independent, {}},
          {PlanType::StochasticIndependent, {}},
          {PlanType::TechnologicallyIndependent, {}},
          {PlanType::SingleBonus, {}},
          {PlanType::OpeningReward, {}}};
}

std::string plan_name(const PlanKind& plan) {
  switch (plan.type) {
    case PlanType::General: return "general";
    case PlanType::Independent: return "independent";
    case PlanType::StochasticIndependent: return "stochastic-independent";
    case PlanType::TechnologicallyIndependent: return "technologically-independent";
    case PlanType::SingleBonus:
      return plan.dim ? "single-bonus:" + std::to_string(*plan.dim) : "single-bonus";
    case PlanType::OpeningReward: return "opening-reward";
  }
  return "unknown";
}

PlanKind parse_plan(std::string_view name) {
  if (name == "general") return {PlanType::General, {}};
  if (name == "independent") return {PlanType::Independent, {}};
  if (name == "stochastic-independent") return {PlanType::StochasticIndependent, {}};
  if (name == "technologically-independent") return {PlanType::TechnologicallyIndependent, {}};
  if (name == "opening-reward") return {PlanType::OpeningReward, {}};
  if (name == "single-bonus") return {PlanType::SingleBonus, {}};
  constexpr std::string_view prefix = "single-bonus:";
  if (name.substr(0, prefix.size()) == prefix && name.size() > prefix.size()) {
    std::size_t dim = 0;
    for (char c : name.substr(prefix.size())) {
      if (c < '0' || c > '9') throw Error(ErrorKind::InvalidSpec, "bad plan name: " + std::string(name));
      dim = dim * 10 + static_cast<std::size_t>(c - '0');
      if (dim > kMaxDimension) throw Error(ErrorKind::InvalidSpec, "bad plan name: " + std::string(name));
    }
    return {PlanType::SingleBonus, dim};
  }
  throw Error(ErrorKind::InvalidSpec, "unknown plan: " + std::string(name));
}

MarketInstance plan_instance(const MarketInstance& inst, PlanType type) {
  switch (type) {
    case PlanType::Independent:
      return MarketInstance::create(inst.cost().diagonal_part(), inst.noise().diagonal_part(),
                                    inst.beta(), inst.eta(), inst.w_bar(), inst.options());
    case PlanType::StochasticIndependent: return inst.with_noise(inst.noise().diagonal_part());
    case PlanType::TechnologicallyIndependent: return inst.with_cost(inst.cost().diagonal_part());
    default: return inst;
  }
}

SolveReport solve_general(const MarketInstance& inst) {
  return general_closed_form(inst, {PlanType::General, {}});
}

SolveReport solve_independent(const MarketInstance& inst) {
  return general_closed_form(plan_instance(inst, PlanType::Independent),
                             {PlanType::Independent, {}});
}

SolveReport solve_stochastic_independent(const MarketInstance& inst) {
  return general_closed_form(plan_instance(inst, PlanType::StochasticIndependent),
                             {PlanType::StochasticIndependent, {}});
}

SolveReport solve_technologically_independent(const MarketInstance& inst) {
  return general_closed_form(plan_instance(inst, PlanType::TechnologicallyIndependent),
                             {PlanType::TechnologicallyIndependent, {}});
}

SolveReport solve_single_bonus(const MarketInstance& inst, std::optional<std::size_t> dim) {
  const std::size_t n = inst.dimension();
  if (dim) {
    if (*dim >= n) {
      std::ostringstream msg;
      msg << "single-bonus dimension " << *dim << " outside [0, " << n << ")";
      throw Error(ErrorKind::BadDimension, msg.str());
    }
    return single_bonus_on(inst, *dim);
  }
  SolveReport best = single_bonus_on(inst, 0);
  for (std::size_t i = 1; i < n; ++i) {
    SolveReport candidate = single_bonus_on(inst, i);
    if (candidate.no_utility > best.no_utility) best = std::move(candidate);
  }
  best.plan = PlanKind{PlanType::SingleBonus, {}};
  return best;
}

SolveReport solve_opening_reward(const MarketInstance& inst) {
  EffortVector effort{multiply(inst.cost_inverse(), inst.beta())};
  Vector s(inst.dimension(), 0.0);
  const double t = inst.w_bar() + operation_cost(inst, effort);
  return make_report(inst, {PlanType::OpeningReward, {}}, Contract{t, std::move(s)},
                     std::move(effort));
}

SolveReport solve_plan(const MarketInstance& inst, const PlanKind& plan) {
  switch (plan.type) {
    case PlanType::General: return solve_general(inst);
    case PlanType::Independent: return solve_independent(inst);
    case PlanType::StochasticIndependent: return solve_stochastic_independent(inst);
    case PlanType::TechnologicallyIndependent: return solve_technologically_independent(inst);
    case PlanType::SingleBonus: return solve_single_bonus(inst, plan.dim);
    case PlanType::OpeningReward: return solve_opening_reward(inst);
  }
  throw Error(ErrorKind::InvalidSpec, "unknown plan type");
}

SolveReport evaluate_on(const MarketInstance& truth, const SolveReport& report) {
  if (report.contract.s.size() != truth.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "report and instance dimensions differ");
  }
  const Vector& s = report.contract.s;
  EffortVector effort = report.plan.type == PlanType::OpeningReward
                            ? report.effort
                            : fn_best_response(truth, report.contract);
  const double t = binding_salary(truth, s, effort);
  SolveReport r = make_report(truth, report.plan, Contract{t, s}, std::move(effort));
  r.bonus_dim = report.bonus_dim;
  return r;
}

SolveReport solve_numeric_oracle(const MarketInstance& inst, std::optional<std::size_t> axis,
                                 const OracleOptions& options) {
  const std::size_t n = inst.dimension();
  if (axis && *axis >= n) throw Error(ErrorKind::BadDimension, "oracle axis out of range");
  const SymMatrix& cinv = inst.cost_inverse();
  const Vector linear = multiply(cinv, inst.beta());
  // Hessian of g is -(C^-1 + eta Sigma).
  Matrix curvature = cinv.matrix();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) curvature(i, j) += inst.eta() * inst.noise()(i, j);
  }

  auto gradient = [&](const Vector& s) {
    Vector g = multiply(curvature, s);
    for (std::size_t i = 0; i < n; ++i) g[i] = linear[i] - g[i];
    if (axis) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i != *axis) g[i] = 0.0;
      }
    }
    return g;
  };

  Vector s(n, 0.0);
  double step = 1.0;
  long iter = 0;
  for (Vector g = gradient(s); max_abs(g) > options.gradient_tol; g = gradient(s)) {
    if (++iter > options.max_iterations) {
      std::ostringstream msg;
      msg << "gradient ascent did not converge in " << options.max_iterations
          << " iterations (|grad| = " << max_abs(g) << ")";
      throw Error(ErrorKind::NoConvergence, msg.str());
    }
    // g is quadratic, so its increment along g is evaluated exactly as
    // step*|g|^2 - step^2/2 * g^T H g instead of differencing two values of g.
    const double slope = dot(g, g);
    const double bend = dot(g, multiply(curvature, g));
    step *= 2.0;
    while (step * slope - 0.5 * step * step * bend < 0.5 * step * slope) step *= 0.5;
    for (std::size_t i = 0; i < n; ++i) s[i] += step * g[i];
  }

  EffortVector effort{multiply(cinv, s)};
  const double t = binding_salary(inst, s, effort);
  PlanKind plan = axis ? PlanKind{PlanType::SingleBonus, *axis} : PlanKind{PlanType::General, {}};
  SolveReport r = make_report(inst, plan, Contract{t, std::move(s)}, std::move(effort));
  r.bonus_dim = axis;
  return r;
}

double parameter_value(const MarketInstance& inst, const Parameter& p) {
  const std::size_t n = inst.dimension();
  switch (p.kind) {
    case Parameter::Kind::CostEntry:
      if (p.i >= n || p.j >= n) throw Error(ErrorKind::BadDimension, "cost index out of range");
      return inst.cost()(p.i, p.j);
    case Parameter::Kind::NoiseEntry:
      if (p.i >= n || p.j >= n) throw Error(ErrorKind::BadDimension, "noise index out of range");
      return inst.noise()(p.i, p.j);
    case Parameter::Kind::Eta: return inst.eta();
    case Parameter::Kind::Beta:
      if (p.i >= n) throw Error(ErrorKind::BadDimension, "beta index out of range");
      return inst.beta()[p.i];
  }
  return 0.0;
}

MarketInstance with_parameter(const MarketInstance& inst, const Parameter& p, double value) {
  parameter_value(inst, p);  // index checks
  try {
    switch (p.kind) {
      case Parameter::Kind::CostEntry: {
        SymMatrix c = inst.cost();
        c.set(p.i, p.j, value);
        return inst.with_cost(std::move(c));
      }
      case Parameter::Kind::NoiseEntry: {
        SymMatrix sigma = inst.noise();
        sigma.set(p.i, p.j, value);
        return inst.with_noise(std::move(sigma));
      }
      case Parameter::Kind::Eta: return inst.with_eta(value);
      case Parameter::Kind::Beta: {
        Vector beta = inst.beta();
        beta[p.i] = value;
        return inst.with_beta(std::move(beta));
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidInstance) throw;
    std::ostringstream msg;
    msg << "perturbed value " << value << " gives an invalid instance: " << e.what();
    throw Error(ErrorKind::InvalidPerturbation, msg.str());
  }
  return inst;
}

Vector comparative_static_sensitivity(const MarketInstance& inst, const Parameter& p,
                                      std::optional<double> h) {
  const double value = parameter_value(inst, p);
  const double step = h.value_or(1e-5 * std::max(1.0, std::abs(value)));
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidPerturbation, "finite-difference step must be > 0");
  const Vector up = solve_general(with_parameter(inst, p, value + step)).contract.s;
  const Vector down = solve_general(with_parameter(inst, p, value - step)).contract.s;
  Vector d(up.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (up[i] - down[i]) / (2.0 * step);
  return d;
}

}  // namespace fogpact
