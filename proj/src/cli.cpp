#include "fogpact/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "fogpact/config.hpp"
#include "fogpact/error.hpp"
#include "fogpact/experiments.hpp"
#include "fogpact/monte_carlo.hpp"

namespace fogpact::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Overflow: return kOverflow;
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidSpec:
    case ErrorKind::InvalidInstance:
    case ErrorKind::IoError: return kUsage;
    default: return kSolver;
  }
}

std::string format_vector(const Vector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_value(v[i]);
  }
  return s + "]";
}

void deliver(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  file << text;
  file.flush();
  if (!file) throw Error(ErrorKind::IoError, "failed writing " + path);
}

struct Flags {
  std::string config;
  std::string output;
  std::string plan;
  long dim = -1;
  std::string mode;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool antithetic = false;
  CLI::Option* dim_opt = nullptr;
  CLI::Option* samples_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
};

PlanKind resolve_plan(const Flags& f, const MarketInstance& inst, std::optional<PlanKind> fallback) {
  PlanKind plan = fallback.value_or(PlanKind{PlanType::General, {}});
  if (!f.plan.empty()) {
    try {
      plan = parse_plan(f.plan);
    } catch (const Error& e) {
      throw UsageError(std::string("--plan: ") + e.what());
    }
  }
  if (f.dim_opt && f.dim_opt->count()) {
    if (plan.type != PlanType::SingleBonus) throw UsageError("--dim applies to --plan single-bonus only");
    if (f.dim < 0 || static_cast<std::size_t>(f.dim) >= inst.dimension()) {
      std::ostringstream msg;
      msg << "--dim " << f.dim << " outside [0, " << inst.dimension() << ")";
      throw UsageError(msg.str());
    }
    plan.dim = static_cast<std::size_t>(f.dim);
  }
  if (plan.type == PlanType::SingleBonus && plan.dim && *plan.dim >= inst.dimension()) {
    throw UsageError("single-bonus dimension outside the instance");
  }
  return plan;
}

EvaluationMode resolve_mode(const Flags& f, EvaluationMode fallback) {
  if (f.mode.empty()) return fallback;
  try {
    return parse_mode(f.mode);
  } catch (const Error& e) {
    throw UsageError(std::string("--mode: ") + e.what());
  }
}

int cmd_solve(const Flags& f, std::ostream& out) {
  const ConfigDocument doc = load_config(f.config);
  const PlanKind plan = resolve_plan(f, doc.instance, doc.plan);
  deliver(format_report(solve_plan(doc.instance, plan)), f.output, out);
  return kOk;
}

int cmd_compare(const Flags& f, std::ostream& out) {
  if (f.output.empty()) throw UsageError("compare requires --output <path>");
  const ConfigDocument doc = load_config(f.config);
  const EvaluationMode mode = resolve_mode(f, EvaluationMode::OwnInstance);
  std::ostringstream csv;
  write_ranking_csv(rank_plans(doc.instance, mode), csv);
  deliver(csv.str(), f.output, out);
  return kOk;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  if (f.output.empty()) throw UsageError("sweep requires --output <path>");
  const ConfigDocument doc = load_config(f.config);
  if (!doc.sweep) throw Error(ErrorKind::ConfigError, f.config + ": missing [sweep] section");
  SweepSpec spec = *doc.sweep;
  spec.mode = resolve_mode(f, spec.mode);
  const SweepResult result = run_sweep(spec);
  std::ostringstream csv;
  write_sweep_csv(result, csv);
  deliver(csv.str(), f.output, out);
  return kOk;
}

int cmd_simulate(const Flags& f, std::ostream& out) {
  const ConfigDocument doc = load_config(f.config);
  SimConfig cfg = doc.sim.value_or(SimConfig{});
  if (f.samples_opt && f.samples_opt->count()) cfg.samples = f.samples;
  if (f.seed_opt && f.seed_opt->count()) cfg.seed = f.seed;
  if (f.antithetic) cfg.antithetic = true;
  if (cfg.samples < 1) throw UsageError("samples must be >= 1");
  const PlanKind plan = resolve_plan(f, doc.instance, doc.sim_plan ? doc.sim_plan : doc.plan);

  const SolveReport report = solve_plan(doc.instance, plan);
  // Independent variants are simulated on the instance they were designed on.
  const MarketInstance inst = plan_instance(doc.instance, plan.type);
  const SimResult sim = estimate_fn_utility(inst, report.contract, report.effort, cfg);

  const double ce = fn_certainty_equivalent(inst, report.contract, report.effort);
  const double analytic = -std::exp(-inst.eta() * ce);
  const double diff = sim.mean_fn_utility - analytic;
  double z = 0.0;
  if (sim.stderr_fn_utility > 0.0) {
    z = diff / sim.stderr_fn_utility;
  } else if (diff != 0.0) {
    z = std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  const double empirical_ce = -std::log(-sim.mean_fn_utility) / inst.eta();

  std::ostringstream text;
  text << "plan = " << plan_name(report.plan) << '\n'
       << "samples_used = " << sim.samples_used << '\n'
       << "seed = " << cfg.seed << '\n'
       << "antithetic = " << (cfg.antithetic ? "true" : "false") << '\n'
       << "mean_fn_utility = " << format_value(sim.mean_fn_utility) << '\n'
       << "stderr_fn_utility = " << format_value(sim.stderr_fn_utility) << '\n'
       << "analytic_fn_utility = " << format_value(analytic) << '\n'
       << "fn_ce = " << format_value(ce) << '\n'
       << "empirical_ce = " << format_value(empirical_ce) << '\n'
       << "mean_payment = " << format_value(sim.mean_payment) << '\n'
       << "stderr_payment = " << format_value(sim.stderr_payment) << '\n'
       << "expected_payment = "
       << format_value(report.contract.t + dot(report.contract.s, report.effort.a)) << '\n'
       << "mean_qos = " << format_vector(sim.mean_qos) << '\n'
       << "z_score = " << format_value(z) << '\n';
  deliver(text.str(), f.output, out);
  return kOk;
}

}  // namespace

std::string format_report(const SolveReport& report) {
  std::ostringstream text;
  text << "plan = " << plan_name(report.plan) << '\n'
       << "t = " << format_value(report.contract.t) << '\n'
       << "s = " << format_vector(report.contract.s) << '\n'
       << "a = " << format_vector(report.effort.a) << '\n'
       << "no_utility = " << format_value(report.no_utility) << '\n'
       << "fn_ce = " << format_value(report.fn_ce) << '\n'
       << "welfare = " << format_value(report.welfare) << '\n';
  if (report.bonus_dim) text << "bonus_dim = " << *report.bonus_dim << '\n';
  text << "instance_digest = " << std::hex << std::setw(16) << std::setfill('0')
       << report.instance_digest << '\n';
  return text.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal linear payment plans for a fog node under moral hazard", "fogpact"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", f.config, "Configuration file")->required();
    sub->add_option("--output,-o", f.output, "Write the result here instead of stdout");
  };
  auto add_plan = [&](CLI::App* sub) {
    sub->add_option("--plan", f.plan,
                    "general|independent|stochastic-independent|technologically-independent|"
                    "single-bonus|opening-reward");
    f.dim_opt = sub->add_option("--dim", f.dim, "Paid dimension for single-bonus");
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve one payment plan and print its report");
  add_common(solve);
  add_plan(solve);

  CLI::App* compare = app.add_subcommand("compare", "Rank the six payment plans (CSV)");
  add_common(compare);
  compare->add_option("--mode", f.mode, "own|true");

  CLI::App* sweep = app.add_subcommand("sweep", "Run the configured parameter sweep (CSV)");
  add_common(sweep);
  sweep->add_option("--mode", f.mode, "own|true");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo check of the fog node's certainty equivalent");
  add_common(simulate);
  simulate->add_option("--plan", f.plan, "Plan to simulate");
  CLI::Option* sim_dim = simulate->add_option("--dim", f.dim, "Paid dimension for single-bonus");
  f.samples_opt = simulate->add_option("--samples", f.samples, "Number of draws");
  f.seed_opt = simulate->add_option("--seed", f.seed, "RNG seed");
  simulate->add_flag("--antithetic", f.antithetic, "Pair each draw with its mirror image");

  std::vector<const char*> argv{"fogpact"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*solve) return cmd_solve(f, out);
    if (*compare) return cmd_compare(f, out);
    if (*sweep) return cmd_sweep(f, out);
    if (*simulate) {
      f.dim_opt = sim_dim;
      return cmd_simulate(f, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kUsage;
}

}  // namespace fogpact::cli
