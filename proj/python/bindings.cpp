#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fogpact/error.hpp"
#include "fogpact/experiments.hpp"
#include "fogpact/monte_carlo.hpp"
#include "fogpact/scenario.hpp"
#include "fogpact/solver.hpp"

namespace py = pybind11;
using namespace fogpact;

namespace {

std::vector<Vector> rows_of(const SymMatrix& m) {
  std::vector<Vector> rows(m.size(), Vector(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) rows[i][j] = m(i, j);
  }
  return rows;
}

MarketInstance make_instance(const std::vector<Vector>& c, const std::vector<Vector>& sigma, Vector beta,
                             double eta, double w_bar, bool allow_complementarity) {
  return MarketInstance::create(SymMatrix::from_rows(c), SymMatrix::from_rows(sigma), std::move(beta), eta,
                                w_bar, InstanceOptions{allow_complementarity});
}

py::dict report_dict(const SolveReport& r) {
  py::dict d;
  d["plan"] = plan_name(r.plan);
  d["t"] = r.contract.t;
  d["s"] = r.contract.s;
  d["a"] = r.effort.a;
  d["no_utility"] = r.no_utility;
  d["fn_ce"] = r.fn_ce;
  d["welfare"] = r.welfare;
  d["bonus_dim"] = r.bonus_dim ? py::cast(*r.bonus_dim) : py::none();
  return d;
}

Parameter parse_parameter(const std::string& name, std::size_t index) {
  if (name == "eta") return Parameter::eta();
  if (name == "c_ii") return Parameter::cost(index, index);
  if (name == "sigma_ii") return Parameter::noise(index, index);
  if (name == "beta_i") return Parameter::beta(index);
  throw Error(ErrorKind::InvalidSpec, "unknown parameter: " + name);
}

}  // namespace

PYBIND11_MODULE(_fogpact, m) {
  m.doc() = "Linear contracts for fog-node resource pricing";

  // Held for the life of the interpreter; the module keeps its own reference.
  static PyObject* error = py::exception<Error>(m, "FogpactError").release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error)(std::string(to_string(e.kind())) + ": " + e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error, exc.ptr());
    }
  });

  py::class_<MarketInstance>(m, "MarketInstance")
      .def(py::init(&make_instance), py::arg("c"), py::arg("sigma"), py::arg("beta"), py::arg("eta"),
           py::arg("w_bar") = 0.0, py::arg("allow_complementarity") = false)
      .def_property_readonly("dimension", &MarketInstance::dimension)
      .def_property_readonly("c", [](const MarketInstance& i) { return rows_of(i.cost()); })
      .def_property_readonly("sigma", [](const MarketInstance& i) { return rows_of(i.noise()); })
      .def_property_readonly("beta", &MarketInstance::beta)
      .def_property_readonly("eta", &MarketInstance::eta)
      .def_property_readonly("w_bar", &MarketInstance::w_bar)
      .def("with_eta", &MarketInstance::with_eta)
      .def("with_w_bar", &MarketInstance::with_w_bar)
      .def("digest", &MarketInstance::digest);

  m.def("plans", [] {
    std::vector<std::string> names;
    for (const PlanKind& p : all_plans()) names.push_back(plan_name(p));
    return names;
  });
  m.def(
      "solve",
      [](const MarketInstance& inst, const std::string& plan, bool true_instance) {
        SolveReport r = solve_plan(inst, parse_plan(plan));
        if (true_instance) r = evaluate_on(inst, r);
        return report_dict(r);
      },
      py::arg("instance"), py::arg("plan") = "general", py::arg("true_instance") = false);
  m.def(
      "solve_numeric_oracle",
      [](const MarketInstance& inst, std::optional<std::size_t> axis) {
        return report_dict(solve_numeric_oracle(inst, axis));
      },
      py::arg("instance"), py::arg("axis") = py::none());
  m.def(
      "rank_plans",
      [](const MarketInstance& inst, const std::string& mode) {
        std::vector<std::pair<std::string, double>> out;
        for (const RankedPlan& r : rank_plans(inst, parse_mode(mode))) out.emplace_back(plan_name(r.plan), r.no_utility);
        return out;
      },
      py::arg("instance"), py::arg("mode") = "own");
  m.def(
      "sensitivity",
      [](const MarketInstance& inst, const std::string& parameter, std::size_t index) {
        return comparative_static_sensitivity(inst, parse_parameter(parameter, index));
      },
      py::arg("instance"), py::arg("parameter"), py::arg("index") = 0);
  m.def(
      "sweep",
      [](const MarketInstance& inst, const std::string& parameter, std::vector<double> values,
         std::optional<std::vector<std::string>> plans, const std::string& mode, std::size_t index) {
        SweepSpec spec{inst, parse_parameter(parameter, index), std::move(values), all_plans(), parse_mode(mode)};
        if (plans) {
          spec.plans.clear();
          for (const std::string& p : *plans) spec.plans.push_back(parse_plan(p));
        }
        py::list rows;
        for (const SweepRow& row : run_sweep(spec).rows) {
          py::dict d;
          d["param_value"] = row.param_value;
          d["plan"] = plan_name(row.plan);
          d["no_utility"] = row.no_utility;
          d["fn_ce"] = row.fn_ce;
          d["welfare"] = row.welfare;
          d["t"] = row.t;
          d["s"] = row.s;
          rows.append(d);
        }
        return rows;
      },
      py::arg("instance"), py::arg("parameter"), py::arg("values"), py::arg("plans") = py::none(),
      py::arg("mode") = "own", py::arg("index") = 0);
  m.def(
      "simulate",
      [](const MarketInstance& inst, double t, Vector s, Vector a, std::uint64_t samples, std::uint64_t seed,
         bool antithetic) {
        SimConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        cfg.antithetic = antithetic;
        SimResult r;
        {
          py::gil_scoped_release release;
          r = estimate_fn_utility(inst, Contract{t, std::move(s)}, EffortVector{std::move(a)}, cfg);
        }
        py::dict d;
        d["mean_fn_utility"] = r.mean_fn_utility;
        d["stderr_fn_utility"] = r.stderr_fn_utility;
        d["mean_payment"] = r.mean_payment;
        d["stderr_payment"] = r.stderr_payment;
        d["mean_qos"] = r.mean_qos;
        d["samples_used"] = r.samples_used;
        return d;
      },
      py::arg("instance"), py::arg("t"), py::arg("s"), py::arg("a"), py::arg("samples") = 100000,
      py::arg("seed") = 0, py::arg("antithetic") = false);
  m.def("fn_certainty_equivalent", [](const MarketInstance& inst, double t, Vector s, Vector a) {
    return fn_certainty_equivalent(inst, Contract{t, std::move(s)}, EffortVector{std::move(a)});
  });
  m.def(
      "profile_to_effort",
      [](double bandwidth_hz, double cpu_cycles_per_s, double distance_m, double data_bits, double tx_power_w,
         double noise_density_w_per_hz, double cycles_per_bit, double pathloss_exponent) {
        return profile_to_effort(ResourceProfile{bandwidth_hz, cpu_cycles_per_s, distance_m, data_bits, tx_power_w,
                                                 noise_density_w_per_hz, cycles_per_bit, pathloss_exponent})
            .a;
      },
      py::arg("bandwidth_hz") = 1e6, py::arg("cpu_cycles_per_s") = 1e9, py::arg("distance_m") = 1.0,
      py::arg("data_bits") = 1e6, py::arg("tx_power_w") = 1.0, py::arg("noise_density_w_per_hz") = 1e-6,
      py::arg("cycles_per_bit") = 1000.0, py::arg("pathloss_exponent") = 2.0);
  m.def("reference_fixture", &reference_fixture);
}
