// Copyright 2026 The normact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "normact/bounds.hpp"
#include "normact/errors.hpp"
#include "normact/hamspec.hpp"
#include "normact/matlin.hpp"
#include "normact/propagate.hpp"
#include "normact/scenarios.hpp"
#include "normact/shell.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace normact {
namespace {

NormKind norm_arg(const std::string& name) { return parse_norm_kind(name); }

py::dict closed_forms_dict(const ClosedForms& cf) {
  py::dict d;
  d["action_full"] = cf.action_full;
  d["action_traceless"] = cf.action_traceless;
  d["b_basic"] = cf.b_basic;
  d["b_inverse"] = cf.b_inverse;
  d["b_inverse_mp"] = cf.b_inverse_mp;
  d["b_eigen"] = cf.b_eigen;
  d["u_matrix"] = cf.u_matrix;
  d["u_norm_matrix"] = cf.u_norm_matrix;
  return d;
}

py::list residuals_list(const ResidualTable& table) {
  py::list out;
  for (const auto& r : table) {
    out.append(py::dict("field"_a = r.field, "computed"_a = r.computed,
                        "expected"_a = r.expected, "residual"_a = r.residual,
                        "threshold"_a = r.threshold, "pass"_a = r.pass));
  }
  return out;
}

void bind_errors(py::module_& m) {
  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidMatrix>(m, "InvalidMatrix", base.ptr());
  py::register_exception<SingularMatrix>(m, "SingularMatrix", base.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<OutOfRange>(m, "OutOfRange", base.ptr());
  py::register_exception<NotDetNormalized>(m, "NotDetNormalized", base.ptr());
  py::register_exception<SingularPropagator>(m, "SingularPropagator", base.ptr());
  py::register_exception<BadParam>(m, "BadParam", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<OracleMismatch>(m, "OracleMismatch", base.ptr());
}

void bind_matlin(py::module_& m) {
  m.def("spectral_norm", &spectral_norm, "m"_a);
  m.def("frobenius_norm", &frobenius_norm, "m"_a);
  m.def("max_abs_entry", &max_abs_entry, "m"_a);
  m.def(
      "svd",
      [](const ComplexMatrix& a) {
        const SvdTriple t = svd(a);
        return py::make_tuple(t.q, t.w, t.p);
      },
      "m"_a, "Returns (q, w, p) with m = q @ diag(w) @ p^H, w descending.");
  m.def("det", &det, "m"_a);
  m.def("inverse", &inverse, "m"_a);
  m.def("matrix_exp", &matrix_exp, "m"_a);
  m.def("spectral_radius", &spectral_radius, "m"_a);
  m.def("traceless", &traceless, "h"_a);
}

void bind_hamspec(py::module_& m) {
  py::class_<HamiltonianSpec>(m, "HamiltonianSpec")
      .def_static("constant", &HamiltonianSpec::constant, "h"_a, "T"_a)
      .def_static(
          "piecewise",
          [](const std::vector<std::pair<double, ComplexMatrix>>& segs,
             std::optional<double> horizon) {
            std::vector<Segment> out;
            for (const auto& [d, h] : segs) out.push_back({d, h});
            return horizon ? HamiltonianSpec::piecewise(std::move(out), *horizon)
                           : HamiltonianSpec::piecewise(std::move(out));
          },
          "segments"_a, "T"_a = py::none())
      .def_static("sampled", &HamiltonianSpec::sampled, "times"_a,
                  "matrices"_a, "T"_a)
      .def_static(
          "closed_form",
          [](Eigen::Index dim, double horizon,
             std::function<ComplexMatrix(double)> fn, std::string label) {
            return HamiltonianSpec::closed_form(dim, horizon, std::move(fn),
                                                std::move(label));
          },
          "dim"_a, "T"_a, "fn"_a, "label"_a = "python")
      .def_property_readonly("dim", &HamiltonianSpec::dim)
      .def_property_readonly("horizon", &HamiltonianSpec::horizon)
      .def("evaluate", &HamiltonianSpec::evaluate, "t"_a);

  m.def(
      "norm_action",
      [](const HamiltonianSpec& spec, const std::string& norm,
         bool use_traceless, double tol) {
        py::gil_scoped_release release;
        return norm_action(spec, norm_arg(norm), use_traceless, tol);
      },
      "spec"_a, "norm"_a = "spectral", "use_traceless"_a = true,
      "tol"_a = 1e-8);
}

void bind_propagate(py::module_& m) {
  py::class_<Propagator>(m, "Propagator")
      .def_readonly("u", &Propagator::u)
      .def_readonly("u_norm", &Propagator::u_norm)
      .def_readonly("t_final", &Propagator::t_final)
      .def_readonly("det_u", &Propagator::det_u)
      .def_readonly("trace_integral", &Propagator::trace_integral)
      .def_readonly("steps", &Propagator::steps)
      .def_readonly("est_error", &Propagator::est_error);

  m.def(
      "propagate",
      [](const HamiltonianSpec& spec, double tol) {
        py::gil_scoped_release release;
        return propagate(spec, tol);
      },
      "spec"_a, "tol"_a = 1e-8);
  m.def("normalize_det",
        py::overload_cast<const Propagator&>(&normalize_det), "p"_a);
  m.def("normalize_det",
        py::overload_cast<const ComplexMatrix&>(&normalize_det), "u"_a);
  m.def("marginally_passive", &marginally_passive, "u"_a);
  m.def("liouville_residual", &liouville_residual, "p"_a);
}

void bind_bounds(py::module_& m) {
  m.def("bound_basic", [](const ComplexMatrix& u, const std::string& n) {
    return bound_basic(u, norm_arg(n));
  }, "u"_a, "norm"_a = "spectral");
  m.def("bound_inverse", [](const ComplexMatrix& u, const std::string& n) {
    return bound_inverse(u, norm_arg(n));
  }, "u"_a, "norm"_a = "spectral");
  m.def("bound_max", [](const ComplexMatrix& u, const std::string& n) {
    return bound_max(u, norm_arg(n));
  }, "u"_a, "norm"_a = "spectral");
  m.def("bound_geomean", [](const ComplexMatrix& u, const std::string& n) {
    return bound_geomean(u, norm_arg(n));
  }, "u"_a, "norm"_a = "spectral");
  m.def("bound_eigen", &bound_eigen, "u"_a);
  m.def("is_unitary_by_norm", &is_unitary_by_norm, "u_norm"_a, "tol"_a);
  m.def("geometric_mean_amplification", &geometric_mean_amplification, "u"_a);
  m.def("mp_tradeoff", &mp_tradeoff, "u"_a);
  m.def(
      "purely_nonunitary_part",
      [](const ComplexMatrix& u) {
        const auto part = purely_nonunitary_part(u);
        return py::make_tuple(part.singular_values, part.w());
      },
      "u_norm"_a, "Returns (singular_values, W).");

  py::class_<BoundReport>(m, "BoundReport")
      .def_property_readonly("norm_kind", [](const BoundReport& r) {
        return std::string(to_string(r.norm_kind));
      })
      .def_readonly("action_full", &BoundReport::action_full)
      .def_readonly("action_traceless", &BoundReport::action_traceless)
      .def_readonly("b_basic", &BoundReport::b_basic)
      .def_readonly("b_inverse", &BoundReport::b_inverse)
      .def_readonly("b_max", &BoundReport::b_max)
      .def_readonly("b_geomean", &BoundReport::b_geomean)
      .def_readonly("b_eigen", &BoundReport::b_eigen)
      .def_readonly("slack", &BoundReport::slack)
      .def_readonly("holds", &BoundReport::holds)
      .def_readonly("b_basic_full", &BoundReport::b_basic_full)
      .def_readonly("b_inverse_full", &BoundReport::b_inverse_full)
      .def_readonly("b_max_full", &BoundReport::b_max_full)
      .def_readonly("b_inverse_mp", &BoundReport::b_inverse_mp)
      .def_readonly("slack_full", &BoundReport::slack_full)
      .def_readonly("holds_full", &BoundReport::holds_full)
      .def_readonly("mean_amp", &BoundReport::mean_amp)
      .def_readonly("mp_tradeoff", &BoundReport::mp_tradeoff)
      .def_readonly("singular_values", &BoundReport::singular_values)
      .def_readonly("u", &BoundReport::u)
      .def_readonly("u_norm", &BoundReport::u_norm)
      .def_readonly("liouville_residual", &BoundReport::liouville_residual)
      .def_readonly("notes", &BoundReport::notes)
      .def("to_json", [](const BoundReport& r) { return report_to_json(r).dump(); });

  m.def(
      "audit",
      [](const HamiltonianSpec& spec, const std::string& norm, double tol) {
        py::gil_scoped_release release;
        return audit(spec, norm_arg(norm), tol);
      },
      "spec"_a, "norm"_a = "spectral", "tol"_a = 1e-8);
}

void bind_scenarios(py::module_& m) {
  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("name", &Scenario::name)
      .def_readonly("params", &Scenario::params)
      .def_readonly("spec", &Scenario::spec)
      .def_property_readonly("closed_forms", [](const Scenario& s) {
        return closed_forms_dict(s.closed);
      });

  m.def("scenario_decay", &scenario_decay, "gamma"_a, "T"_a);
  m.def(
      "scenario_cooling",
      [](double theta_end, double horizon, double theta_start,
         const std::string& shape) {
        return make_scenario(ScenarioKind::cooling,
                             {{"theta_T", theta_end},
                              {"theta_0", theta_start},
                              {"T", horizon}},
                             shape);
      },
      "theta_T"_a, "T"_a = 1.0, "theta_0"_a = 0.0, "shape"_a = "linear");
  m.def("scenario_exceptional", &scenario_exceptional, "E0"_a, "T"_a);
  m.def(
      "verify_scenario",
      [](const Scenario& s, double tol) {
        ResidualTable table;
        {
          py::gil_scoped_release release;
          table = verify_scenario(s, tol);
        }
        return residuals_list(table);
      },
      "scenario"_a, "tol"_a = 1e-8);
  m.def("cooling_action", &cooling_action, "theta"_a);
  m.def("cooling_bound", &cooling_bound, "theta"_a);
  m.def("exceptional_bound", &exceptional_bound, "x"_a);
}

void bind_shell(py::module_& m) {
  m.def(
      "_run_audit_json",
      [](const std::string& config_json) {
        const auto config = config_from_json(nlohmann::json::parse(config_json));
        AuditOutcome outcome;
        {
          py::gil_scoped_release release;
          outcome = run_audit(config);
        }
        return py::make_tuple(outcome.document.dump(), outcome.exit_code);
      },
      "config_json"_a);
  m.def(
      "_run_sweep_json",
      [](const std::string& config_json, unsigned threads) {
        const auto config = config_from_json(nlohmann::json::parse(config_json));
        SweepOutcome outcome;
        {
          py::gil_scoped_release release;
          outcome = run_sweep(config, threads);
        }
        return py::make_tuple(outcome.csv, outcome.exit_code);
      },
      "config_json"_a, "threads"_a = 1);
}

}  // namespace
}  // namespace normact

PYBIND11_MODULE(_core, m) {
  m.doc() = "Norm-action resource bounds for non-Hermitian evolution";
  m.attr("__version__") = "0.1.0";
  normact::bind_errors(m);
  normact::bind_matlin(m);
  normact::bind_hamspec(m);
  normact::bind_propagate(m);
  normact::bind_bounds(m);
  normact::bind_scenarios(m);
  normact::bind_shell(m);
}
