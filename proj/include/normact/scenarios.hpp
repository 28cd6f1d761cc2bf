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


#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "normact/bounds.hpp"
#include "normact/errors.hpp"
#include "normact/hamspec.hpp"

namespace normact {

enum class ScenarioKind { decay, cooling, exceptional };

std::string_view to_string(ScenarioKind kind);
/// Throws BadParam for unknown names.
ScenarioKind parse_scenario_kind(std::string_view name);

/// Mixing angle theta(t) of the cooling scenario together with its rate.
struct CoolingSchedule {
  std::string label;
  std::function<double(double)> theta;
  std::function<double(double)> rate;

  /// theta(t) = start + (end - start) t / T.
  static CoolingSchedule linear(double start, double end, double horizon);
  /// theta(t) = start + (end - start) s(t / T), s(x) = 3x^2 - 2x^3.
  static CoolingSchedule smoothstep(double start, double end, double horizon);
};

/// Exact values every scenario carries as an oracle for the numerical
/// pipeline (spectral norm).
struct ClosedForms {
  double action_full = 0.0;
  double action_traceless = 0.0;
  double b_basic = 0.0;    // ln ||U_norm||_s
  double b_inverse = 0.0;  // ln ||U_norm^-1||_s
  double b_inverse_mp = 0.0;  // ln ||U_MP^-1||_s
  double b_eigen = 0.0;
  ComplexMatrix u_matrix;
  ComplexMatrix u_norm_matrix;
};

struct Scenario {
  ScenarioKind kind;
  std::map<std::string, double> params;  // user-facing (rate, time) pairs
  HamiltonianSpec spec;
  ClosedForms closed;

  std::string name() const { return std::string(to_string(kind)); }
};

/// H = diag(0, -i gamma). Requires gamma > 0, T > 0.
Scenario scenario_decay(double gamma, double horizon);
/// Traceless two-level Hamiltonian that rotates one solution onto the other
/// as theta goes to pi. Requires a non-decreasing schedule with
/// theta(0) >= 0 and theta(T) < pi.
Scenario scenario_cooling(const CoolingSchedule& schedule, double horizon);
/// Jordan block H = [[0, e0], [0, 0]]. Requires T > 0.
Scenario scenario_exceptional(double e0, double horizon);

/// Closed-form action and bound of the cooling scenario started at theta = 0.
double cooling_action(double theta);
double cooling_bound(double theta);
/// ln ||U||_s of the exceptional-point propagator, x = |e0| T.
double exceptional_bound(double x);

struct ParamInfo {
  std::string name;
  std::string description;
  std::optional<double> default_value;
};

/// Named parameters accepted by make_scenario, in display order.
std::vector<ParamInfo> scenario_parameters(ScenarioKind kind);

/// Builds a scenario from named parameters. `shape` selects the cooling
/// schedule ("linear" or "smoothstep") and is ignored otherwise. Throws
/// BadParam for unknown or missing parameters.
Scenario make_scenario(ScenarioKind kind,
                       const std::map<std::string, double>& params,
                       std::string_view shape = "linear");

struct Residual {
  std::string field;
  double computed = 0.0;
  double expected = 0.0;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

using ResidualTable = std::vector<Residual>;

/// The audit disagrees with a closed form; carries the full table.
class OracleMismatch : public Error {
 public:
  OracleMismatch(const std::string& field, ResidualTable table)
      : Error("oracle mismatch in field '" + field + "'"),
        field_(field),
        table_(std::move(table)) {}

  const std::string& field() const { return field_; }
  const ResidualTable& table() const { return table_; }

 private:
  std::string field_;
  ResidualTable table_;
};

/// Compares a (spectral) audit report against the scenario's closed forms.
/// Thresholds are 10 tol, relative for values above one.
ResidualTable scenario_residuals(const Scenario& s, const BoundReport& report,
                                 double tol);

/// Runs the audit and throws OracleMismatch on the first failing field.
ResidualTable verify_scenario(const Scenario& s, double tol);

}  // namespace normact
