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


#include "normact/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "normact/propagate.hpp"

namespace normact {

namespace {

constexpr Complex kI{0.0, 1.0};
// pi = kPiHi + kPiLo to about 32 digits; keeps pi - theta accurate near pi.
constexpr double kPiHi = std::numbers::pi;
constexpr double kPiLo = 1.2246467991473532e-16;

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw BadParam(std::string(what) + " must be positive and finite");
  }
}

// cos(theta/2) and sin(theta/2) without cancellation as theta -> pi.
struct HalfAngle {
  double cos;
  double sin;
};

HalfAngle half_angle(double theta) {
  const double gap = (kPiHi - theta) + kPiLo;
  return {std::sin(0.5 * gap), std::cos(0.5 * gap)};
}

// Closed-form normalized propagator of the cooling scenario from theta = 0.
ComplexMatrix cooling_propagator(double theta) {
  const auto [c, s] = half_angle(theta);
  ComplexMatrix u(2, 2);
  u << 1.0, s, 0.0, c;
  return u / std::sqrt(c);
}

// ||m||_s for a 2x2 matrix with |det m| = 1, from s^2 + s^-2 = ||m||_F^2.
double unimodular_spectral_norm(const ComplexMatrix& m) {
  const double f2 = m.squaredNorm();
  const double disc = std::sqrt(std::max(f2 * f2 - 4.0, 0.0));
  return std::sqrt(0.5 * (f2 + disc));
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::decay:
      return "decay";
    case ScenarioKind::cooling:
      return "cooling";
    case ScenarioKind::exceptional:
      return "exceptional";
  }
  return "decay";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "decay") return ScenarioKind::decay;
  if (name == "cooling") return ScenarioKind::cooling;
  if (name == "exceptional") return ScenarioKind::exceptional;
  throw BadParam("unknown scenario '" + std::string(name) + "'");
}

CoolingSchedule CoolingSchedule::linear(double start, double end,
                                        double horizon) {
  const double rate = (end - start) / horizon;
  return {"linear", [=](double t) { return start + rate * t; },
          [=](double) { return rate; }};
}

CoolingSchedule CoolingSchedule::smoothstep(double start, double end,
                                            double horizon) {
  const double span = end - start;
  return {"smoothstep",
          [=](double t) {
            const double x = t / horizon;
            return start + span * x * x * (3.0 - 2.0 * x);
          },
          [=](double t) {
            const double x = t / horizon;
            return span * 6.0 * x * (1.0 - x) / horizon;
          }};
}

double cooling_action(double theta) {
  const auto [c, s] = half_angle(theta);
  return 0.25 * theta + 0.5 * std::log((1.0 + s) / c);
}

double cooling_bound(double theta) {
  const auto [c, s] = half_angle(theta);
  return 0.5 * std::log((1.0 + s) / c);
}

double exceptional_bound(double x) {
  x = std::abs(x);
  return 0.5 * std::log(1.0 + 0.5 * x * (x + std::sqrt(4.0 + x * x)));
}

Scenario scenario_decay(double gamma, double horizon) {
  require_positive(gamma, "decay rate");
  require_positive(horizon, "horizon");
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(1, 1) = -kI * gamma;

  const double gt = gamma * horizon;
  ClosedForms cf;
  cf.action_full = gt;
  cf.action_traceless = 0.5 * gt;
  cf.b_basic = 0.5 * gt;
  cf.b_inverse = 0.5 * gt;
  cf.b_inverse_mp = gt;
  cf.b_eigen = 0.5 * gt;
  cf.u_matrix = ComplexMatrix::Zero(2, 2);
  cf.u_matrix(0, 0) = 1.0;
  cf.u_matrix(1, 1) = std::exp(-gt);
  cf.u_norm_matrix = ComplexMatrix::Zero(2, 2);
  cf.u_norm_matrix(0, 0) = std::exp(0.5 * gt);
  cf.u_norm_matrix(1, 1) = std::exp(-0.5 * gt);

  return {ScenarioKind::decay,
          {{"gamma", gamma}, {"T", horizon}},
          HamiltonianSpec::constant(std::move(h), horizon),
          std::move(cf)};
}

Scenario scenario_cooling(const CoolingSchedule& schedule, double horizon) {
  require_positive(horizon, "horizon");
  if (!schedule.theta || !schedule.rate) {
    throw BadParam("cooling schedule needs theta(t) and its rate");
  }
  constexpr int kProbe = 4096;
  double previous = schedule.theta(0.0);
  if (!(previous >= 0.0)) throw BadParam("cooling schedule needs theta(0) >= 0");
  for (int i = 0; i <= kProbe; ++i) {
    const double t = horizon * i / kProbe;
    const double th = schedule.theta(t);
    const double rate = schedule.rate(t);
    if (!std::isfinite(th) || !std::isfinite(rate)) {
      throw BadParam("cooling schedule is not finite at t = " +
                     std::to_string(t));
    }
    if (th < previous || rate < 0.0) {
      throw BadParam("cooling schedule must be non-decreasing");
    }
    previous = th;
  }
  const double theta0 = schedule.theta(0.0);
  const double theta_end = schedule.theta(horizon);
  if (!(theta_end < kPiHi)) {
    throw BadParam("cooling schedule must end below theta = pi");
  }

  auto fn = [schedule](double t) {
    const double th = schedule.theta(t);
    const double half_tan = 0.5 * std::tan(0.5 * th);
    ComplexMatrix h(2, 2);
    h << half_tan, 1.0, 0.0, -half_tan;
    return ComplexMatrix((0.5 * kI * schedule.rate(t)) * h);
  };

  // U(T) = U_c(theta(T)) U_c(theta(0))^-1; for unit determinant upper
  // triangular [[a, b], [0, d]] the inverse is [[d, -b], [0, a]].
  const ComplexMatrix start = cooling_propagator(theta0);
  ComplexMatrix start_inv(2, 2);
  start_inv << start(1, 1), -start(0, 1), 0.0, start(0, 0);
  const ComplexMatrix u = cooling_propagator(theta_end) * start_inv;

  ClosedForms cf;
  cf.action_traceless = cooling_action(theta_end) - cooling_action(theta0);
  cf.action_full = cf.action_traceless;
  cf.b_basic = theta0 == 0.0 ? cooling_bound(theta_end)
                             : std::log(unimodular_spectral_norm(u));
  cf.b_inverse = cf.b_basic;
  cf.b_inverse_mp = 2.0 * cf.b_basic;
  cf.b_eigen = 0.5 * std::log(half_angle(theta0).cos / half_angle(theta_end).cos);
  cf.u_matrix = u;
  cf.u_norm_matrix = u;

  return {ScenarioKind::cooling,
          {{"theta_0", theta0}, {"theta_T", theta_end}, {"T", horizon}},
          HamiltonianSpec::closed_form(2, horizon, std::move(fn),
                                       "cooling/" + schedule.label),
          std::move(cf)};
}

Scenario scenario_exceptional(double e0, double horizon) {
  require_positive(horizon, "horizon");
  if (!std::isfinite(e0)) throw BadParam("E0 must be finite");
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 1) = e0;

  const double x = std::abs(e0) * horizon;
  ClosedForms cf;
  cf.action_full = x;
  cf.action_traceless = x;
  cf.b_basic = exceptional_bound(x);
  cf.b_inverse = cf.b_basic;
  cf.b_inverse_mp = 2.0 * cf.b_basic;
  cf.b_eigen = 0.0;
  cf.u_matrix = ComplexMatrix::Identity(2, 2);
  cf.u_matrix(0, 1) = -kI * e0 * horizon;
  cf.u_norm_matrix = cf.u_matrix;

  return {ScenarioKind::exceptional,
          {{"E0", e0}, {"T", horizon}},
          HamiltonianSpec::constant(std::move(h), horizon),
          std::move(cf)};
}

std::vector<ParamInfo> scenario_parameters(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::decay:
      return {{"gamma", "decay rate of the second level (> 0)", std::nullopt},
              {"T", "evolution time (> 0)", 1.0}};
    case ScenarioKind::cooling:
      return {{"theta_T", "final mixing angle, in [theta_0, pi)", std::nullopt},
              {"theta_0", "initial mixing angle (>= 0)", 0.0},
              {"T", "evolution time (> 0)", 1.0}};
    case ScenarioKind::exceptional:
      return {{"E0", "off-diagonal coupling of the Jordan block", std::nullopt},
              {"T", "evolution time (> 0)", 1.0}};
  }
  return {};
}

Scenario make_scenario(ScenarioKind kind,
                       const std::map<std::string, double>& params,
                       std::string_view shape) {
  const auto infos = scenario_parameters(kind);
  for (const auto& [key, value] : params) {
    bool known = false;
    for (const auto& info : infos) known = known || info.name == key;
    if (!known) {
      throw BadParam("scenario '" + std::string(to_string(kind)) +
                     "' has no parameter '" + key + "'");
    }
  }
  auto get = [&](const std::string& key) {
    if (const auto it = params.find(key); it != params.end()) return it->second;
    for (const auto& info : infos) {
      if (info.name == key && info.default_value) return *info.default_value;
    }
    throw BadParam("scenario '" + std::string(to_string(kind)) +
                   "' needs parameter '" + key + "'");
  };

  switch (kind) {
    case ScenarioKind::decay:
      return scenario_decay(get("gamma"), get("T"));
    case ScenarioKind::cooling: {
      const double horizon = get("T");
      require_positive(horizon, "horizon");
      const double start = get("theta_0");
      const double end = get("theta_T");
      if (shape == "linear") {
        return scenario_cooling(CoolingSchedule::linear(start, end, horizon),
                                horizon);
      }
      if (shape == "smoothstep") {
        return scenario_cooling(
            CoolingSchedule::smoothstep(start, end, horizon), horizon);
      }
      throw BadParam("unknown cooling schedule '" + std::string(shape) + "'");
    }
    case ScenarioKind::exceptional:
      return scenario_exceptional(get("E0"), get("T"));
  }
  throw BadParam("unknown scenario");
}

ResidualTable scenario_residuals(const Scenario& s, const BoundReport& report,
                                 double tol) {
  ResidualTable table;
  auto add = [&](std::string field, double computed, double expected,
                 double residual, double scale) {
    const double threshold = 10.0 * tol * std::max(1.0, scale);
    table.push_back({std::move(field), computed, expected, residual, threshold,
                     residual <= threshold});
  };
  auto scalar = [&](std::string field, double computed, double expected) {
    add(std::move(field), computed, expected, std::abs(computed - expected),
        std::abs(expected));
  };
  auto matrix = [&](std::string field, const ComplexMatrix& computed,
                    const ComplexMatrix& expected) {
    add(std::move(field), computed.norm(), expected.norm(),
        (computed - expected).norm(), expected.norm());
  };

  const ClosedForms& cf = s.closed;
  if (report.norm_kind == NormKind::spectral) {
    scalar("action_full", report.action_full, cf.action_full);
    scalar("action_traceless", report.action_traceless, cf.action_traceless);
    scalar("b_basic", report.b_basic, cf.b_basic);
    if (report.b_inverse) scalar("b_inverse", *report.b_inverse, cf.b_inverse);
    if (report.b_inverse_mp) {
      scalar("b_inverse_mp", *report.b_inverse_mp, cf.b_inverse_mp);
    }
    if (report.b_eigen) scalar("b_eigen", *report.b_eigen, cf.b_eigen);
  }
  matrix("u_matrix", report.u, cf.u_matrix);
  matrix("u_norm_matrix", report.u_norm, cf.u_norm_matrix);
  return table;
}

ResidualTable verify_scenario(const Scenario& s, double tol) {
  const BoundReport report = audit(s.spec, NormKind::spectral, tol);
  ResidualTable table = scenario_residuals(s, report, tol);
  for (const auto& row : table) {
    if (!row.pass) throw OracleMismatch(row.field, table);
  }
  return table;
}

}  // namespace normact
