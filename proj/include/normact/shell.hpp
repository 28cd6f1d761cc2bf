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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "normact/bounds.hpp"
#include "normact/hamspec.hpp"
#include "normact/scenarios.hpp"

namespace normact {

/// Built-in scenario selected by name.
struct ScenarioRequest {
  ScenarioKind kind = ScenarioKind::decay;
  std::map<std::string, double> params;
  std::string schedule = "linear";  // cooling only

  bool operator==(const ScenarioRequest&) const = default;
};

/// Matrix schedule given inline in the config.
struct InlineSpec {
  enum class Kind { constant, piecewise, sampled };

  Kind kind = Kind::constant;
  double horizon = 1.0;
  std::vector<double> nodes;  // durations (piecewise) or times (sampled)
  std::vector<ComplexMatrix> matrices;

  bool operator==(const InlineSpec& other) const;
};

struct SweepBlock {
  std::string parameter;
  std::vector<double> values;

  bool operator==(const SweepBlock&) const = default;
};

struct AuditConfig {
  std::variant<ScenarioRequest, InlineSpec> source;
  NormKind norm = NormKind::spectral;
  double tol = 1e-8;
  std::string output;
  std::optional<SweepBlock> sweep;

  bool operator==(const AuditConfig&) const = default;
};

enum ExitCode : int {
  kExitPass = 0,
  kExitViolation = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
};

/// JSON encoding helpers: complex numbers are [re, im], matrices are
/// row-major arrays of rows.
nlohmann::json complex_to_json(Complex z);
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const AuditConfig& config);
/// Throws ConfigError on any schema violation.
AuditConfig config_from_json(const nlohmann::json& j);
AuditConfig load_config(const std::filesystem::path& path);

/// Checks the semantic invariants: tol in (0, 1e-2], sweep only over a
/// parameter of the chosen scenario. Throws ConfigError.
void validate_config(const AuditConfig& config);

/// The scenario behind the config, if it names one. BadParam is rethrown as
/// ConfigError.
std::optional<Scenario> build_scenario(const AuditConfig& config);
HamiltonianSpec build_spec(const AuditConfig& config);

nlohmann::json report_to_json(const BoundReport& report);
nlohmann::json residuals_to_json(const ResidualTable& table);

struct AuditOutcome {
  nlohmann::json document;
  int exit_code = kExitPass;
};

/// One audit: report plus residuals against the closed forms when the spec
/// is a built-in scenario. Throws ConfigError for invalid configs; numerical
/// failures are recorded in the document with exit code 3. The only
/// non-deterministic field is "generated_at".
AuditOutcome run_audit(const AuditConfig& config);

struct SweepRow {
  double value = 0.0;
  std::optional<BoundReport> report;
  std::string status;
  int exit_code = kExitPass;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::string csv;
  int exit_code = kExitPass;
};

/// Fixed CSV header of sweep tables.
inline constexpr const char* kSweepHeader =
    "param,action_full,action_traceless,b_basic,b_inverse,b_max,b_geomean,"
    "b_eigen,slack,holds,status";

/// Audits every sweep value, at most `max_threads` at a time. Rows come back
/// in input order; per-row failures land in the status column.
SweepOutcome run_sweep(const AuditConfig& config, unsigned max_threads);

/// Thread cap from NORMACT_THREADS, else the hardware concurrency.
unsigned sweep_thread_cap();

std::string format_sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace normact
