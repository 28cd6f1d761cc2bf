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


#include "normact/shell.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include "normact/errors.hpp"

namespace normact {

using nlohmann::json;

namespace {

std::string_view to_string(InlineSpec::Kind kind) {
  switch (kind) {
    case InlineSpec::Kind::constant:
      return "constant";
    case InlineSpec::Kind::piecewise:
      return "piecewise";
    case InlineSpec::Kind::sampled:
      return "sampled";
  }
  return "constant";
}

InlineSpec::Kind parse_inline_kind(const std::string& name) {
  if (name == "constant") return InlineSpec::Kind::constant;
  if (name == "piecewise") return InlineSpec::Kind::piecewise;
  if (name == "sampled") return InlineSpec::Kind::sampled;
  throw ConfigError("unknown hamiltonian kind '" + name + "'");
}

void require_keys(const json& j, std::initializer_list<std::string_view> allowed,
                  std::string_view where) {
  if (!j.is_object()) {
    throw ConfigError(std::string(where) + " must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " +
                        std::string(where));
    }
  }
}

double number_at(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError(std::string(where) + "." + key + " must be a number");
  }
  return j.at(key).get<double>();
}

std::vector<double> numbers_at(const json& j, const char* key,
                               std::string_view where) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ConfigError(std::string(where) + "." + key +
                      " must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) {
      throw ConfigError(std::string(where) + "." + key +
                        " must be an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

// CSV field quoting for free-text status messages.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n') ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

bool InlineSpec::operator==(const InlineSpec& other) const {
  if (kind != other.kind || horizon != other.horizon || nodes != other.nodes ||
      matrices.size() != other.matrices.size()) {
    return false;
  }
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const auto& a = matrices[i];
    const auto& b = other.matrices[i];
    if (a.rows() != b.rows() || a.cols() != b.cols() || a != b) return false;
  }
  return true;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError("matrix must be a non-empty array of rows");
  }
  const auto n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ConfigError("matrix must be square");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& z = row[static_cast<std::size_t>(k)];
      if (z.is_number()) {
        m(i, k) = z.get<double>();
      } else if (z.is_array() && z.size() == 2 && z[0].is_number() &&
                 z[1].is_number()) {
        m(i, k) = Complex(z[0].get<double>(), z[1].get<double>());
      } else {
        throw ConfigError("matrix entries must be [re, im] pairs");
      }
    }
  }
  if (!m.allFinite()) throw ConfigError("matrix entries must be finite");
  return m;
}

json config_to_json(const AuditConfig& config) {
  json j;
  if (const auto* req = std::get_if<ScenarioRequest>(&config.source)) {
    json params = json::object();
    for (const auto& [k, v] : req->params) params[k] = v;
    j["scenario"] = {{"name", std::string(to_string(req->kind))},
                     {"params", params},
                     {"schedule", req->schedule}};
  } else {
    const auto& spec = std::get<InlineSpec>(config.source);
    json h = {{"kind", std::string(to_string(spec.kind))}, {"T", spec.horizon}};
    switch (spec.kind) {
      case InlineSpec::Kind::constant:
        h["matrix"] = matrix_to_json(spec.matrices.at(0));
        break;
      case InlineSpec::Kind::piecewise: {
        json segs = json::array();
        for (std::size_t i = 0; i < spec.matrices.size(); ++i) {
          segs.push_back({{"duration", spec.nodes.at(i)},
                          {"matrix", matrix_to_json(spec.matrices[i])}});
        }
        h["segments"] = std::move(segs);
        break;
      }
      case InlineSpec::Kind::sampled: {
        json mats = json::array();
        for (const auto& m : spec.matrices) mats.push_back(matrix_to_json(m));
        h["times"] = spec.nodes;
        h["matrices"] = std::move(mats);
        break;
      }
    }
    j["hamiltonian"] = std::move(h);
  }
  j["norm"] = std::string(to_string(config.norm));
  j["tol"] = config.tol;
  j["output"] = config.output;
  if (config.sweep) {
    j["sweep"] = {{"parameter", config.sweep->parameter},
                  {"values", config.sweep->values}};
  }
  return j;
}

AuditConfig config_from_json(const json& j) {
  require_keys(j, {"scenario", "hamiltonian", "norm", "tol", "output", "sweep"},
               "config");
  AuditConfig config;
  if (j.contains("scenario") == j.contains("hamiltonian")) {
    throw ConfigError("config needs exactly one of 'scenario' or 'hamiltonian'");
  }

  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    require_keys(s, {"name", "params", "schedule"}, "scenario");
    if (!s.contains("name") || !s.at("name").is_string()) {
      throw ConfigError("scenario.name must be a string");
    }
    ScenarioRequest req;
    try {
      req.kind = parse_scenario_kind(s.at("name").get<std::string>());
    } catch (const BadParam& e) {
      throw ConfigError(e.what());
    }
    if (s.contains("params")) {
      if (!s.at("params").is_object()) {
        throw ConfigError("scenario.params must be an object");
      }
      for (const auto& item : s.at("params").items()) {
        if (!item.value().is_number()) {
          throw ConfigError("scenario.params." + item.key() +
                            " must be a number");
        }
        req.params[item.key()] = item.value().get<double>();
      }
    }
    if (s.contains("schedule")) {
      if (!s.at("schedule").is_string()) {
        throw ConfigError("scenario.schedule must be a string");
      }
      req.schedule = s.at("schedule").get<std::string>();
    }
    config.source = std::move(req);
  } else {
    const auto& h = j.at("hamiltonian");
    require_keys(h, {"kind", "T", "matrix", "segments", "times", "matrices"},
                 "hamiltonian");
    if (!h.contains("kind") || !h.at("kind").is_string()) {
      throw ConfigError("hamiltonian.kind must be a string");
    }
    InlineSpec spec;
    spec.kind = parse_inline_kind(h.at("kind").get<std::string>());
    switch (spec.kind) {
      case InlineSpec::Kind::constant:
        spec.horizon = number_at(h, "T", "hamiltonian");
        if (!h.contains("matrix")) throw ConfigError("hamiltonian.matrix missing");
        spec.matrices.push_back(matrix_from_json(h.at("matrix")));
        break;
      case InlineSpec::Kind::piecewise: {
        if (!h.contains("segments") || !h.at("segments").is_array()) {
          throw ConfigError("hamiltonian.segments must be an array");
        }
        double total = 0.0;
        for (const auto& seg : h.at("segments")) {
          require_keys(seg, {"duration", "matrix"}, "segment");
          spec.nodes.push_back(number_at(seg, "duration", "segment"));
          total += spec.nodes.back();
          if (!seg.contains("matrix")) throw ConfigError("segment.matrix missing");
          spec.matrices.push_back(matrix_from_json(seg.at("matrix")));
        }
        spec.horizon = h.contains("T") ? number_at(h, "T", "hamiltonian") : total;
        break;
      }
      case InlineSpec::Kind::sampled: {
        spec.horizon = number_at(h, "T", "hamiltonian");
        spec.nodes = numbers_at(h, "times", "hamiltonian");
        if (!h.contains("matrices") || !h.at("matrices").is_array()) {
          throw ConfigError("hamiltonian.matrices must be an array");
        }
        for (const auto& m : h.at("matrices")) {
          spec.matrices.push_back(matrix_from_json(m));
        }
        break;
      }
    }
    config.source = std::move(spec);
  }

  if (j.contains("norm")) {
    if (!j.at("norm").is_string()) throw ConfigError("norm must be a string");
    try {
      config.norm = parse_norm_kind(j.at("norm").get<std::string>());
    } catch (const BadParam& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("tol")) config.tol = number_at(j, "tol", "config");
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output must be a string");
    config.output = j.at("output").get<std::string>();
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    require_keys(s, {"parameter", "values"}, "sweep");
    if (!s.contains("parameter") || !s.at("parameter").is_string()) {
      throw ConfigError("sweep.parameter must be a string");
    }
    config.sweep = SweepBlock{s.at("parameter").get<std::string>(),
                              numbers_at(s, "values", "sweep")};
  }
  validate_config(config);
  return config;
}

AuditConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " +
                      e.what());
  }
  return config_from_json(j);
}

void validate_config(const AuditConfig& config) {
  if (!(config.tol > 0.0 && config.tol <= 1e-2)) {
    throw ConfigError("tol must lie in (0, 1e-2], got " +
                      format_number(config.tol));
  }
  if (!config.sweep) return;
  const auto* req = std::get_if<ScenarioRequest>(&config.source);
  if (req == nullptr) {
    throw ConfigError("sweeps need a built-in scenario");
  }
  const auto infos = scenario_parameters(req->kind);
  const bool known = std::any_of(infos.begin(), infos.end(), [&](const auto& p) {
    return p.name == config.sweep->parameter;
  });
  if (!known) {
    throw ConfigError("scenario '" + std::string(to_string(req->kind)) +
                      "' has no parameter '" + config.sweep->parameter + "'");
  }
}

std::optional<Scenario> build_scenario(const AuditConfig& config) {
  const auto* req = std::get_if<ScenarioRequest>(&config.source);
  if (req == nullptr) return std::nullopt;
  try {
    return make_scenario(req->kind, req->params, req->schedule);
  } catch (const BadParam& e) {
    throw ConfigError(e.what());
  }
}

HamiltonianSpec build_spec(const AuditConfig& config) {
  if (auto s = build_scenario(config)) return s->spec;
  const auto& spec = std::get<InlineSpec>(config.source);
  try {
    switch (spec.kind) {
      case InlineSpec::Kind::constant:
        return HamiltonianSpec::constant(spec.matrices.at(0), spec.horizon);
      case InlineSpec::Kind::piecewise: {
        if (spec.nodes.size() != spec.matrices.size()) {
          throw ConfigError("each segment needs a duration and a matrix");
        }
        std::vector<Segment> segs;
        for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
          segs.push_back({spec.nodes[i], spec.matrices[i]});
        }
        return HamiltonianSpec::piecewise(std::move(segs), spec.horizon);
      }
      case InlineSpec::Kind::sampled:
        return HamiltonianSpec::sampled(spec.nodes, spec.matrices, spec.horizon);
    }
  } catch (const BadParam& e) {
    throw ConfigError(e.what());
  } catch (const InvalidMatrix& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unsupported hamiltonian kind");
}

json report_to_json(const BoundReport& r) {
  json singular = json::array();
  for (double s : r.singular_values) singular.push_back(s);
  return {
      {"norm_kind", std::string(to_string(r.norm_kind))},
      {"action_full", r.action_full},
      {"action_traceless", r.action_traceless},
      {"b_basic", r.b_basic},
      {"b_inverse", optional_number(r.b_inverse)},
      {"b_max", optional_number(r.b_max)},
      {"b_geomean", optional_number(r.b_geomean)},
      {"b_eigen", optional_number(r.b_eigen)},
      {"slack", r.slack},
      {"holds", r.holds},
      {"b_basic_full", r.b_basic_full},
      {"b_inverse_full", optional_number(r.b_inverse_full)},
      {"b_max_full", optional_number(r.b_max_full)},
      {"b_inverse_mp", optional_number(r.b_inverse_mp)},
      {"slack_full", r.slack_full},
      {"holds_full", r.holds_full},
      {"mean_amp", r.mean_amp},
      {"mp_tradeoff", optional_number(r.mp_tradeoff)},
      {"singular_values", singular},
      {"u", matrix_to_json(r.u)},
      {"u_norm", matrix_to_json(r.u_norm)},
      {"det_u", complex_to_json(r.det_u)},
      {"trace_integral", complex_to_json(r.trace_integral)},
      {"liouville_residual", r.liouville_residual},
      {"est_error", r.est_error},
      {"steps", r.steps},
      {"notes", r.notes},
  };
}

json residuals_to_json(const ResidualTable& table) {
  json out = json::array();
  for (const auto& row : table) {
    out.push_back({{"field", row.field},
                   {"computed", row.computed},
                   {"expected", row.expected},
                   {"residual", row.residual},
                   {"threshold", row.threshold},
                   {"pass", row.pass}});
  }
  return out;
}

AuditOutcome run_audit(const AuditConfig& config) {
  validate_config(config);
  const auto scenario = build_scenario(config);
  const HamiltonianSpec spec = scenario ? scenario->spec : build_spec(config);

  AuditOutcome out;
  json& doc = out.document;
  doc["tool"] = "normact";
  doc["generated_at"] = utc_timestamp();
  doc["config"] = config_to_json(config);

  try {
    const BoundReport report = audit(spec, config.norm, config.tol);
    doc["report"] = report_to_json(report);
    bool residuals_pass = true;
    doc["residuals"] = json::array();
    if (scenario) {
      const auto table = scenario_residuals(*scenario, report, config.tol);
      for (const auto& row : table) residuals_pass = residuals_pass && row.pass;
      doc["residuals"] = residuals_to_json(table);
    }
    out.exit_code = (report.holds && residuals_pass) ? kExitPass : kExitViolation;
    doc["status"] = out.exit_code == kExitPass
                        ? "pass"
                        : (report.holds ? "oracle_mismatch" : "violation");
  } catch (const Error& e) {
    out.exit_code = kExitNumerical;
    doc["status"] = "numerical_failure";
    doc["error"] = e.what();
  }
  doc["exit_code"] = out.exit_code;
  return out;
}

unsigned sweep_thread_cap() {
  unsigned cap = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NORMACT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) cap = static_cast<unsigned>(v);
  }
  return cap;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepHeader << '\n';
  for (const auto& row : rows) {
    out << format_number(row.value) << ',';
    if (row.report) {
      const auto& r = *row.report;
      out << format_number(r.action_full) << ','
          << format_number(r.action_traceless) << ','
          << format_number(r.b_basic) << ',' << format_optional(r.b_inverse)
          << ',' << format_optional(r.b_max) << ','
          << format_optional(r.b_geomean) << ',' << format_optional(r.b_eigen)
          << ',' << format_number(r.slack) << ','
          << (r.holds ? "true" : "false");
    } else {
      out << ",,,,,,,,";
    }
    out << ',' << csv_field(row.status) << '\n';
  }
  return out.str();
}

SweepOutcome run_sweep(const AuditConfig& config, unsigned max_threads) {
  validate_config(config);
  if (!config.sweep) throw ConfigError("config has no sweep block");
  const auto& req = std::get<ScenarioRequest>(config.source);
  const auto& values = config.sweep->values;

  SweepOutcome out;
  out.rows.resize(values.size());

  auto run_row = [&](std::size_t i) {
    SweepRow& row = out.rows[i];
    row.value = values[i];
    auto params = req.params;
    params[config.sweep->parameter] = values[i];
    try {
      const Scenario s = make_scenario(req.kind, params, req.schedule);
      BoundReport report = audit(s.spec, config.norm, config.tol);
      const auto table = scenario_residuals(s, report, config.tol);
      const auto bad = std::find_if(table.begin(), table.end(),
                                    [](const Residual& r) { return !r.pass; });
      if (!report.holds) {
        row.status = "violation";
        row.exit_code = kExitViolation;
      } else if (bad != table.end()) {
        row.status = "oracle_mismatch:" + bad->field;
        row.exit_code = kExitViolation;
      } else {
        row.status = "ok";
      }
      row.report = std::move(report);
    } catch (const BadParam& e) {
      row.status = std::string("config_error: ") + e.what();
      row.exit_code = kExitConfig;
    } catch (const Error& e) {
      row.status = std::string("numerical_failure: ") + e.what();
      row.exit_code = kExitNumerical;
    }
  };

  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(std::max(1U, max_threads), values.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < values.size(); ++i) run_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < values.size(); i = next++) run_row(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& row : out.rows) out.exit_code = std::max(out.exit_code, row.exit_code);
  out.csv = format_sweep_csv(out.rows);
  return out;
}

}  // namespace normact
