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


// normact: audit the norm action of non-Hermitian Hamiltonians against the
// resource lower bounds of their evolution operators.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "normact/errors.hpp"
#include "normact/scenarios.hpp"
#include "normact/shell.hpp"

namespace {

int write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "normact: cannot write '" << path << "'\n";
    return normact::kExitConfig;
  }
  out << text;
  return 0;
}

int cmd_audit(const std::string& config_path, const std::string& out_path) {
  const auto config = normact::load_config(config_path);
  const auto outcome = normact::run_audit(config);
  const std::string target = out_path.empty() ? config.output : out_path;
  if (const int rc = write_text(target, outcome.document.dump(2) + "\n")) return rc;
  if (outcome.exit_code != normact::kExitPass) {
    std::cerr << "normact: audit status " << outcome.document["status"].get<std::string>();
    if (outcome.document.contains("error")) {
      std::cerr << ": " << outcome.document["error"].get<std::string>();
    }
    std::cerr << '\n';
  }
  return outcome.exit_code;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path) {
  const auto config = normact::load_config(config_path);
  const auto outcome = normact::run_sweep(config, normact::sweep_thread_cap());
  if (const int rc = write_text(out_path, outcome.csv)) return rc;
  return outcome.exit_code;
}

void cmd_list() {
  using normact::ScenarioKind;
  for (auto kind : {ScenarioKind::decay, ScenarioKind::cooling,
                    ScenarioKind::exceptional}) {
    std::cout << normact::to_string(kind) << '\n';
    for (const auto& p : normact::scenario_parameters(kind)) {
      std::cout << "  " << p.name << ": " << p.description;
      if (p.default_value) std::cout << " [default " << *p.default_value << "]";
      std::cout << '\n';
    }
  }
  std::cout << "cooling schedules: linear, smoothstep\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm-action resource bounds for non-Hermitian evolution"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;

  auto* audit = app.add_subcommand("audit", "Audit one spec or scenario");
  audit->add_option("--config", config_path, "JSON config")->required();
  audit->add_option("--out", out_path, "Report path (default: config output, else stdout)");

  auto* sweep = app.add_subcommand("sweep", "Sweep a scenario parameter to CSV");
  sweep->add_option("--config", config_path, "JSON config with a sweep block")->required();
  sweep->add_option("--out", out_path, "CSV path")->required();

  bool list = false;
  auto* scenarios = app.add_subcommand("scenarios", "Built-in scenarios");
  scenarios->add_flag("--list", list, "List scenarios and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : normact::kExitConfig;
  }

  try {
    if (*audit) return cmd_audit(config_path, out_path);
    if (*sweep) return cmd_sweep(config_path, out_path);
    if (*scenarios) {
      cmd_list();
      return 0;
    }
  } catch (const normact::ConfigError& e) {
    std::cerr << "normact: config error: " << e.what() << '\n';
    return normact::kExitConfig;
  } catch (const normact::Error& e) {
    std::cerr << "normact: " << e.what() << '\n';
    return normact::kExitNumerical;
  }
  return 0;
}
