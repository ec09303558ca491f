// Copyright 2026 The dirlab Authors
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

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dirlab/config.hpp"
#include "dirlab/errors.hpp"
#include "dirlab/experiments.hpp"
#include "dirlab/kernels.hpp"
#include "dirlab/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dirlab - desk-scale numerics for Dirichlet-operator estimates"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "list the available experiments");

  auto* run_cmd = app.add_subcommand("run", "run one experiment and write its reports");
  std::string experiment;
  run_cmd->add_option("experiment", experiment, "experiment name")->required();
  std::string config_path;
  run_cmd->add_option("--config", config_path, "config file (flat key = value)");
  std::string out_dir = "out";
  run_cmd->add_option("--out", out_dir, "output directory");
  std::uint64_t seed = 0;
  auto* seed_opt = run_cmd->add_option("--seed", seed, "RNG seed");
  int threads = 0;
  run_cmd->add_option("--threads", threads, "worker thread cap (0 = hardware)");
  double budget_factor = 1.0;
  auto* budget_opt =
      run_cmd->add_option("--budget-factor", budget_factor, "scales discretization budgets");
  std::int64_t K = 0;
  auto* k_opt = run_cmd->add_option("--K", K, "spectral truncation override");
  std::int64_t samples = 0;
  auto* samples_opt = run_cmd->add_option("--samples", samples, "MC sample count override");
  double eps0 = 0.0;
  auto* eps_opt = run_cmd->add_option("--eps0", eps0, "coercivity margin override");
  std::string simd = "auto";
  run_cmd->add_option("--simd", simd, "kernel variant: auto, scalar or avx2");
  std::vector<std::string> sets;
  run_cmd->add_option("--set", sets, "extra config entries as key=value");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    for (const auto& name : dirlab::experiment_names()) std::printf("%s\n", name.c_str());
    return 0;
  }

  try {
    dirlab::kernels::select(simd);
    dirlab::thread_cap().store(threads);

    dirlab::Config cfg = config_path.empty() ? dirlab::Config{}
                                             : dirlab::Config::from_file(config_path);
    cfg.set("experiment", experiment);
    if (seed_opt->count()) cfg.set("seed", std::to_string(seed));
    if (budget_opt->count()) cfg.set("budget_factor", std::to_string(budget_factor));
    if (k_opt->count()) cfg.set("K", std::to_string(K));
    if (samples_opt->count()) cfg.set("samples", std::to_string(samples));
    if (eps_opt->count()) cfg.set("eps0", std::to_string(eps0));
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw dirlab::ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }

    const auto result = dirlab::run_experiment(cfg);
    dirlab::write_run(result, cfg, out_dir);
    std::printf("%s: %s (report in %s)\n", result.experiment.c_str(), result.status.c_str(),
                out_dir.c_str());
    return result.exit_code;
  } catch (const dirlab::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return dirlab::kConfigError;
  } catch (const dirlab::NumericalAbort& e) {
    std::fprintf(stderr, "numerical abort: %s\n", e.what());
    return dirlab::kNumericalAbort;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return dirlab::kNumericalAbort;
  }
}
