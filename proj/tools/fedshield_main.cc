// Copyright 2026 The FedShield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fedshield command-line entry point.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedshield/cli.h"

int main(int argc, char** argv) {
  CLI::App app{"fedshield: federated learning simulator for label-flipping defenses"};
  app.require_subcommand(1);

  std::string run_config;
  std::string run_out = "results";
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", run_config, "Config file (key = value)")->required();
  run->add_option("-o,--output", run_out, "Output directory");

  fedshield::SweepOptions sweep_opts;
  std::string sweep_config;
  std::string sweep_out = "sweep";
  auto* sweep = app.add_subcommand("sweep", "Run a pmr x t_safe x aggregator grid");
  sweep->add_option("config", sweep_config, "Base config file")->required();
  sweep->add_option("--pmr", sweep_opts.pmrs, "Poisoned client ratios")->required();
  sweep->add_option("--tsafe", sweep_opts.t_safes, "Safe-round counts")->required();
  sweep->add_option("--aggregator", sweep_opts.aggregators, "Aggregators")->required();
  sweep->add_option("-o,--output", sweep_out, "Output directory");

  fedshield::BenchOptions bench_opts;
  std::string bench_out = ".";
  auto* bench = app.add_subcommand("bench", "Time each aggregator on synthetic updates");
  bench->add_option("--clients", bench_opts.clients, "Clients per round (K)");
  bench->add_option("--model-dim", bench_opts.model_dim, "Update dimension (D)");
  bench->add_option("--last-layer-dim", bench_opts.last_layer_dim,
                    "Last-layer slice used by GShield (L)");
  bench->add_option("--repeats", bench_opts.repeats, "Timed rounds (R)");
  bench->add_option("--seed", bench_opts.seed, "Seed for the synthetic updates");
  bench->add_option("-o,--output", bench_out, "Directory for bench.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fedshield::kExitConfigError;
  }

  if (*run) return fedshield::CmdRun(run_config, run_out, std::cout, std::cerr);
  if (*sweep) {
    sweep_opts.config_path = sweep_config;
    sweep_opts.output_dir = sweep_out;
    return fedshield::CmdSweep(sweep_opts, std::cout, std::cerr);
  }
  return fedshield::CmdBench(bench_opts, bench_out, std::cout, std::cerr);
}
