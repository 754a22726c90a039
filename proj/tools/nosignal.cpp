// Copyright 2026 The nosignal Authors
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

// nosignal: decide whether measuring an observable on a composite quantum
// system lets a sender signal a receiver, and explore the protocol.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nosignal/commands.hpp"

int main(int argc, char** argv) {
  using namespace nosignal::cli;

  CLI::App app{"No-signalling analysis of ideal measurements on composite quantum systems"};
  app.require_subcommand(1);
  app.fallthrough();

  CommandOptions options;
  std::string scenario;
  std::string grid;
  std::string format = "default";

  app.add_option("--out", options.out_path, "Write the report or CSV to this file");
  app.add_option("--grid", grid, "Kick-strength grid start:stop:points (bounds may end in 'pi')");
  app.add_option("--seed", options.seed, "Seed recorded in the report");
  app.add_option("--tol-eig", options.tolerances.tol_eig, "Eigenvalue clustering tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-comm", options.tolerances.tol_comm, "Relative commutator tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"default", "json", "csv"}));

  const char* scenario_help = "Scenario JSON file, or 'two-qubit' for the built-in scenario";
  auto* check = app.add_subcommand("check", "Decide whether the mediator's measurement enables signalling");
  check->add_option("scenario", scenario, scenario_help)->required();
  auto* curve = app.add_subcommand("curve", "Receiver expectation as a function of kick strength");
  curve->add_option("scenario", scenario, scenario_help)->required();
  auto* witness = app.add_subcommand("witness", "Basis pair and state witnessing a signal");
  witness->add_option("scenario", scenario, scenario_help)->required();
  auto* coarsen = app.add_subcommand("coarsen", "Search for a non-signalling coarse-graining");
  coarsen->add_option("scenario", scenario, scenario_help)->required();
  auto* demo = app.add_subcommand("demo", "Run every command on the built-in two-qubit scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (!grid.empty()) options.grid = parse_grid(grid);
  } catch (const nosignal::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (format == "json") options.format = OutputFormat::Json;
  if (format == "csv") options.format = OutputFormat::Csv;

  if (check->parsed()) return cmd_check(scenario, options, std::cout, std::cerr);
  if (curve->parsed()) return cmd_curve(scenario, options, std::cout, std::cerr);
  if (witness->parsed()) return cmd_witness(scenario, options, std::cout, std::cerr);
  if (coarsen->parsed()) return cmd_coarsen(scenario, options, std::cout, std::cerr);
  if (demo->parsed()) return cmd_demo(options, std::cout, std::cerr);
  return kExitInputError;
}
