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

// Subcommands of the nosignal tool. Each writes its report to `out` (or the
// --out file) and diagnostics to `err`, and returns the process exit code.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "nosignal/scenario_io.hpp"
#include "nosignal/signalling.hpp"

namespace nosignal::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,  // also "non-signalling" for check
  kExitInputError = 1,
  kExitNumericalFailure = 2,
  kExitSignalling = 3,
};

enum class OutputFormat { Default, Json, Csv };

struct CommandOptions {
  std::optional<GammaGrid> grid;
  std::optional<std::string> out_path;
  std::uint64_t seed = 0;
  SignallingOptions tolerances;
  OutputFormat format = OutputFormat::Default;
};

int cmd_check(const std::string& scenario_ref, const CommandOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_curve(const std::string& scenario_ref, const CommandOptions& options, std::ostream& out,
              std::ostream& err);
int cmd_witness(const std::string& scenario_ref, const CommandOptions& options, std::ostream& out,
                std::ostream& err);
int cmd_coarsen(const std::string& scenario_ref, const CommandOptions& options, std::ostream& out,
                std::ostream& err);
int cmd_demo(const CommandOptions& options, std::ostream& out, std::ostream& err);

/// The demo pipeline on an arbitrary two-qubit scenario expected to
/// reproduce ⟨O₃⟩ = cos²γ; any failed self-check yields kExitNumericalFailure.
int run_demo(const Scenario& scenario, const CommandOptions& options, std::ostream& out, std::ostream& err);

/// Report JSON without the "timings" and "digest" fields, as hashed into
/// "digest".
std::string canonical_report(const json& report);

}  // namespace nosignal::cli
