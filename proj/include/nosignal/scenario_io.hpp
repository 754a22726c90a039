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

// JSON scenario files and deterministic report formatting.
//
// Matrix literal: list of rows, each entry a two-element [re, im] list.
// Resolution literal: {"kind":"perfect"} or
// {"kind":"intervals","breakpoints":[...]}.
//
//   {
//     "version": 1,
//     "factors": [2, 2],
//     "sender": [0], "receiver": [1],
//     "o1": <matrix, sender dims>, "o2": <matrix, full dim>,
//     "o3": <matrix, receiver dims>,
//     "resolution": <resolution>,
//     "rho0": <matrix> | {"pure": [[re, im], ...]},
//     "gamma_grid": {"start": 0, "stop": 6.283185307179586, "points": 65}
//   }

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nosignal/measurement.hpp"
#include "nosignal/signalling.hpp"

namespace nosignal::cli {

using json = nlohmann::json;

inline constexpr int kScenarioVersion = 1;
inline constexpr std::string_view kBuiltinScenarioName = "two-qubit";

struct GammaGrid {
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 1;

  std::vector<double> values() const { return linear_grid(start, stop, points); }
};

/// 0 to 2π in 65 points.
GammaGrid default_grid();

struct ScenarioFile {
  int version = kScenarioVersion;
  Scenario scenario;
  std::optional<GammaGrid> gamma_grid;
};

/// Parses scenario JSON text. Syntax errors report line and column;
/// semantic errors name the offending field. Throws InputError.
ScenarioFile parse_scenario(std::string_view text);

/// Reads a scenario file, or the built-in scenario when `ref` is
/// "two-qubit".
ScenarioFile load_scenario(const std::string& ref);

json to_json(const ScenarioFile& file);

ComplexMatrix parse_matrix(const json& value, const std::string& field);
ComplexVector parse_vector(const json& value, const std::string& field);
MeasurementResolution parse_resolution(const json& value, const std::string& field);
json matrix_to_json(const ComplexMatrix& m);
json vector_to_json(const ComplexVector& v);
json resolution_to_json(const MeasurementResolution& r);

/// "start:stop:points"; bounds may carry a trailing "pi" factor ("2pi").
GammaGrid parse_grid(std::string_view text);

/// printf "%.12e".
std::string format_float(double v);

/// Serializes with sorted keys, floats as %.12e and integers verbatim.
/// Arrays of scalars stay on one line.
std::string dump_fixed(const json& value, int indent = 2);

}  // namespace nosignal::cli
