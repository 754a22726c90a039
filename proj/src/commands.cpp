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

#include "nosignal/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "nosignal/composites.hpp"

namespace nosignal::cli {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kDemoCurveTol = 1e-9;
constexpr double kSlopeRelTol = 1e-5;
constexpr double kFiniteDifferenceStep = 1e-4;

std::string hex_digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json verdict_to_json(const SignalVerdict& v) {
  json out{{"signalling", v.signalling}, {"max_commutator_norm", v.max_commutator_norm}};
  if (v.witness) {
    out["witness"] = {{"sender_basis_index", v.witness->sender_index},
                      {"receiver_basis_index", v.witness->receiver_index},
                      {"commutator_norm", v.witness->commutator_norm}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

json make_report(const char* command, const std::string& ref, const CommandOptions& options) {
  return json{{"command", command},
              {"tool_version", kToolVersion},
              {"seed", options.seed},
              {"scenario", ref},
              {"tolerances", {{"tol_eig", options.tolerances.tol_eig}, {"tol_comm", options.tolerances.tol_comm}}}};
}

void emit(const std::string& text, const CommandOptions& options, std::ostream& out) {
  if (options.out_path) {
    std::ofstream file(*options.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError("cannot write output file '" + *options.out_path + "'");
    file << text << "\n";
    return;
  }
  out << text << "\n";
}

void emit_report(json& report, Clock::time_point start, const CommandOptions& options, std::ostream& out) {
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  report["timings"] = {{"total_ms", ms}};
  report["digest"] = hex_digest(canonical_report(report));
  emit(dump_fixed(report), options, out);
}

void require_json_format(const CommandOptions& options, const char* command) {
  if (options.format == OutputFormat::Csv) {
    throw InputError(std::string("--format csv is only available for curve, not ") + command);
  }
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  }
}

std::vector<double> grid_for(const ScenarioFile& file, const CommandOptions& options) {
  if (options.grid) return options.grid->values();
  if (file.gamma_grid) return file.gamma_grid->values();
  return default_grid().values();
}

json curve_to_json(const std::vector<std::pair<double, double>>& curve) {
  json out = json::array();
  for (const auto& [g, v] : curve) out.push_back({g, v});
  return out;
}

struct WitnessSummary {
  json report;
  double analytic;
  double finite_difference;
};

std::optional<WitnessSummary> witness_summary(const Scenario& scenario, const SignallingOptions& tol) {
  const MeasurementChannel channel = build_channel(scenario.o2(), scenario.resolution(), tol.tol_eig);
  const auto w = find_witness(channel, scenario.structure(), scenario.sender_factors(),
                              scenario.receiver_factors(), tol);
  if (!w) return std::nullopt;
  const double fd = finite_difference_slope(witness_scenario(scenario, *w), kFiniteDifferenceStep, tol);
  json report{{"sender_basis_index", w->pair.sender_index},
              {"receiver_basis_index", w->pair.receiver_index},
              {"commutator_norm", w->pair.commutator_norm},
              {"o1", matrix_to_json(w->o1_local.matrix())},
              {"o3", matrix_to_json(w->o3_local.matrix())},
              {"state_vector", vector_to_json(w->witness.vector)},
              {"slope_analytic", w->witness.slope},
              {"slope_finite_difference", fd}};
  return WitnessSummary{std::move(report), w->witness.slope, fd};
}

bool slopes_agree(double analytic, double fd) {
  return std::abs(analytic - fd) <= kSlopeRelTol * std::max(1.0, std::abs(analytic));
}

json coarsening_to_json(const Coarsening& c) {
  json merges = json::array();
  for (const auto& [a, b] : c.merges) merges.push_back({a, b});
  return json{{"merge_spec", c.partition},
              {"merges", merges},
              {"bin_labels", c.channel.bin_labels()},
              {"verdict", verdict_to_json(c.verdict)}};
}

}  // namespace

std::string canonical_report(const json& report) {
  json copy = report;
  copy.erase("timings");
  copy.erase("digest");
  return dump_fixed(copy);
}

int cmd_check(const std::string& scenario_ref, const CommandOptions& options, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    require_json_format(options, "check");
    const ScenarioFile file = load_scenario(scenario_ref);
    const SignalVerdict verdict = is_signalling(file.scenario, options.tolerances);
    json report = make_report("check", scenario_ref, options);
    report["verdict"] = verdict_to_json(verdict);
    emit_report(report, start, options, out);
    return verdict.signalling ? kExitSignalling : kExitOk;
  });
}

int cmd_curve(const std::string& scenario_ref, const CommandOptions& options, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    const ScenarioFile file = load_scenario(scenario_ref);
    const std::vector<double> grid = grid_for(file, options);
    const auto curve = expectation_curve(file.scenario, grid, options.tolerances);
    if (options.format == OutputFormat::Json) {
      json report = make_report("curve", scenario_ref, options);
      report["curve"] = curve_to_json(curve);
      emit_report(report, start, options, out);
      return kExitOk;
    }
    std::string csv = "gamma,expectation";
    for (const auto& [g, v] : curve) csv += "\n" + format_float(g) + "," + format_float(v);
    emit(csv, options, out);
    return kExitOk;
  });
}

int cmd_witness(const std::string& scenario_ref, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    require_json_format(options, "witness");
    const ScenarioFile file = load_scenario(scenario_ref);
    json report = make_report("witness", scenario_ref, options);
    const auto summary = witness_summary(file.scenario, options.tolerances);
    if (!summary) {
      report["witness"] = nullptr;
      report["message"] = "no witness exists";
      emit_report(report, start, options, out);
      return kExitOk;
    }
    report["witness"] = summary->report;
    const bool agree = slopes_agree(summary->analytic, summary->finite_difference);
    report["slopes_agree"] = agree;
    emit_report(report, start, options, out);
    if (!agree) {
      err << "numerical failure: analytic and finite-difference slopes disagree\n";
      return kExitNumericalFailure;
    }
    return kExitOk;
  });
}

int cmd_coarsen(const std::string& scenario_ref, const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    require_json_format(options, "coarsen");
    const ScenarioFile file = load_scenario(scenario_ref);
    const Scenario& s = file.scenario;
    const Coarsening c = find_nonsignalling_coarsening(s.o2(), s.structure(), s.sender_factors(),
                                                       s.receiver_factors(), options.tolerances);
    json report = make_report("coarsen", scenario_ref, options);
    report["coarsening"] = coarsening_to_json(c);
    emit_report(report, start, options, out);
    if (c.verdict.signalling) {
      err << "numerical failure: coarsened channel still signals\n";
      return kExitNumericalFailure;
    }
    return kExitOk;
  });
}

int run_demo(const Scenario& scenario, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    require_json_format(options, "demo");
    const SignallingOptions& tol = options.tolerances;
    json report = make_report("demo", std::string(kBuiltinScenarioName), options);

    const SignalVerdict verdict = is_signalling(scenario, tol);
    report["verdict"] = verdict_to_json(verdict);

    const std::vector<double> grid = (options.grid ? *options.grid : default_grid()).values();
    const auto curve = expectation_curve(scenario, grid, tol);
    double deviation = 0.0;
    for (const auto& [g, v] : curve) deviation = std::max(deviation, std::abs(v - std::pow(std::cos(g), 2)));
    report["curve"] = curve_to_json(curve);
    report["curve_max_deviation_from_cos2"] = deviation;

    const auto witness = witness_summary(scenario, tol);
    report["witness"] = witness ? witness->report : json(nullptr);

    const Coarsening coarse = find_nonsignalling_coarsening(scenario.o2(), scenario.structure(),
                                                            scenario.sender_factors(),
                                                            scenario.receiver_factors(), tol);
    report["coarsening"] = coarsening_to_json(coarse);

    const json checks{{"signalling", verdict.signalling},
                      {"curve_matches_cos2", deviation <= kDemoCurveTol},
                      {"witness_slopes_agree",
                       witness.has_value() && slopes_agree(witness->analytic, witness->finite_difference)},
                      {"coarsening_non_signalling", !coarse.verdict.signalling}};
    report["checks"] = checks;
    emit_report(report, start, options, out);

    bool ok = true;
    for (const auto& [name, passed] : checks.items()) {
      if (!passed.get<bool>()) {
        err << "self-check failed: " << name << "\n";
        ok = false;
      }
    }
    return ok ? kExitOk : kExitNumericalFailure;
  });
}

int cmd_demo(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return run_demo(two_qubit_scenario(), options, out, err); });
}

}  // namespace nosignal::cli
