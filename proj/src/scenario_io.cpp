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

#include "nosignal/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nosignal/composites.hpp"

namespace nosignal::cli {

namespace {

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string("missing required field '") + key + "'");
  return *it;
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw InputError("field '" + field + "': expected a number");
  return v.get<double>();
}

std::size_t as_index(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError("field '" + field + "': expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::size_t> as_index_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw InputError("field '" + field + "': expected a list of integers");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(as_index(v[k], field + "[" + std::to_string(k) + "]"));
  }
  return out;
}

Complex as_complex(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) throw InputError("field '" + field + "': expected [re, im]");
  return {as_number(v[0], field + "[0]"), as_number(v[1], field + "[1]")};
}

// Wraps a constructor so its validation message names the field.
template <typename F>
auto with_field(const std::string& field, F&& make) {
  try {
    return make();
  } catch (const InputError& e) {
    throw InputError("field '" + field + "': " + e.what());
  }
}

double parse_bound(std::string_view text) {
  std::string s(text);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s.resize(s.size() - 2);
    if (s.empty()) s = "1";
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("grid: cannot parse '" + std::string(text) + "'");
  }
  if (used != s.size()) throw InputError("grid: cannot parse '" + std::string(text) + "'");
  return v * factor;
}

}  // namespace

GammaGrid default_grid() { return GammaGrid{0.0, 2.0 * std::numbers::pi, 65}; }

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

ComplexMatrix parse_matrix(const json& value, const std::string& field) {
  if (!value.is_array() || value.empty()) throw InputError("field '" + field + "': expected a list of rows");
  const std::size_t n = value.size();
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = value[i];
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != n) {
      throw InputError("field '" + row_field + "': expected a row of " + std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          as_complex(row[j], row_field + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

ComplexVector parse_vector(const json& value, const std::string& field) {
  if (!value.is_array() || value.empty()) throw InputError("field '" + field + "': expected a list of [re, im]");
  ComplexVector v(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = as_complex(value[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

MeasurementResolution parse_resolution(const json& value, const std::string& field) {
  if (!value.is_object()) throw InputError("field '" + field + "': expected an object");
  const json& kind = require(value, "kind");
  if (kind == "perfect") return MeasurementResolution::perfect();
  if (kind == "intervals") {
    const json& bps = require(value, "breakpoints");
    if (!bps.is_array()) throw InputError("field '" + field + ".breakpoints': expected a list of numbers");
    std::vector<double> b;
    for (std::size_t k = 0; k < bps.size(); ++k) {
      b.push_back(as_number(bps[k], field + ".breakpoints[" + std::to_string(k) + "]"));
    }
    return with_field(field, [&] { return MeasurementResolution::intervals(std::move(b)); });
  }
  throw InputError("field '" + field + ".kind': expected \"perfect\" or \"intervals\"");
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

json resolution_to_json(const MeasurementResolution& r) {
  if (r.kind() == MeasurementResolution::Kind::Perfect) return json{{"kind", "perfect"}};
  return json{{"kind", "intervals"}, {"breakpoints", r.breakpoints()}};
}

ScenarioFile parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("scenario must be a JSON object");

  const json& version = require(doc, "version");
  if (!version.is_number_integer()) throw InputError("field 'version': expected an integer");
  if (version.get<int>() != kScenarioVersion) {
    throw InputError("field 'version': unsupported version " + version.dump() + ", expected " +
                     std::to_string(kScenarioVersion));
  }

  const std::vector<std::size_t> factors = as_index_list(require(doc, "factors"), "factors");
  CompositeStructure structure = with_field("factors", [&] { return CompositeStructure(factors); });
  std::vector<std::size_t> sender = as_index_list(require(doc, "sender"), "sender");
  std::vector<std::size_t> receiver = as_index_list(require(doc, "receiver"), "receiver");
  with_field("sender/receiver", [&] {
    validate_roles(structure, sender, receiver);
    return 0;
  });

  HermitianOperator o1 = with_field("o1", [&] { return HermitianOperator(parse_matrix(require(doc, "o1"), "o1")); });
  HermitianOperator o2 = with_field("o2", [&] { return HermitianOperator(parse_matrix(require(doc, "o2"), "o2")); });
  HermitianOperator o3 = with_field("o3", [&] { return HermitianOperator(parse_matrix(require(doc, "o3"), "o3")); });
  MeasurementResolution resolution = parse_resolution(require(doc, "resolution"), "resolution");

  const json& rho_json = require(doc, "rho0");
  DensityMatrix rho0 = with_field("rho0", [&] {
    if (rho_json.is_object()) return DensityMatrix::pure(parse_vector(require(rho_json, "pure"), "rho0.pure"));
    return DensityMatrix(parse_matrix(rho_json, "rho0"));
  });

  std::optional<GammaGrid> grid;
  if (auto it = doc.find("gamma_grid"); it != doc.end()) {
    const json& g = *it;
    if (!g.is_object()) throw InputError("field 'gamma_grid': expected an object");
    GammaGrid parsed{as_number(require(g, "start"), "gamma_grid.start"),
                     as_number(require(g, "stop"), "gamma_grid.stop"),
                     as_index(require(g, "points"), "gamma_grid.points")};
    if (parsed.points == 0) throw InputError("field 'gamma_grid.points': must be at least 1");
    grid = parsed;
  }

  Scenario scenario = with_field("scenario", [&] {
    return Scenario(std::move(structure), std::move(sender), std::move(receiver), std::move(o1), std::move(o2),
                    std::move(resolution), std::move(o3), std::move(rho0));
  });
  return ScenarioFile{version.get<int>(), std::move(scenario), grid};
}

ScenarioFile load_scenario(const std::string& ref) {
  if (ref == kBuiltinScenarioName) return ScenarioFile{kScenarioVersion, two_qubit_scenario(), std::nullopt};
  std::ifstream in(ref, std::ios::binary);
  if (!in) throw InputError("cannot open scenario file '" + ref + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

json to_json(const ScenarioFile& file) {
  const Scenario& s = file.scenario;
  json doc{{"version", file.version},
           {"factors", s.structure().factor_dims()},
           {"sender", s.sender_factors()},
           {"receiver", s.receiver_factors()},
           {"o1", matrix_to_json(s.o1_local().matrix())},
           {"o2", matrix_to_json(s.o2().matrix())},
           {"o3", matrix_to_json(s.o3_local().matrix())},
           {"resolution", resolution_to_json(s.resolution())},
           {"rho0", matrix_to_json(s.rho0().matrix())}};
  if (file.gamma_grid) {
    doc["gamma_grid"] = {{"start", file.gamma_grid->start},
                         {"stop", file.gamma_grid->stop},
                         {"points", file.gamma_grid->points}};
  }
  return doc;
}

GammaGrid parse_grid(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos || text.find(':', second + 1) != std::string_view::npos) {
    throw InputError("grid: expected start:stop:points, got '" + std::string(text) + "'");
  }
  GammaGrid g;
  g.start = parse_bound(text.substr(0, first));
  g.stop = parse_bound(text.substr(first + 1, second - first - 1));
  const std::string pts(text.substr(second + 1));
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(pts, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != pts.size() || n < 1) {
    throw InputError("grid: points must be a positive integer, got '" + pts + "'");
  }
  g.points = static_cast<std::size_t>(n);
  return g;
}

namespace {

bool is_scalar(const json& v) { return !v.is_array() && !v.is_object(); }

void dump_into(std::ostringstream& os, const json& v, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (v.type()) {
    case json::value_t::number_float:
      os << format_float(v.get<double>());
      return;
    case json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(key).dump() << ": ";
        dump_into(os, item, indent, depth + 1);
      }
      os << "\n" << close_pad << "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      bool flat = true;
      for (const auto& item : v) flat = flat && (is_scalar(item) || (item.is_array() && item.size() == 2 &&
                                                                     is_scalar(item[0]) && is_scalar(item[1])));
      if (flat) {
        os << "[";
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (k) os << ", ";
          dump_into(os, v[k], 0, 0);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) os << ",\n";
        os << pad;
        dump_into(os, v[k], indent, depth + 1);
      }
      os << "\n" << close_pad << "]";
      return;
    }
    default:
      os << v.dump();
  }
}

}  // namespace

std::string dump_fixed(const json& value, int indent) {
  std::ostringstream os;
  dump_into(os, value, indent, 0);
  return os.str();
}

}  // namespace nosignal::cli
