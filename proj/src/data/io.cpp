// Copyright 2026 The wstl-explain Authors
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

#include "wstl/data/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "wstl/numeric.hpp"

namespace wstl::data {

namespace {

Trajectory parse_record(const std::string& line, std::size_t lineno, Eigen::Index dimension) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
  }
  Trajectory tau;
  try {
    tau.id = j.at("id").get<std::string>();
    const auto& label = j.at("label");
    if (!label.is_number_integer() || (label.get<int>() != 1 && label.get<int>() != -1)) {
      throw ParseError("trajectory '" + tau.id + "': label must be 1 or -1, got " + label.dump(), lineno);
    }
    tau.label = label.get<int>();
    const auto& states = j.at("states");
    if (!states.is_array() || states.size() < 2) {
      throw ParseError("trajectory '" + tau.id + "': needs at least two states", lineno);
    }
    tau.states.resize(static_cast<Eigen::Index>(states.size()), dimension);
    for (std::size_t t = 0; t < states.size(); ++t) {
      const auto& s = states[t];
      if (!s.is_array() || static_cast<Eigen::Index>(s.size()) != dimension) {
        throw ParseError(fmt::format("trajectory '{}': state {} has dimension {}, expected {}", tau.id, t,
                                     s.is_array() ? s.size() : 0, dimension),
                         lineno);
      }
      for (Eigen::Index k = 0; k < dimension; ++k) {
        const auto& x = s[static_cast<std::size_t>(k)];
        if (!x.is_number()) throw ParseError("trajectory '" + tau.id + "': non-numeric state entry", lineno);
        tau.states(static_cast<Eigen::Index>(t), k) = x.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed record: ") + e.what(), lineno);
  }
  return tau;
}

}  // namespace

TrajectorySet read_dataset(std::istream& in, Eigen::Index dimension) {
  TrajectorySet out;
  std::set<std::string> ids;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto tau = parse_record(line, lineno, dimension);
    if (!ids.insert(tau.id).second) throw ParseError("duplicate trajectory id '" + tau.id + "'", lineno);
    out.push_back(std::move(tau));
  }
  std::sort(out.begin(), out.end(), [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });
  return out;
}

TrajectorySet load_dataset(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset " + path.string());
  return read_dataset(in, schema.state_dimension);
}

void write_dataset(std::ostream& out, const TrajectorySet& data) {
  for (const auto& tau : data) {
    nlohmann::json states = nlohmann::json::array();
    for (Eigen::Index t = 0; t < tau.states.rows(); ++t) {
      auto row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < tau.states.cols(); ++k) row.push_back(tau.states(t, k));
      states.push_back(std::move(row));
    }
    out << nlohmann::json{{"id", tau.id}, {"label", tau.label}, {"states", std::move(states)}}.dump() << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const TrajectorySet& data) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset " + path.string());
  write_dataset(out, data);
}

void export_csv(const std::filesystem::path& path, const TrajectorySet& data) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  const Eigen::Index dim = data.empty() ? 0 : data.front().dimension();
  out << "id,label,t";
  for (Eigen::Index k = 0; k < dim; ++k) out << ",s" << k;
  out << '\n';
  for (const auto& tau : data) {
    for (Eigen::Index t = 0; t < tau.states.rows(); ++t) {
      out << tau.id << ',' << tau.label << ',' << t;
      for (Eigen::Index k = 0; k < tau.states.cols(); ++k) out << ',' << to_decimal_string(tau.states(t, k));
      out << '\n';
    }
  }
}

}  // namespace wstl::data
