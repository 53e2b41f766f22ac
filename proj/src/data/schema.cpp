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

#include "wstl/data/schema.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace wstl::data {

PredicateRegistry Schema::registry() const {
  PredicateRegistry out;
  for (const auto& p : predicates) out.emplace(p->id, p);
  return out;
}

std::shared_ptr<const PredicateSpec> Schema::predicate(const std::string& id) const {
  for (const auto& p : predicates) {
    if (p->id == id) return p;
  }
  throw ConfigError("schema: unknown predicate '" + id + "'");
}

namespace {

StateSlice slice_named(const std::map<std::string, StateSlice>& slices, const std::string& name) {
  auto it = slices.find(name);
  if (it == slices.end()) throw ConfigError("schema: unknown slice '" + name + "'");
  return it->second;
}

std::string slice_name(const std::map<std::string, StateSlice>& slices, const StateSlice& s) {
  for (const auto& [name, slice] : slices) {
    if (slice == s) return name;
  }
  throw ConfigError("schema: feature refers to an undeclared slice");
}

}  // namespace

Schema schema_from_json(const nlohmann::json& j) {
  Schema s;
  try {
    s.state_dimension = j.at("state_dimension").get<Eigen::Index>();
    if (s.state_dimension <= 0) throw ConfigError("schema: state_dimension must be positive");
    for (const auto& [name, range] : j.at("slices").items()) {
      StateSlice slice{range.at(0).get<Eigen::Index>(), range.at(1).get<Eigen::Index>()};
      if (slice.offset < 0 || slice.length <= 0 || slice.offset + slice.length > s.state_dimension) {
        throw ConfigError("schema: slice '" + name + "' lies outside the state");
      }
      s.slices.emplace(name, slice);
    }
    std::map<std::string, FeatureMap> features;
    for (const auto& f : j.at("features")) {
      FeatureMap fm;
      fm.id = f.at("id").get<std::string>();
      const auto kind = f.at("kind").get<std::string>();
      fm.scale = f.value("scale", 1.0);
      if (kind == "distance") {
        fm.kind = FeatureMap::Kind::distance;
        fm.a = slice_named(s.slices, f.at("a").get<std::string>());
        fm.b = slice_named(s.slices, f.at("b").get<std::string>());
        if (fm.a.length != fm.b.length) throw ConfigError("schema: feature '" + fm.id + "' compares unequal slices");
      } else if (kind == "coordinate") {
        fm.kind = FeatureMap::Kind::coordinate;
        fm.index = f.at("index").get<Eigen::Index>();
        if (fm.index < 0) throw ConfigError("schema: feature '" + fm.id + "' has a negative index");
      } else {
        throw ConfigError("schema: feature '" + fm.id + "' has unknown kind '" + kind + "'");
      }
      if (fm.required_dimension() > s.state_dimension) {
        throw ConfigError("schema: feature '" + fm.id + "' reads past the state dimension");
      }
      if (!features.emplace(fm.id, fm).second) throw ConfigError("schema: duplicate feature '" + fm.id + "'");
      s.features.push_back(fm);
    }
    for (const auto& p : j.at("predicates")) {
      PredicateSpec spec;
      spec.id = p.at("id").get<std::string>();
      const auto fid = p.at("feature").get<std::string>();
      auto it = features.find(fid);
      if (it == features.end()) throw ConfigError("schema: predicate '" + spec.id + "' uses unknown feature '" + fid + "'");
      spec.feature = it->second;
      spec.threshold = p.at("threshold").get<double>();
      spec.sup = p.at("sup").get<double>();
      spec.inf = p.at("inf").get<double>();
      spec.validate();
      for (const auto& q : s.predicates) {
        if (q->id == spec.id) throw ConfigError("schema: duplicate predicate '" + spec.id + "'");
      }
      s.predicates.push_back(std::make_shared<const PredicateSpec>(std::move(spec)));
    }
    s.bounds_from_data = j.value("bounds_from_data", false);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schema: ") + e.what());
  }
  return s;
}

nlohmann::json to_json(const Schema& schema) {
  nlohmann::json j;
  j["state_dimension"] = schema.state_dimension;
  j["slices"] = nlohmann::json::object();
  for (const auto& [name, s] : schema.slices) j["slices"][name] = {s.offset, s.length};
  j["features"] = nlohmann::json::array();
  for (const auto& f : schema.features) {
    nlohmann::json fj{{"id", f.id}, {"scale", f.scale}};
    if (f.kind == FeatureMap::Kind::distance) {
      fj["kind"] = "distance";
      fj["a"] = slice_name(schema.slices, f.a);
      fj["b"] = slice_name(schema.slices, f.b);
    } else {
      fj["kind"] = "coordinate";
      fj["index"] = f.index;
    }
    j["features"].push_back(std::move(fj));
  }
  j["predicates"] = nlohmann::json::array();
  for (const auto& p : schema.predicates) {
    j["predicates"].push_back(
        {{"id", p->id}, {"feature", p->feature.id}, {"threshold", p->threshold}, {"sup", p->sup}, {"inf", p->inf}});
  }
  j["bounds_from_data"] = schema.bounds_from_data;
  return j;
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema file " + path.string());
  try {
    return schema_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("schema " + path.string() + ": " + e.what());
  }
}

void save_schema(const std::filesystem::path& path, const Schema& schema) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write schema file " + path.string());
  out << to_json(schema).dump(2) << '\n';
}

Schema with_bounds_from_data(const Schema& schema, const TrajectorySet& data, double margin) {
  if (data.empty()) throw InputError("bounds from data: empty dataset");
  Schema out = schema;
  out.predicates.clear();
  for (const auto& p : schema.predicates) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& tau : data) {
      for (Eigen::Index t = 0; t < tau.states.rows(); ++t) {
        const double f = p->feature(tau.states.row(t));
        lo = std::min(lo, f);
        hi = std::max(hi, f);
      }
    }
    const double pad = margin * std::max(hi - lo, 1e-9);
    auto spec = *p;
    spec.inf = std::min(lo, p->threshold) - pad;
    spec.sup = std::max(hi, p->threshold) + pad;
    spec.validate();
    out.predicates.push_back(std::make_shared<const PredicateSpec>(std::move(spec)));
  }
  out.bounds_from_data = true;
  return out;
}

}  // namespace wstl::data
