// Copyright 2026 The fuzzystego Authors.
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

#include "fuzzystego/fuzzy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <string>
#include <unordered_map>

#include "fuzzystego/error.hpp"

namespace fuzzystego {

double trapezoid_mu(double x, const Trapezoid& t) noexcept {
  const double rise = t.b > t.a ? (x - t.a) / (t.b - t.a) : (x >= t.a ? 1.0 : 0.0);
  const double fall = t.d > t.c ? (t.d - x) / (t.d - t.c) : (x <= t.d ? 1.0 : 0.0);
  return std::max(std::min({rise, 1.0, fall}), 0.0);
}

namespace {

constexpr DepthLabel S = DepthLabel::shallow;
constexpr DepthLabel M = DepthLabel::moderate;
constexpr DepthLabel D = DepthLabel::deep;

constexpr std::array<const char*, 3> kInputNames = {"low", "medium", "high"};
constexpr std::array<const char*, 3> kDepthNames = {"shallow", "moderate", "deep"};

int label_index(const std::string& name, const std::array<const char*, 3>& names) {
  for (int i = 0; i < 3; ++i) {
    if (name == names[static_cast<std::size_t>(i)]) return i;
  }
  throw Error(ErrorCode::invalid_argument, "unknown fuzzy label: " + name);
}

nlohmann::json sets_to_json(const std::array<Trapezoid, 3>& sets, const std::array<const char*, 3>& names) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < 3; ++i) j[names[i]] = {sets[i].a, sets[i].b, sets[i].c, sets[i].d};
  return j;
}

std::array<Trapezoid, 3> sets_from_json(const nlohmann::json& j, const std::array<const char*, 3>& names) {
  std::array<Trapezoid, 3> sets;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& v = j.at(names[i]);
    if (!v.is_array() || v.size() != 4) throw Error(ErrorCode::invalid_argument, "trapezoid needs 4 numbers");
    sets[i] = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
  }
  return sets;
}

// Output membership sampled on the centroid grid, one row per output set.
using OutputTable = std::array<std::array<double, kCentroidPoints>, 3>;

double grid_point(int i) noexcept { return 1.0 + 2.0 * static_cast<double>(i) / (kCentroidPoints - 1); }

OutputTable output_table(const FuzzySystem& sys) {
  OutputTable t{};
  for (std::size_t k = 0; k < 3; ++k) {
    for (int i = 0; i < kCentroidPoints; ++i) t[k][static_cast<std::size_t>(i)] = trapezoid_mu(grid_point(i), sys.depth[k]);
  }
  return t;
}

// Strength of each output set: max over rules of the min of the antecedents.
std::array<double, 3> fire_rules(double h, double e, double p, const FuzzySystem& sys) {
  std::array<double, 3> mh{}, me{}, mp{};
  for (std::size_t i = 0; i < 3; ++i) {
    mh[i] = trapezoid_mu(h, sys.entropy[i]);
    me[i] = trapezoid_mu(e, sys.edge[i]);
    mp[i] = trapezoid_mu(p, sys.pressure[i]);
  }
  std::array<double, 3> strength{};
  for (std::size_t ih = 0; ih < 3; ++ih) {
    for (std::size_t ie = 0; ie < 3; ++ie) {
      for (std::size_t ip = 0; ip < 3; ++ip) {
        const double alpha = std::min({mh[ih], me[ie], mp[ip]});
        auto& s = strength[static_cast<std::size_t>(sys.rules[9 * ih + 3 * ie + ip])];
        s = std::max(s, alpha);
      }
    }
  }
  return strength;
}

// Trapezoid-rule centroid of the clipped-and-maxed output shape, accumulated
// left to right.
DepthInference defuzzify(const std::array<double, 3>& strength, const OutputTable& table) {
  const double step = 2.0 / (kCentroidPoints - 1);
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < kCentroidPoints; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double mu = 0.0;
    for (std::size_t k = 0; k < 3; ++k) mu = std::max(mu, std::min(strength[k], table[k][ui]));
    const double w = (i == 0 || i == kCentroidPoints - 1) ? 0.5 * step : step;
    num += w * grid_point(i) * mu;
    den += w * mu;
  }
  if (!(den > 0.0)) return {1.0, 1, true};
  const double d_star = std::clamp(num / den, 1.0, 3.0);
  const int depth = std::clamp(static_cast<int>(std::floor(d_star + 0.5)), 1, 3);
  return {d_star, depth, false};
}

double clamp01(double v) noexcept { return std::clamp(v, 0.0, 1.0); }

}  // namespace

FuzzySystem FuzzySystem::standard() {
  FuzzySystem sys;
  const std::array<Trapezoid, 3> inputs = {{{0.0, 0.0, 0.2, 0.4}, {0.2, 0.4, 0.6, 0.8}, {0.6, 0.8, 1.0, 1.0}}};
  sys.entropy = inputs;
  sys.edge = inputs;
  sys.pressure = inputs;
  sys.depth = {{{1.0, 1.0, 1.3, 1.7}, {1.3, 1.7, 2.3, 2.7}, {2.3, 2.7, 3.0, 3.0}}};
  // Rows: entropy label; within a row, (edge, pressure) in L/M/H order.
  sys.rules = {
      S, S, S,  S, S, M,  S, M, M,   // entropy low
      S, S, M,  S, M, M,  M, M, D,   // entropy medium
      S, M, M,  M, M, D,  M, D, D,   // entropy high
  };
  return sys;
}

void FuzzySystem::validate() const {
  for (const auto* sets : {&entropy, &edge, &pressure, &depth}) {
    for (const auto& t : *sets) {
      if (!t.valid()) throw Error(ErrorCode::invalid_argument, "trapezoid breakpoints must be ordered");
    }
  }
}

nlohmann::json to_json(const FuzzySystem& sys) {
  nlohmann::json j;
  j["inputs"]["entropy"] = sets_to_json(sys.entropy, kInputNames);
  j["inputs"]["edge"] = sets_to_json(sys.edge, kInputNames);
  j["inputs"]["pressure"] = sets_to_json(sys.pressure, kInputNames);
  j["output"] = sets_to_json(sys.depth, kDepthNames);
  j["rules"] = nlohmann::json::array();
  for (std::size_t h = 0; h < 3; ++h) {
    for (std::size_t e = 0; e < 3; ++e) {
      for (std::size_t p = 0; p < 3; ++p) {
        j["rules"].push_back({{"entropy", kInputNames[h]},
                              {"edge", kInputNames[e]},
                              {"pressure", kInputNames[p]},
                              {"depth", kDepthNames[static_cast<std::size_t>(sys.rules[9 * h + 3 * e + p])]}});
      }
    }
  }
  return j;
}

FuzzySystem fuzzy_system_from_json(const nlohmann::json& j) {
  try {
    FuzzySystem sys;
    sys.entropy = sets_from_json(j.at("inputs").at("entropy"), kInputNames);
    sys.edge = sets_from_json(j.at("inputs").at("edge"), kInputNames);
    sys.pressure = sets_from_json(j.at("inputs").at("pressure"), kInputNames);
    sys.depth = sets_from_json(j.at("output"), kDepthNames);
    std::array<bool, 27> seen{};
    const auto& rules = j.at("rules");
    if (!rules.is_array() || rules.size() != 27) {
      throw Error(ErrorCode::invalid_argument, "rule table must contain exactly 27 rules");
    }
    for (const auto& r : rules) {
      const int h = label_index(r.at("entropy").get<std::string>(), kInputNames);
      const int e = label_index(r.at("edge").get<std::string>(), kInputNames);
      const int p = label_index(r.at("pressure").get<std::string>(), kInputNames);
      const auto idx = static_cast<std::size_t>(9 * h + 3 * e + p);
      if (seen[idx]) throw Error(ErrorCode::invalid_argument, "duplicate rule antecedent");
      seen[idx] = true;
      sys.rules[idx] = static_cast<DepthLabel>(label_index(r.at("depth").get<std::string>(), kDepthNames));
    }
    sys.validate();
    return sys;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::invalid_argument, std::string("bad fuzzy config: ") + ex.what());
  }
}

FuzzySystem load_fuzzy_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::file_not_found, path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::invalid_argument, std::string("bad fuzzy config: ") + ex.what());
  }
  return fuzzy_system_from_json(j);
}

void save_fuzzy_system(const FuzzySystem& sys, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << to_json(sys).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
}

DepthInference infer_depth(double h_norm, double e, double p, const FuzzySystem& sys) {
  return defuzzify(fire_rules(clamp01(h_norm), clamp01(e), clamp01(p), sys), output_table(sys));
}

DepthMap depth_map(const FeatureMaps& fm, double p, const FuzzySystem& sys, const InputPins& pins) {
  const OutputTable table = output_table(sys);
  const double pressure = clamp01(pins.pressure.value_or(p));
  DepthMap out(fm.entropy.rows(), fm.entropy.cols(), 1);

  // Many pixels share the same rule strengths; the centroid is a pure
  // function of them, so memoizing cannot change any result.
  struct KeyHash {
    std::size_t operator()(const std::array<std::uint64_t, 3>& k) const noexcept {
      return static_cast<std::size_t>(k[0] * 0x9E3779B97F4A7C15ull ^ (k[1] + 0x632BE59BD9B4E019ull) * 31 ^ k[2]);
    }
  };
  std::unordered_map<std::array<std::uint64_t, 3>, std::uint8_t, KeyHash> memo;

  const auto entropy = fm.entropy.values();
  const auto edge = fm.edge.values();
  auto depths = out.values();
  for (std::size_t i = 0; i < depths.size(); ++i) {
    const double h = clamp01(pins.entropy.value_or(entropy[i] / 6.0));
    const double e = clamp01(pins.edge.value_or(edge[i]));
    const auto strength = fire_rules(h, e, pressure, sys);
    const std::array<std::uint64_t, 3> key = {std::bit_cast<std::uint64_t>(strength[0]),
                                              std::bit_cast<std::uint64_t>(strength[1]),
                                              std::bit_cast<std::uint64_t>(strength[2])};
    auto it = memo.find(key);
    if (it == memo.end()) {
      it = memo.emplace(key, static_cast<std::uint8_t>(defuzzify(strength, table).depth)).first;
    }
    depths[i] = it->second;
  }
  return out;
}

}  // namespace fuzzystego
