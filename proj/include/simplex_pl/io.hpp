// Copyright 2026 The Simplex Population Learning Authors.
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

// JSON and CSV persistence: game specs, policies, trainer/experiment
// configs and training checkpoints. Every JSON document written here
// carries a "schema_version" field.

#ifndef SIMPLEX_PL_IO_HPP_
#define SIMPLEX_PL_IO_HPP_

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "simplex_pl/errors.hpp"
#include "simplex_pl/game.hpp"
#include "simplex_pl/meta.hpp"
#include "simplex_pl/policy.hpp"
#include "simplex_pl/population.hpp"
#include "simplex_pl/rng.hpp"
#include "simplex_pl/trainer.hpp"

namespace simplex_pl {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace internal {

inline void RejectUnknownKeys(const Json& j, std::initializer_list<const char*> known,
                              const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + " must be a JSON object");
  std::set<std::string> ok(known.begin(), known.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.contains(it.key())) {
      throw SchemaError("unknown field '" + it.key() + "' in " + where);
    }
  }
}

template <typename T>
T Get(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError("missing field '" + std::string(key) + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw SchemaError("bad field '" + std::string(key) + "' in " + where + ": " + e.what());
  }
}

template <typename T>
T GetOr(const Json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? Get<T>(j, key, where) : fallback;
}

inline std::string Hex(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << x;
  return os.str();
}

inline std::uint64_t ParseHex(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 16);
    if (used != s.size()) throw SchemaError("bad hex value '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw SchemaError("bad hex value '" + s + "'");
  }
}

inline Json FiniteOrNull(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace internal

// --- Game spec ----------------------------------------------------------------

inline Json GameSpecToJson(const GameSpec& spec) {
  return {{"num_cards", spec.num_cards}, {"tie_rule", "discard"}};
}

inline GameSpec GameSpecFromJson(const Json& j) {
  internal::RejectUnknownKeys(j, {"num_cards", "tie_rule"}, "game spec");
  GameSpec spec;
  spec.num_cards = internal::Get<int>(j, "num_cards", "game spec");
  const auto tie = internal::GetOr<std::string>(j, "tie_rule", "discard", "game spec");
  if (tie != "discard") throw InvalidSpecError("unsupported tie_rule '" + tie + "'");
  spec.Validate();
  return spec;
}

// --- Policies -----------------------------------------------------------------

// {key: [[bid, prob], ...]} over every key (or, when `sparse`, only keys
// whose distribution is not uniform). Keys come out sorted because JSON
// objects are ordered maps here.
inline Json PolicyToJson(const TabularPolicy& policy, bool sparse = false) {
  Json out = Json::object();
  const auto& index = policy.index();
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto id = static_cast<InfoId>(i);
    if (sparse && policy.IsUniform(id)) continue;
    Json dist = Json::array();
    for (int a = 1; a <= policy.num_cards(); ++a) {
      const double p = policy.Prob(id, a);
      if (p > 0.0) dist.push_back({a, p});
    }
    out[index.key(id).ToString()] = std::move(dist);
  }
  return out;
}

// Missing keys are an error unless `sparse`, in which case they are uniform.
inline TabularPolicy PolicyFromJson(const Json& j, const GameSpec& spec,
                                    bool sparse = false) {
  if (!j.is_object()) throw SchemaError("policy must be a JSON object");
  TabularPolicy policy(spec);
  const auto& index = policy.index();
  std::vector<bool> seen(index.size(), false);
  const int k = spec.num_cards;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto id = index.Find(InfoStateKey::Parse(it.key()));
    if (!id) throw SchemaError("policy key '" + it.key() + "' is not reachable");
    std::vector<double> dist(k, 0.0);
    if (!it.value().is_array()) throw SchemaError("policy entry must be an array");
    for (const auto& pair : it.value()) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
          !pair[1].is_number()) {
        throw SchemaError("policy entry at '" + it.key() + "' must be [bid, prob]");
      }
      const int a = pair[0].get<int>();
      if (a < 1 || a > k) throw SchemaError("bid out of range at '" + it.key() + "'");
      dist[a - 1] += pair[1].get<double>();
    }
    try {
      policy.SetDistribution(*id, dist, false);
    } catch (const Error& e) {
      throw SchemaError(std::string("invalid distribution: ") + e.what());
    }
    seen[*id] = true;
  }
  if (!sparse) {
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) {
        throw SchemaError("policy is missing key '" +
                          index.key(static_cast<InfoId>(i)).ToString() + "'");
      }
    }
  }
  return policy;
}

// --- Matrices -----------------------------------------------------------------

inline Json MatrixToJson(const Matrix& m) { return m.ToRows(); }

inline Matrix MatrixFromJson(const Json& j, const std::string& where) {
  try {
    return Matrix::FromRows(j.get<std::vector<std::vector<double>>>());
  } catch (const Json::exception& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

// --- Trainer config -------------------------------------------------------------

inline const char* AbrKindName(AbrKind k) {
  return k == AbrKind::kExactOracle ? "exact_oracle" : "tabular_q_learner";
}

inline AbrKind AbrKindFromName(const std::string& s) {
  if (s == "exact_oracle") return AbrKind::kExactOracle;
  if (s == "tabular_q_learner") return AbrKind::kTabularQLearner;
  throw SchemaError("unknown abr_kind '" + s + "'");
}

inline Json TrainerConfigToJson(const TrainerConfig& c) {
  return {{"epsilon", c.epsilon},
          {"alpha", c.alpha},
          {"max_population", c.max_population},
          {"br_gain_threshold", c.br_gain_threshold},
          {"grid_resolution", c.grid_resolution},
          {"abr_kind", AbrKindName(c.abr_kind)},
          {"abr_budget", c.abr_budget},
          {"rng_seed", c.rng_seed},
          {"invocations_per_round", c.invocations_per_round},
          {"max_rounds", c.max_rounds},
          {"expansion_interval", c.expansion_interval},
          {"nash_tolerance", c.nash_tolerance},
          {"q_learner",
           {{"explore_start", c.q_learner.explore_start},
            {"explore_end", c.q_learner.explore_end},
            {"step_tau", c.q_learner.step_tau}}}};
}

// Missing fields take their defaults.
inline TrainerConfig TrainerConfigFromJson(const Json& j) {
  const std::string where = "trainer config";
  internal::RejectUnknownKeys(
      j,
      {"epsilon", "alpha", "max_population", "br_gain_threshold", "grid_resolution",
       "abr_kind", "abr_budget", "rng_seed", "invocations_per_round", "max_rounds",
       "expansion_interval", "nash_tolerance", "q_learner"},
      where);
  using internal::GetOr;
  TrainerConfig c;
  c.epsilon = GetOr(j, "epsilon", c.epsilon, where);
  c.alpha = GetOr(j, "alpha", c.alpha, where);
  c.max_population = GetOr(j, "max_population", c.max_population, where);
  c.br_gain_threshold = GetOr(j, "br_gain_threshold", c.br_gain_threshold, where);
  c.grid_resolution = GetOr(j, "grid_resolution", c.grid_resolution, where);
  c.abr_kind = AbrKindFromName(
      GetOr<std::string>(j, "abr_kind", AbrKindName(c.abr_kind), where));
  c.abr_budget = GetOr(j, "abr_budget", c.abr_budget, where);
  c.rng_seed = GetOr(j, "rng_seed", c.rng_seed, where);
  c.invocations_per_round = GetOr(j, "invocations_per_round", c.invocations_per_round, where);
  c.max_rounds = GetOr(j, "max_rounds", c.max_rounds, where);
  c.expansion_interval = GetOr(j, "expansion_interval", c.expansion_interval, where);
  c.nash_tolerance = GetOr(j, "nash_tolerance", c.nash_tolerance, where);
  if (j.contains("q_learner")) {
    const auto& q = j.at("q_learner");
    internal::RejectUnknownKeys(q, {"explore_start", "explore_end", "step_tau"},
                                "q_learner config");
    c.q_learner.explore_start = GetOr(q, "explore_start", c.q_learner.explore_start, where);
    c.q_learner.explore_end = GetOr(q, "explore_end", c.q_learner.explore_end, where);
    c.q_learner.step_tau = GetOr(q, "step_tau", c.q_learner.step_tau, where);
  }
  try {
    c.Validate();
  } catch (const InvalidSpecError& e) {
    throw SchemaError(e.what());
  }
  return c;
}

// --- Experiment config ------------------------------------------------------------

struct EvalSettings {
  // Empty means DefaultConcentrationLevels over the effective population.
  std::optional<std::vector<double>> levels;
  int samples_per_level = 64;
  // 0 = exact evaluation; otherwise Monte-Carlo episodes per pair.
  int episodes = 0;
  int jsd_episodes = 256;
  int trace_episodes = 8;
};

struct ExperimentConfig {
  GameSpec game;
  TrainerConfig trainer;
  EvalSettings eval;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
};

inline Json EvalSettingsToJson(const EvalSettings& e) {
  Json j = {{"samples_per_level", e.samples_per_level},
            {"mode", e.episodes == 0 ? "exact" : "monte_carlo"},
            {"episodes", e.episodes},
            {"jsd_episodes", e.jsd_episodes},
            {"trace_episodes", e.trace_episodes}};
  j["levels"] = e.levels ? Json(*e.levels) : Json(nullptr);
  return j;
}

inline EvalSettings EvalSettingsFromJson(const Json& j) {
  const std::string where = "eval settings";
  internal::RejectUnknownKeys(
      j, {"levels", "samples_per_level", "mode", "episodes", "jsd_episodes", "trace_episodes"},
      where);
  EvalSettings e;
  if (j.contains("levels") && !j.at("levels").is_null()) {
    e.levels = internal::Get<std::vector<double>>(j, "levels", where);
    if (e.levels->empty()) throw InvalidSpecError("eval levels list is empty");
    for (double a : *e.levels) {
      if (!(a > 0.0)) throw SchemaError("concentration levels must be > 0");
    }
  }
  e.samples_per_level = internal::GetOr(j, "samples_per_level", e.samples_per_level, where);
  const auto mode = internal::GetOr<std::string>(j, "mode", "exact", where);
  if (mode == "exact") {
    e.episodes = 0;
  } else if (mode == "monte_carlo") {
    e.episodes = internal::GetOr(j, "episodes", 32, where);
    if (e.episodes < 1) throw SchemaError("monte_carlo mode needs episodes >= 1");
  } else {
    throw SchemaError("unknown eval mode '" + mode + "'");
  }
  e.jsd_episodes = internal::GetOr(j, "jsd_episodes", e.jsd_episodes, where);
  e.trace_episodes = internal::GetOr(j, "trace_episodes", e.trace_episodes, where);
  if (e.samples_per_level < 1) throw SchemaError("samples_per_level must be >= 1");
  return e;
}

inline Json ExperimentConfigToJson(const ExperimentConfig& c) {
  return {{"schema_version", kSchemaVersion},
          {"game", GameSpecToJson(c.game)},
          {"trainer", TrainerConfigToJson(c.trainer)},
          {"eval", EvalSettingsToJson(c.eval)},
          {"output_dir", c.output_dir},
          {"seed", c.seed}};
}

// The top-level seed, when present, overrides trainer.rng_seed.
inline ExperimentConfig ExperimentConfigFromJson(const Json& j) {
  const std::string where = "experiment config";
  internal::RejectUnknownKeys(
      j, {"schema_version", "game", "trainer", "eval", "output_dir", "seed"}, where);
  const int version = internal::GetOr(j, "schema_version", kSchemaVersion, where);
  if (version != kSchemaVersion) {
    throw SchemaError("unsupported schema_version " + std::to_string(version));
  }
  ExperimentConfig c;
  c.game = GameSpecFromJson(internal::Get<Json>(j, "game", where));
  if (j.contains("trainer")) c.trainer = TrainerConfigFromJson(j.at("trainer"));
  if (j.contains("eval")) c.eval = EvalSettingsFromJson(j.at("eval"));
  c.output_dir = internal::GetOr<std::string>(j, "output_dir", c.output_dir, where);
  c.seed = internal::GetOr<std::uint64_t>(j, "seed", c.trainer.rng_seed, where);
  c.trainer.rng_seed = c.seed;
  return c;
}

// --- Checkpoints --------------------------------------------------------------------

struct Checkpoint {
  PopulationSnapshot population;
  ConditionalPolicyStore store;
  TrainerConfig config;
  Rng rng;
  int rounds = 0;
  bool converged = false;
  double final_gain = std::numeric_limits<double>::infinity();
};

inline Checkpoint CheckpointFromResult(const TrainingResult& r) {
  return {r.population, r.store, r.config, r.rng, r.rounds, r.converged, r.final_gain};
}

// Policies are stored sparsely (uniform keys omitted); store entries bound
// to a population slot reference it instead of repeating the policy.
inline Json CheckpointToJson(const Checkpoint& c) {
  Json policies = Json::array();
  for (const auto& p : c.population.policies) policies.push_back(PolicyToJson(p, true));
  Json store = Json::array();
  for (const auto& e : c.store.entries()) {
    Json entry = {{"anchor", e.anchor},
                  {"trained_target", internal::Hex(e.trained_target)}};
    if (e.slot) {
      entry["slot"] = *e.slot;
    } else {
      entry["slot"] = nullptr;
      entry["policy"] = PolicyToJson(e.policy, true);
    }
    store.push_back(std::move(entry));
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "simplex_pl.checkpoint"},
          {"spec", GameSpecToJson(c.population.spec)},
          {"config", TrainerConfigToJson(c.config)},
          {"policies", std::move(policies)},
          {"meta_graph", MatrixToJson(c.population.meta_graph)},
          {"payoff", MatrixToJson(c.population.payoff)},
          {"store", std::move(store)},
          {"rng", {{"key", internal::Hex(c.rng.key())}, {"counter", c.rng.counter()}}},
          {"rounds", c.rounds},
          {"converged", c.converged},
          {"final_gain", internal::FiniteOrNull(c.final_gain)}};
}

inline Checkpoint CheckpointFromJson(const Json& j) {
  const std::string where = "checkpoint";
  internal::RejectUnknownKeys(
      j,
      {"schema_version", "kind", "spec", "config", "policies", "meta_graph", "payoff",
       "store", "rng", "rounds", "converged", "final_gain"},
      where);
  if (internal::Get<int>(j, "schema_version", where) != kSchemaVersion) {
    throw SchemaError("unsupported checkpoint schema_version");
  }
  if (internal::Get<std::string>(j, "kind", where) != "simplex_pl.checkpoint") {
    throw SchemaError("document is not a checkpoint");
  }
  Checkpoint c;
  c.population.spec = GameSpecFromJson(internal::Get<Json>(j, "spec", where));
  c.config = TrainerConfigFromJson(internal::Get<Json>(j, "config", where));
  for (const auto& p : internal::Get<Json>(j, "policies", where)) {
    c.population.policies.push_back(PolicyFromJson(p, c.population.spec, true));
  }
  c.population.meta_graph = MatrixFromJson(internal::Get<Json>(j, "meta_graph", where), "meta_graph");
  c.population.payoff = MatrixFromJson(internal::Get<Json>(j, "payoff", where), "payoff");
  c.population.Validate();
  const std::size_t n = c.population.size();
  for (const auto& e : internal::Get<Json>(j, "store", where)) {
    StoreEntry entry{internal::Get<std::vector<double>>(e, "anchor", "store entry"),
                     c.population.policies.front(), std::nullopt,
                     internal::ParseHex(internal::Get<std::string>(e, "trained_target", "store entry"))};
    if (entry.anchor.size() != n) throw SchemaError("store anchor has wrong length");
    try {
      MixtureWeights check(entry.anchor);
    } catch (const InvalidMixtureError& err) {
      throw SchemaError(std::string("store anchor: ") + err.what());
    }
    if (e.contains("slot") && !e.at("slot").is_null()) {
      const auto slot = internal::Get<std::size_t>(e, "slot", "store entry");
      if (slot == 0 || slot >= n) throw SchemaError("store slot out of range");
      entry.slot = slot;
      entry.policy = c.population.policies[slot];
    } else {
      entry.policy = PolicyFromJson(internal::Get<Json>(e, "policy", "store entry"),
                                    c.population.spec, true);
    }
    c.store.mutable_entries().push_back(std::move(entry));
  }
  const auto& rng = internal::Get<Json>(j, "rng", where);
  c.rng = Rng(internal::ParseHex(internal::Get<std::string>(rng, "key", "rng")),
              internal::Get<std::uint64_t>(rng, "counter", "rng"));
  c.rounds = internal::Get<int>(j, "rounds", where);
  c.converged = internal::Get<bool>(j, "converged", where);
  c.final_gain = j.at("final_gain").is_null() ? std::numeric_limits<double>::infinity()
                                              : internal::Get<double>(j, "final_gain", where);
  return c;
}

// --- Files --------------------------------------------------------------------------

inline Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

// Writes to a sibling temporary file and renames it over the target.
inline void WriteFileAtomically(const std::filesystem::path& path,
                                const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// indent < 0 writes compact JSON.
inline void WriteJsonFile(const std::filesystem::path& path, const Json& j, int indent = 2) {
  WriteFileAtomically(path, j.dump(indent) + "\n");
}

// Minimal CSV builder: header row plus rows of already formatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  template <typename... Cells>
  void Add(const Cells&... cells) {
    std::vector<std::string> row;
    (row.push_back(Cell(cells)), ...);
    if (row.size() != header_.size()) throw Error("CSV row width mismatch");
    rows_.push_back(std::move(row));
  }
  void AddRow(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw Error("CSV row width mismatch");
    rows_.push_back(std::move(row));
  }

  std::string ToString() const {
    std::string out = Join(header_);
    for (const auto& r : rows_) out += Join(r);
    return out;
  }
  void Write(const std::filesystem::path& path) const { WriteFileAtomically(path, ToString()); }

  static std::string Cell(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
  }
  static std::string Cell(const std::string& s) { return s; }
  static std::string Cell(const char* s) { return s; }
  template <typename Int>
    requires std::is_integral_v<Int>
  static std::string Cell(Int x) { return std::to_string(x); }

 private:
  static std::string Join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) line += (i ? "," : "") + cells[i];
    return line + "\n";
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_IO_HPP_
