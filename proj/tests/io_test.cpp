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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "simplex_pl/io.hpp"
#include "test_util.hpp"

namespace simplex_pl {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("simplex_pl_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(GameSpecJson, RoundTripAndValidation) {
  EXPECT_EQ(GameSpecFromJson(GameSpecToJson(GameSpec{4})), GameSpec{4});
  EXPECT_THROW(GameSpecFromJson(Json{{"num_cards", 1}}), InvalidSpecError);
  EXPECT_THROW(GameSpecFromJson(Json{{"num_cards", 3}, {"tie_rule", "split"}}), InvalidSpecError);
  EXPECT_THROW(GameSpecFromJson(Json{{"num_cards", 3}, {"extra", 1}}), SchemaError);
  EXPECT_THROW(GameSpecFromJson(Json{{"num_cards", "three"}}), SchemaError);
}

TEST(PolicyJson, FullFormatIsLossless) {
  Rng rng(1);
  for (int k : {2, 4}) {
    const auto p = testing::RandomPolicy(GameSpec{k}, rng);
    const auto j = PolicyToJson(p);
    EXPECT_EQ(j.size(), p.index().size());
    EXPECT_EQ(PolicyFromJson(j, GameSpec{k}), p);
    EXPECT_EQ(PolicyFromJson(Json::parse(j.dump()), GameSpec{k}), p);
  }
}

TEST(PolicyJson, SparseFormatOmitsUniformKeys) {
  const GameSpec spec{4};
  const auto p = PruneUnreached(PointMatchingPolicy(spec));
  const auto j = PolicyToJson(p, true);
  EXPECT_LT(j.size(), p.index().size());
  EXPECT_EQ(j.at("t0"), Json::parse("[[4, 1.0]]"));
  EXPECT_EQ(PolicyFromJson(j, spec, true), p);
  EXPECT_THROW(PolicyFromJson(j, spec, false), SchemaError);
}

TEST(PolicyJson, RejectsMalformedEntries) {
  const GameSpec spec{3};
  EXPECT_THROW(PolicyFromJson(Json::parse(R"({"t1:1+": [[2, 1.0]]})"), spec, true), SchemaError);
  EXPECT_THROW(PolicyFromJson(Json::parse(R"({"t1:3+": [[3, 1.0]]})"), spec, true), SchemaError);
  EXPECT_THROW(PolicyFromJson(Json::parse(R"({"t0": [[1, 0.5]]})"), spec, true), SchemaError);
  EXPECT_THROW(PolicyFromJson(Json::parse(R"({"t0": [[4, 1.0]]})"), spec, true), SchemaError);
  EXPECT_THROW(PolicyFromJson(Json::parse(R"({"t0": [1, 1.0]})"), spec, true), SchemaError);
  EXPECT_THROW(PolicyFromJson(Json::parse(R"({"bogus": []})"), spec, true), SchemaError);
  EXPECT_THROW(PolicyFromJson(Json::array(), spec, true), SchemaError);
}

TEST(TrainerConfigJson, RoundTripDefaultsAndErrors) {
  TrainerConfig c;
  c.epsilon = 0.25;
  c.abr_kind = AbrKind::kTabularQLearner;
  c.rng_seed = 0xfeedfacecafebeefULL;
  c.q_learner.step_tau = 7.5;
  const auto j = TrainerConfigToJson(c);
  EXPECT_EQ(TrainerConfigToJson(TrainerConfigFromJson(j)), j);
  const auto defaults = TrainerConfigFromJson(Json::object());
  EXPECT_EQ(TrainerConfigToJson(defaults), TrainerConfigToJson(TrainerConfig{}));
  EXPECT_THROW(TrainerConfigFromJson(Json{{"epsilom", 0.5}}), SchemaError);
  EXPECT_THROW(TrainerConfigFromJson(Json{{"epsilon", 2.0}}), SchemaError);
  EXPECT_THROW(TrainerConfigFromJson(Json{{"abr_kind", "magic"}}), SchemaError);
  EXPECT_THROW(TrainerConfigFromJson(Json{{"q_learner", {{"tau", 1}}}}), SchemaError);
}

TEST(ExperimentConfigJson, RoundTripIsStable) {
  const auto j = Json::parse(R"({
    "schema_version": 1,
    "game": {"num_cards": 4},
    "trainer": {"max_population": 5, "rng_seed": 3},
    "eval": {"levels": [0.1, 1.0], "samples_per_level": 8, "mode": "monte_carlo", "episodes": 16},
    "output_dir": "runs/a",
    "seed": 42
  })");
  const auto c = ExperimentConfigFromJson(j);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.trainer.rng_seed, 42u);
  EXPECT_EQ(c.eval.episodes, 16);
  EXPECT_EQ(c.game, GameSpec{4});
  const auto once = ExperimentConfigToJson(c);
  EXPECT_EQ(ExperimentConfigToJson(ExperimentConfigFromJson(once)), once);
  EXPECT_EQ(once.at("schema_version"), kSchemaVersion);
}

TEST(ExperimentConfigJson, Errors) {
  EXPECT_THROW(ExperimentConfigFromJson(Json::parse(R"({"seed": 1})")), SchemaError);
  EXPECT_THROW(ExperimentConfigFromJson(Json::parse(R"({"schema_version": 9, "game": {"num_cards": 3}})")),
               SchemaError);
  EXPECT_THROW(ExperimentConfigFromJson(Json::parse(R"({"game": {"num_cards": 3}, "eval": {"levels": []}})")),
               InvalidSpecError);
  EXPECT_THROW(ExperimentConfigFromJson(Json::parse(R"({"game": {"num_cards": 3}, "eval": {"mode": "fast"}})")),
               SchemaError);
}

const TrainingResult& SmallRun() {
  static const TrainingResult r = [] {
    TrainerConfig config;
    config.max_population = 4;
    config.grid_resolution = 2;
    config.rng_seed = 9;
    return Train(config, GameSpec{4});
  }();
  return r;
}

TEST(CheckpointJson, RoundTripIsExact) {
  const auto ck = CheckpointFromResult(SmallRun());
  const auto j = CheckpointToJson(ck);
  EXPECT_EQ(j.at("schema_version"), kSchemaVersion);
  const auto back = CheckpointFromJson(Json::parse(j.dump()));
  EXPECT_EQ(CheckpointToJson(back).dump(), j.dump());
  ASSERT_EQ(back.population.size(), ck.population.size());
  for (std::size_t i = 0; i < ck.population.size(); ++i) {
    EXPECT_EQ(back.population.policies[i], ck.population.policies[i]);
  }
  EXPECT_EQ(back.population.payoff.ToRows(), ck.population.payoff.ToRows());
  ASSERT_EQ(back.store.size(), ck.store.size());
  for (std::size_t i = 0; i < ck.store.size(); ++i) {
    EXPECT_EQ(back.store.entries()[i].anchor, ck.store.entries()[i].anchor);
    EXPECT_EQ(back.store.entries()[i].policy, ck.store.entries()[i].policy);
    EXPECT_EQ(back.store.entries()[i].slot, ck.store.entries()[i].slot);
    EXPECT_EQ(back.store.entries()[i].trained_target, ck.store.entries()[i].trained_target);
  }
  EXPECT_EQ(back.rng.key(), ck.rng.key());
  EXPECT_EQ(back.rng.counter(), ck.rng.counter());
  EXPECT_EQ(back.final_gain, ck.final_gain);
}

TEST(CheckpointJson, InfiniteGainIsNull) {
  auto ck = CheckpointFromResult(SmallRun());
  ck.final_gain = std::numeric_limits<double>::infinity();
  const auto j = CheckpointToJson(ck);
  EXPECT_TRUE(j.at("final_gain").is_null());
  EXPECT_TRUE(std::isinf(CheckpointFromJson(j).final_gain));
}

TEST(CheckpointJson, RejectsCorruption) {
  const auto good = CheckpointToJson(CheckpointFromResult(SmallRun()));
  auto mutate = [&](auto fn) {
    Json j = good;
    fn(j);
    return j;
  };
  EXPECT_THROW(CheckpointFromJson(mutate([](Json& j) { j.erase("payoff"); })), SchemaError);
  EXPECT_THROW(CheckpointFromJson(mutate([](Json& j) { j["schema_version"] = 2; })), SchemaError);
  EXPECT_THROW(CheckpointFromJson(mutate([](Json& j) { j["kind"] = "other"; })), SchemaError);
  EXPECT_THROW(CheckpointFromJson(mutate([](Json& j) { j["payoff"][0][1] = 123.0; })), SchemaError);
  EXPECT_THROW(CheckpointFromJson(mutate([](Json& j) { j["meta_graph"][0][0] = 0.5; })), SchemaError);
  EXPECT_THROW(CheckpointFromJson(mutate([](Json& j) { j["store"][0]["anchor"].push_back(0.0); })),
               SchemaError);
  EXPECT_THROW(CheckpointFromJson(mutate([](Json& j) { j["rng"]["key"] = "xyz"; })), SchemaError);
  EXPECT_THROW(CheckpointFromJson(mutate([](Json& j) { j["policies"][0]["t0"] = "x"; })), SchemaError);
}

TEST(Files, AtomicWriteReplacesContents) {
  const auto dir = TempDir("atomic");
  const auto path = dir / "nested" / "x.json";
  WriteJsonFile(path, Json{{"a", 1}});
  WriteJsonFile(path, Json{{"a", 2}});
  EXPECT_EQ(ReadJsonFile(path).at("a"), 2);
  EXPECT_FALSE(fs::exists(fs::path(path.string() + ".tmp")));
  EXPECT_THROW(ReadJsonFile(dir / "missing.json"), SchemaError);
  std::ofstream(dir / "bad.json") << "{oops";
  EXPECT_THROW(ReadJsonFile(dir / "bad.json"), SchemaError);
}

TEST(Files, CsvTable) {
  CsvTable t({"i", "name", "value"});
  t.Add(1, "a", 0.5);
  t.Add(std::size_t{2}, std::string("b"), 1.0 / 3.0);
  EXPECT_EQ(t.ToString(), "i,name,value\n1,a,0.5\n2,b,0.33333333333333331\n");
  EXPECT_THROW(t.Add(1, 2), Error);
  const auto dir = TempDir("csv");
  t.Write(dir / "t.csv");
  EXPECT_EQ(Slurp(dir / "t.csv"), t.ToString());
}

}  // namespace
}  // namespace simplex_pl
