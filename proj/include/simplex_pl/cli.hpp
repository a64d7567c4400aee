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

// Command-line front end. RunCli parses argv and dispatches to the
// subcommands; the tools/ binary is a thin wrapper so tests can drive the
// same code in-process.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage (bad arguments, missing
// or malformed config).

#ifndef SIMPLEX_PL_CLI_HPP_
#define SIMPLEX_PL_CLI_HPP_

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simplex_pl/eval.hpp"
#include "simplex_pl/io.hpp"
#include "simplex_pl/trainer.hpp"

namespace simplex_pl::cli {

inline constexpr const char* kOutputDirEnv = "SIMPLEX_PL_OUTPUT_DIR";

enum ExitCode : int { kOk = 0, kRuntime = 1, kUsage = 2 };

class UsageError : public Error {
 public:
  using Error::Error;
};

// Env var beats --out, which beats the config's output_dir.
inline std::filesystem::path ResolveOutputDir(const std::string& flag,
                                              const std::string& fallback) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  if (!flag.empty()) return flag;
  return fallback.empty() ? "." : fallback;
}

inline ExperimentConfig LoadExperimentConfig(const std::string& path) {
  try {
    return ExperimentConfigFromJson(ReadJsonFile(path));
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  } catch (const InvalidSpecError& e) {
    throw UsageError(e.what());
  }
}

// Accepts either a full experiment config (its "eval" section is used) or a
// bare eval-settings object.
inline EvalSettings LoadEvalSettings(const std::string& path, std::uint64_t* seed) {
  try {
    const auto j = ReadJsonFile(path);
    if (j.contains("game")) {
      const auto c = ExperimentConfigFromJson(j);
      if (seed) *seed = c.seed;
      return c.eval;
    }
    return EvalSettingsFromJson(j);
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  } catch (const InvalidSpecError& e) {
    throw UsageError(e.what());
  }
}

inline Checkpoint LoadCheckpoint(const std::string& path) {
  return CheckpointFromJson(ReadJsonFile(path));
}

inline CsvTable MatrixCsv(const Matrix& m) {
  CsvTable t({"i", "j", "value"});
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) t.Add(i, j, m(i, j));
  }
  return t;
}

// Policy used for the "uninformed" role: the store entry nearest the uniform
// prior over the effective population, or the Nash mixture without a store.
inline TabularPolicy UninformedPolicy(const Checkpoint& c) {
  if (!c.store.empty()) return c.store.Lookup(UniformOverEffective(c.population.meta_graph));
  const auto ne = SolveZeroSumNash(c.population.payoff);
  return AggregateMixture(c.population.policies, MixtureWeights(ne.strategy));
}

// Rounds away solver noise (12 decimals) so that X vs X prints 0.0 and
// swapped arguments print the exact negation.
inline std::string FormatValue(double v) {
  v = std::round(v * 1e12) / 1e12;
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  return Json(v).dump();
}

// --- train ----------------------------------------------------------------

struct TrainArgs {
  std::string config;
  std::string out;
  int checkpoint_every = 10;
};

inline int CmdTrain(const TrainArgs& args, std::ostream& log) {
  const auto config = LoadExperimentConfig(args.config);
  const auto dir = ResolveOutputDir(args.out, config.output_dir);
  std::filesystem::create_directories(dir);
  WriteJsonFile(dir / "config.json", ExperimentConfigToJson(config));

  SimplexTrainer trainer(config.trainer, config.game);
  if (args.checkpoint_every > 0) {
    trainer.set_round_callback([&](const TrainingResult& r) {
      if ((r.rounds + 1) % args.checkpoint_every == 0) {
        WriteJsonFile(dir / "checkpoint.json", CheckpointToJson(CheckpointFromResult(r)), -1);
      }
    });
  }
  const auto result = trainer.Run();
  WriteJsonFile(dir / "checkpoint.json", CheckpointToJson(CheckpointFromResult(result)), -1);

  CsvTable history({"round", "population_size", "effective_size", "frontier_gain",
                    "expanded", "abr_calls", "slot_updates"});
  CsvTable gains({"iteration", "value"});
  for (const auto& r : result.history) {
    history.Add(r.round, r.population_size, r.effective_size,
                r.frontier_gain ? CsvTable::Cell(*r.frontier_gain) : std::string(),
                r.expanded ? 1 : 0, r.abr_calls, r.slot_updates);
    if (r.frontier_gain) gains.Add(r.round, *r.frontier_gain);
  }
  history.Write(dir / "history.csv");
  gains.Write(dir / "exploitability.csv");
  MatrixCsv(result.population.payoff).Write(dir / "payoff.csv");
  MatrixCsv(result.population.meta_graph).Write(dir / "meta_graph.csv");

  log << "population " << result.population.size() << ", store "
      << result.store.size() << ", rounds " << result.rounds << ", converged "
      << (result.converged ? "yes" : "no") << ", frontier gain "
      << result.final_gain << "\n";
  log << "wrote " << (dir / "checkpoint.json").string() << "\n";
  return kOk;
}

// --- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
};

inline int CmdEval(const EvalArgs& args, std::ostream& log) {
  std::uint64_t seed = 0;
  EvalSettings settings;
  if (!args.config.empty()) settings = LoadEvalSettings(args.config, &seed);
  if (args.seed) seed = *args.seed;
  if (args.mode) {
    if (*args.mode == "exact") {
      settings.episodes = 0;
    } else if (settings.episodes == 0) {
      settings.episodes = 32;
    }
  }
  const auto ck = LoadCheckpoint(args.checkpoint);
  const auto& pop = ck.population;
  const auto dir = ResolveOutputDir(args.out, "");
  std::filesystem::create_directories(dir);

  const auto levels = settings.levels.value_or(
      DefaultConcentrationLevels(UniqueRows(pop.meta_graph).size()));
  const Rng rng = Rng(seed).Fork("eval");
  const auto report = AnyMixtureExperiment(pop, ck.store, levels, settings.samples_per_level,
                                           rng, EvalMode{settings.episodes});

  CsvTable summary({"level", "alpha", "H", "candidate", "mean_return", "stderr"});
  CsvTable samples({"level", "sample", "H", "candidate", "return", "stderr"});
  std::vector<double> entropies, gaps;
  for (std::size_t l = 0; l < report.levels.size(); ++l) {
    const auto& level = report.levels[l];
    for (Candidate c : kCandidates) {
      if (!report.Available(c)) continue;
      const auto ci = static_cast<std::size_t>(c);
      summary.Add(l, level.alpha, level.mean_entropy, CandidateName(c),
                  level.returns[ci].mean, level.returns[ci].stderr_);
      for (std::size_t s = 0; s < level.samples.size(); ++s) {
        samples.Add(l, s, level.samples[s].entropy, CandidateName(c),
                    level.samples[s].returns[ci], level.samples[s].stderrs[ci]);
      }
    }
    entropies.push_back(level.mean_entropy);
    if (report.has_store) {
      gaps.push_back(level.returns[static_cast<std::size_t>(Candidate::kInformed)].mean -
                     level.returns[static_cast<std::size_t>(Candidate::kUninformed)].mean);
    }
  }
  summary.Write(dir / "any_mixture.csv");
  samples.Write(dir / "any_mixture_samples.csv");

  // Exploitability of the Nash mixture over each population prefix.
  CsvTable expl({"iteration", "value"});
  for (std::size_t n = 1; n <= pop.size(); ++n) {
    const auto ne = SolveZeroSumNash(pop.payoff.Leading(n));
    const std::span<const TabularPolicy> prefix(pop.policies.data(), n);
    expl.Add(n, Exploitability(MixtureWeights(ne.strategy), prefix));
  }
  expl.Write(dir / "exploitability.csv");

  Json out = {{"schema_version", kSchemaVersion},
              {"levels", levels},
              {"samples_per_level", settings.samples_per_level},
              {"mode", settings.episodes == 0 ? "exact" : "monte_carlo"},
              {"episodes", settings.episodes},
              {"seed", seed}};
  if (gaps.size() > 1) {
    out["gap_entropy_spearman"] = internal::FiniteOrNull(SpearmanCorrelation(entropies, gaps));
  }
  WriteJsonFile(dir / "eval_summary.json", out);
  log << "wrote " << (dir / "any_mixture.csv").string() << " and "
      << (dir / "exploitability.csv").string() << "\n";
  return kOk;
}

// --- posterior-trace --------------------------------------------------------

struct TraceArgs {
  std::string checkpoint;
  std::string prior = "uniform";
  std::string player = "uninformed";
  int episodes = 8;
  std::uint64_t seed = 0;
  std::string out;
};

inline MixtureWeights ParsePrior(const std::string& text, std::size_t n) {
  if (text == "uniform") return MixtureWeights::Uniform(n);
  std::vector<double> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      w.push_back(std::stod(item, &used));
      if (used != item.size()) throw UsageError("bad prior entry '" + item + "'");
    } catch (const std::logic_error&) {
      throw UsageError("bad prior entry '" + item + "'");
    }
  }
  if (w.size() != n) {
    throw UsageError("prior has " + std::to_string(w.size()) + " entries, population has " +
                     std::to_string(n));
  }
  try {
    return MixtureWeights(w);
  } catch (const InvalidMixtureError& e) {
    throw UsageError(e.what());
  }
}

inline int CmdPosteriorTrace(const TraceArgs& args, std::ostream& log) {
  const auto ck = LoadCheckpoint(args.checkpoint);
  const auto& pop = ck.population;
  const auto prior = ParsePrior(args.prior, pop.size());
  TabularPolicy player = UninformedPolicy(ck);
  if (args.player == "informed") {
    if (ck.store.empty()) throw Error("checkpoint has no conditional policy store");
    player = ck.store.Lookup(prior.values());
  } else if (args.player == "nash") {
    const auto ne = SolveZeroSumNash(pop.payoff);
    player = AggregateMixture(pop.policies, MixtureWeights(ne.strategy));
  }
  const auto rows =
      PosteriorTrace(player, pop.policies, prior, args.episodes, Rng(args.seed).Fork("trace"));
  std::vector<std::string> header = {"episode", "turn", "true_opponent"};
  for (std::size_t i = 0; i < pop.size(); ++i) header.push_back("posterior_" + std::to_string(i));
  CsvTable table(header);
  for (const auto& r : rows) {
    std::vector<std::string> cells = {CsvTable::Cell(r.episode), CsvTable::Cell(r.turn),
                                      CsvTable::Cell(r.true_opponent)};
    for (double p : r.posterior) cells.push_back(CsvTable::Cell(p));
    table.AddRow(std::move(cells));
  }
  const auto dir = ResolveOutputDir(args.out, "");
  std::filesystem::create_directories(dir);
  table.Write(dir / "posterior_trace.csv");
  log << "wrote " << (dir / "posterior_trace.csv").string() << "\n";
  return kOk;
}

// --- rpp ------------------------------------------------------------------

struct PairArgs {
  std::string a;
  std::string b;
  std::string out;
  int episodes = 256;
  std::uint64_t seed = 0;
};

inline int CmdRpp(const PairArgs& args, std::ostream& log) {
  const auto a = LoadCheckpoint(args.a);
  const auto b = LoadCheckpoint(args.b);
  if (!(a.population.spec == b.population.spec)) {
    throw SpecMismatchError("checkpoints were trained on different games");
  }
  const auto u = CrossPayoff(a.population.policies, b.population.policies);
  const double v = Rpp(u);
  const auto dir = ResolveOutputDir(args.out, "");
  std::filesystem::create_directories(dir);
  MatrixCsv(u).Write(dir / "cross_payoff.csv");
  CsvTable table({"population_a", "population_b", "rpp"});
  table.Add(args.a, args.b, FormatValue(v));
  table.Write(dir / "rpp.csv");
  log << FormatValue(v) << "\n";
  return kOk;
}

// --- jsd ------------------------------------------------------------------

inline int CmdJsd(const PairArgs& args, std::ostream& log) {
  const auto a = LoadCheckpoint(args.a);
  const auto b = LoadCheckpoint(args.b);
  if (!(a.population.spec == b.population.spec)) {
    throw SpecMismatchError("checkpoints were trained on different games");
  }
  const Rng rng = Rng(args.seed).Fork("jsd");
  const auto d = JsdMatrix(a.population.policies, b.population.policies, args.episodes, rng);
  const auto dir = ResolveOutputDir(args.out, "");
  std::filesystem::create_directories(dir);
  MatrixCsv(d.values).Write(dir / "jsd.csv");

  const auto row_policy = UninformedPolicy(a);
  CsvTable curve({"column", "turn", "weighted_divergence", "continuing"});
  for (std::size_t j = 0; j < b.population.size(); ++j) {
    const auto c = PosteriorWeightedDivergence(d.values, a.population.policies, row_policy,
                                               b.population.policies[j], j, args.episodes,
                                               rng.Fork("curve", j));
    for (std::size_t t = 0; t < c.weighted.size(); ++t) {
      curve.Add(j, t, c.weighted[t], c.continuing[t]);
    }
  }
  curve.Write(dir / "divergence_curve.csv");
  log << "wrote " << (dir / "jsd.csv").string() << "\n";
  return kOk;
}

// --- dispatch -------------------------------------------------------------

inline int RunCli(int argc, const char* const* argv, std::ostream& out = std::cout,
                  std::ostream& err = std::cerr) {
  CLI::App app{"Simplex population learning on goofspiel"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a population from a JSON config");
  train_cmd->add_option("config", train.config, "Experiment config")
      ->required()->check(CLI::ExistingFile);
  train_cmd->add_option("-o,--out", train.out, "Output directory");
  train_cmd->add_option("--checkpoint-every", train.checkpoint_every,
                        "Rounds between intermediate checkpoints (0 = final only)")
      ->check(CLI::NonNegativeNumber);

  EvalArgs eval;
  std::string eval_mode;
  std::uint64_t eval_seed = 0;
  auto* eval_cmd = app.add_subcommand("eval", "Any-mixture and exploitability evaluation");
  eval_cmd->add_option("checkpoint", eval.checkpoint)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("-c,--config", eval.config, "Eval settings or experiment config")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("-o,--out", eval.out, "Output directory");
  auto* eval_seed_opt = eval_cmd->add_option("--seed", eval_seed, "Overrides the config seed");
  auto* eval_mode_opt = eval_cmd->add_option("--mode", eval_mode, "exact or monte_carlo")
                            ->check(CLI::IsMember({"exact", "monte_carlo"}));

  TraceArgs trace;
  auto* trace_cmd = app.add_subcommand("posterior-trace", "Per-turn opponent posteriors");
  trace_cmd->add_option("checkpoint", trace.checkpoint)->required()->check(CLI::ExistingFile);
  trace_cmd->add_option("--prior", trace.prior, "'uniform' or comma-separated weights");
  trace_cmd->add_option("--player", trace.player, "Policy that plays the episodes")
      ->check(CLI::IsMember({"uninformed", "informed", "nash"}));
  trace_cmd->add_option("-n,--episodes", trace.episodes)->check(CLI::PositiveNumber);
  trace_cmd->add_option("--seed", trace.seed);
  trace_cmd->add_option("-o,--out", trace.out, "Output directory");

  PairArgs rpp;
  auto* rpp_cmd = app.add_subcommand("rpp", "Relative population performance of A against B");
  rpp_cmd->add_option("a", rpp.a)->required()->check(CLI::ExistingFile);
  rpp_cmd->add_option("b", rpp.b)->required()->check(CLI::ExistingFile);
  rpp_cmd->add_option("-o,--out", rpp.out, "Output directory");

  PairArgs jsd;
  auto* jsd_cmd = app.add_subcommand("jsd", "Strategic divergence between two populations");
  jsd_cmd->add_option("a", jsd.a)->required()->check(CLI::ExistingFile);
  jsd_cmd->add_option("b", jsd.b)->required()->check(CLI::ExistingFile);
  jsd_cmd->add_option("-n,--episodes", jsd.episodes)->check(CLI::PositiveNumber);
  jsd_cmd->add_option("--seed", jsd.seed);
  jsd_cmd->add_option("-o,--out", jsd.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*train_cmd) return CmdTrain(train, out);
    if (*eval_cmd) {
      if (*eval_seed_opt) eval.seed = eval_seed;
      if (*eval_mode_opt) eval.mode = eval_mode;
      return CmdEval(eval, out);
    }
    if (*trace_cmd) return CmdPosteriorTrace(trace, out);
    if (*rpp_cmd) return CmdRpp(rpp, out);
    if (*jsd_cmd) return CmdJsd(jsd, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace simplex_pl::cli

#endif  // SIMPLEX_PL_CLI_HPP_
