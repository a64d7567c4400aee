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

// Simplex population learning with exact tabular policies. The population
// grows under the PSRO-Nash meta-graph; alongside it, a store of
// conditional best responses indexed by points of the population simplex
// is trained against priors drawn either from the meta-graph rows or, with
// probability epsilon, from a symmetric Dirichlet over the effective
// population.

#ifndef SIMPLEX_PL_TRAINER_HPP_
#define SIMPLEX_PL_TRAINER_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "simplex_pl/best_response.hpp"
#include "simplex_pl/errors.hpp"
#include "simplex_pl/game.hpp"
#include "simplex_pl/meta.hpp"
#include "simplex_pl/parallel.hpp"
#include "simplex_pl/policy.hpp"
#include "simplex_pl/population.hpp"
#include "simplex_pl/rng.hpp"

namespace simplex_pl {

enum class AbrKind { kExactOracle, kTabularQLearner };

struct QLearnerOptions {
  // Exploration rate, annealed linearly over the episodes of one call.
  double explore_start = 0.5;
  double explore_end = 0.02;
  // Step size 1 / (1 + visits / tau).
  double step_tau = 20.0;
};

struct TrainerConfig {
  double epsilon = 0.5;
  double alpha = 1.0;
  int max_population = 8;
  double br_gain_threshold = 1e-3;
  int grid_resolution = 4;
  AbrKind abr_kind = AbrKind::kExactOracle;
  int abr_budget = 2000;
  std::uint64_t rng_seed = 0;
  int invocations_per_round = 16;
  int max_rounds = 500;
  // Rounds between expansion checks while the population is still moving.
  int expansion_interval = 8;
  double nash_tolerance = kDefaultNashTolerance;
  QLearnerOptions q_learner;

  void Validate() const {
    auto fail = [](const std::string& what) {
      return InvalidSpecError("invalid trainer config: " + what);
    };
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw fail("epsilon in [0, 1]");
    if (!(alpha > 0.0)) throw fail("alpha > 0");
    if (max_population < 1) throw fail("max_population >= 1");
    if (grid_resolution < 1) throw fail("grid_resolution >= 1");
    if (abr_budget < 1) throw fail("abr_budget >= 1");
    if (invocations_per_round < 1) throw fail("invocations_per_round >= 1");
    if (max_rounds < 1) throw fail("max_rounds >= 1");
    if (expansion_interval < 1) throw fail("expansion_interval >= 1");
    if (!(br_gain_threshold >= 0.0)) throw fail("br_gain_threshold >= 0");
  }
};

// --- Opponent priors and anchors -------------------------------------------

// With probability epsilon a symmetric Dirichlet(alpha) draw over the
// effective population (embedded on the representative indices), otherwise
// a uniformly chosen distinct row of the meta-graph.
inline MixtureWeights SampleOpponentPrior(const Matrix& meta_graph,
                                          double epsilon, double alpha,
                                          Rng& rng) {
  const auto reps = UniqueRows(meta_graph);
  const std::size_t n = meta_graph.rows();
  if (rng.Bernoulli(epsilon)) {
    const auto d = SampleDirichlet(rng, reps.size(), alpha);
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < reps.size(); ++i) w[reps[i]] = d[i];
    return MixtureWeights(std::move(w));
  }
  const auto row = meta_graph.row(reps[rng.Below(reps.size())]);
  return MixtureWeights(std::vector<double>(row.begin(), row.end()));
}

// All points of the k-simplex whose entries are multiples of 1/m, in
// lexicographically descending order.
inline std::vector<std::vector<double>> BarycentricGrid(std::size_t k, int m) {
  std::vector<std::vector<double>> out;
  std::vector<int> counts(k, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == k) {
      counts[pos] = left;
      std::vector<double> p(k);
      for (std::size_t i = 0; i < k; ++i) p[i] = static_cast<double>(counts[i]) / m;
      out.push_back(std::move(p));
      return;
    }
    for (int c = left; c >= 0; --c) {
      counts[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  if (k > 0) rec(0, m);
  return out;
}

inline double L1Distance(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::max(a.size(), b.size());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d += std::abs((i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0));
  }
  return d;
}

inline bool SameAnchor(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs((i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0)) >
        kRowEqualityTolerance) {
      return false;
    }
  }
  return true;
}

inline std::string AnchorLabel(std::span<const double> anchor) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < anchor.size(); ++i) {
    os << (i ? "," : "") << anchor[i];
  }
  return os.str();
}

struct StoreEntry {
  std::vector<double> anchor;
  TabularPolicy policy;
  // Meta-graph slot whose training target this anchor is, if any; the
  // slot's policy is then authoritative.
  std::optional<std::size_t> slot;
  // Fingerprint of the mixture the policy was last trained against; 0 if
  // never trained.
  std::uint64_t trained_target = 0;
};

// Tabular stand-in for a policy conditioned on the opponent prior: anchors
// in the simplex mapped to best responses, queried by nearest anchor.
class ConditionalPolicyStore {
 public:
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<StoreEntry>& entries() const { return entries_; }
  std::vector<StoreEntry>& mutable_entries() { return entries_; }

  // L1-nearest anchor; ties resolve to the lexicographically smallest.
  std::size_t NearestIndex(std::span<const double> sigma) const {
    if (entries_.empty()) throw SchemaError("conditional policy store is empty");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const double d = L1Distance(entries_[i].anchor, sigma);
      const bool tie = std::abs(d - best_d) <= 1e-12;
      if ((!tie && d < best_d) ||
          (tie && std::lexicographical_compare(
                      entries_[i].anchor.begin(), entries_[i].anchor.end(),
                      entries_[best].anchor.begin(), entries_[best].anchor.end()))) {
        best = i;
        best_d = d;
      }
    }
    return best;
  }

  std::optional<std::size_t> FindExact(std::span<const double> anchor) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (SameAnchor(entries_[i].anchor, anchor)) return i;
    }
    return std::nullopt;
  }

  const TabularPolicy& Lookup(std::span<const double> sigma) const {
    return entries_[NearestIndex(sigma)].policy;
  }

 private:
  std::vector<StoreEntry> entries_;
};

inline const TabularPolicy& LookupConditional(const ConditionalPolicyStore& store,
                                              const MixtureWeights& sigma) {
  return store.Lookup(sigma.values());
}

// --- Approximate best-response operators -----------------------------------

// Exact best response to Pi^sigma.
inline TabularPolicy AbrExact(const MixtureWeights& sigma,
                              std::span<const TabularPolicy> population) {
  return BestResponseToMixture(population, sigma).policy;
}

// Episodic tabular Q-learning over the learner's info states. Each episode
// draws an opponent i ~ sigma for the whole game. Returns the greedy policy
// (over visited actions; lowest legal bid where nothing was visited).
inline TabularPolicy AbrTabularQ(const MixtureWeights& sigma,
                                 std::span<const TabularPolicy> population,
                                 int budget, Rng& rng,
                                 const QLearnerOptions& options = {}) {
  if (population.size() != sigma.size()) {
    throw InvalidMixtureError("prior does not match population size");
  }
  const auto& index = population.front().index();
  const int k = index.num_cards();
  const std::size_t n = index.size();
  std::vector<double> q(n * k, 0.0);
  std::vector<std::uint32_t> visits(n * k, 0);
  auto greedy = [&](InfoId id) {
    int best = 0;
    double best_q = 0.0;
    for (int a : HandRanks(index.legal(id))) {
      const double v = q[id * k + a - 1];
      if (best == 0 || v > best_q) {
        best = a;
        best_q = v;
      }
    }
    return std::pair{best, best_q};
  };
  std::vector<double> dist(k);
  for (int ep = 0; ep < budget; ++ep) {
    const double frac = budget > 1 ? static_cast<double>(ep) / (budget - 1) : 1.0;
    const double explore =
        options.explore_start + (options.explore_end - options.explore_start) * frac;
    const auto& opponent = population[rng.Categorical(sigma.values())];
    InfoId me = index.root();
    InfoId them = index.root();
    for (int t = 0; t < k; ++t) {
      const Hand legal = index.legal(me);
      int a;
      if (rng.Bernoulli(explore)) {
        const auto ranks = HandRanks(legal);
        a = ranks[rng.Below(ranks.size())];
      } else {
        a = greedy(me).first;
      }
      const auto od = opponent.Distribution(them);
      const int b = static_cast<int>(rng.Categorical(od)) + 1;
      const int w = Sign(a - b);
      const double reward = w * (k - t);
      const InfoId next = t + 1 < k ? index.child(me, a, w) : kNoInfoState;
      const double target = reward + (next != kNoInfoState ? greedy(next).second : 0.0);
      const std::size_t cell = static_cast<std::size_t>(me) * k + a - 1;
      const double lr = 1.0 / (1.0 + visits[cell] / options.step_tau);
      ++visits[cell];
      q[cell] += lr * (target - q[cell]);
      if (next == kNoInfoState) break;
      me = next;
      them = index.child(them, b, -w);
    }
  }
  TabularPolicy policy(population.front().shared_index());
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<InfoId>(i);
    int best = 0;
    double best_q = 0.0;
    for (int a : HandRanks(index.legal(id))) {
      const std::size_t cell = i * k + a - 1;
      if (visits[cell] == 0) continue;
      if (best == 0 || q[cell] > best_q) {
        best = a;
        best_q = q[cell];
      }
    }
    if (best == 0) best = std::countr_zero(index.legal(id)) + 1;
    policy.SetDeterministic(id, best);
  }
  return policy;
}

// Interface of the ABR slot: returns a policy doing at least as well as
// `current` against Pi^sigma (exactly for the oracle, enforced after the
// fact for learners).
class AbrOperator {
 public:
  virtual ~AbrOperator() = default;
  virtual TabularPolicy Improve(const TabularPolicy& current,
                                const MixtureWeights& sigma,
                                std::span<const TabularPolicy> population,
                                Rng& rng) const = 0;
  // Repeated calls with the same inputs return the same policy.
  virtual bool deterministic() const = 0;
};

class ExactAbr final : public AbrOperator {
 public:
  TabularPolicy Improve(const TabularPolicy&, const MixtureWeights& sigma,
                        std::span<const TabularPolicy> population,
                        Rng&) const override {
    return AbrExact(sigma, population);
  }
  bool deterministic() const override { return true; }
};

class TabularQAbr final : public AbrOperator {
 public:
  TabularQAbr(int budget, QLearnerOptions options)
      : budget_(budget), options_(options) {}

  // Keeps `current` unless the learned policy is at least as good against
  // the exact mixture.
  TabularPolicy Improve(const TabularPolicy& current,
                        const MixtureWeights& sigma,
                        std::span<const TabularPolicy> population,
                        Rng& rng) const override {
    auto candidate = AbrTabularQ(sigma, population, budget_, rng, options_);
    const auto mixture = AggregateMixture(population, sigma);
    if (ExpectedValue(candidate, mixture) >= ExpectedValue(current, mixture)) {
      return candidate;
    }
    return current;
  }
  bool deterministic() const override { return false; }

 private:
  int budget_;
  QLearnerOptions options_;
};

inline std::unique_ptr<AbrOperator> MakeAbrOperator(const TrainerConfig& config) {
  if (config.abr_kind == AbrKind::kExactOracle) return std::make_unique<ExactAbr>();
  return std::make_unique<TabularQAbr>(config.abr_budget, config.q_learner);
}

// --- Training loop ----------------------------------------------------------

struct TrainingRecord {
  int round = 0;
  std::size_t population_size = 0;
  std::size_t effective_size = 0;
  Matrix payoff;
  Matrix meta_graph;
  std::optional<double> frontier_gain;
  bool expanded = false;
  std::size_t abr_calls = 0;
  std::size_t slot_updates = 0;
};

struct TrainingResult {
  PopulationSnapshot population;
  ConditionalPolicyStore store;
  std::vector<TrainingRecord> history;
  TrainerConfig config;
  Rng rng;
  int rounds = 0;
  bool converged = false;
  double final_gain = std::numeric_limits<double>::infinity();
};

class SimplexTrainer {
 public:
  using RoundCallback = std::function<void(const TrainingResult&)>;

  SimplexTrainer(TrainerConfig config, GameSpec spec)
      : config_(std::move(config)),
        spec_(spec),
        rng_(config_.rng_seed),
        abr_(MakeAbrOperator(config_)) {
    config_.Validate();
    spec_.Validate();
  }

  // Invoked with the current state at every round barrier.
  void set_round_callback(RoundCallback cb) { callback_ = std::move(cb); }

  TrainingResult Run() {
    policies_ = {UniformRandomPolicy(spec_)};
    slot_target_ = {0};
    int since_check = 0;
    for (round_ = 0; round_ < config_.max_rounds; ++round_) {
      Refresh();
      TrainingRecord rec = NewRecord();
      SampledRound(rec);
      if (rec.slot_updates > 0) Refresh();
      const bool settled = Settled();
      if (settled || ++since_check >= config_.expansion_interval) {
        since_check = 0;
        const bool grew = ExpansionCheck(rec);
        const bool stop =
            !grew && (settled || config_.abr_kind != AbrKind::kExactOracle) &&
            (final_gain_ <= config_.br_gain_threshold ||
             policies_.size() >= static_cast<std::size_t>(config_.max_population));
        if (stop) {
          rec.abr_calls += Sweep(rec);
          history_.push_back(std::move(rec));
          converged_ = final_gain_ <= config_.br_gain_threshold;
          ++round_;
          Refresh();
          return Emit();
        }
      }
      const bool grew = rec.expanded;
      history_.push_back(std::move(rec));
      if (callback_) {
        // Re-project the store onto the grown population so the snapshot is
        // self-consistent. Refresh is idempotent, so this does not perturb
        // the run.
        if (grew) Refresh();
        Emit();
      }
    }
    // Round budget exhausted.
    Refresh();
    TrainingRecord rec = NewRecord();
    rec.abr_calls += Sweep(rec);
    history_.push_back(std::move(rec));
    Refresh();
    converged_ = false;
    return Emit();
  }

 private:
  TrainingRecord NewRecord() const {
    TrainingRecord rec;
    rec.round = round_;
    rec.population_size = policies_.size();
    rec.effective_size = reps_.size();
    rec.payoff = payoff_;
    rec.meta_graph = meta_graph_;
    return rec;
  }

  TrainingResult Emit() {
    TrainingResult r;
    r.population = PopulationSnapshot{spec_, policies_, meta_graph_, payoff_};
    r.store = store_;
    r.history = history_;
    r.config = config_;
    r.rng = rng_;
    r.rounds = round_;
    r.converged = converged_;
    r.final_gain = final_gain_;
    if (callback_) callback_(r);
    return r;
  }

  // Folds weight on duplicate slots onto their representative.
  std::vector<double> Canonical(std::span<const double> sigma) const {
    std::vector<double> out(policies_.size(), 0.0);
    for (std::size_t i = 0; i < sigma.size(); ++i) out[rep_of_[i]] += sigma[i];
    return out;
  }

  // Identity of the mixture Pi^anchor: support weights and the policies
  // they point at (as of the last Refresh). Independent of the anchor's
  // trailing zeros.
  std::uint64_t TargetFingerprint(std::span<const double> anchor) const {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (std::size_t i = 0; i < anchor.size(); ++i) {
      if (anchor[i] == 0.0) continue;
      for (std::uint64_t x : {static_cast<std::uint64_t>(i),
                              std::bit_cast<std::uint64_t>(anchor[i]),
                              policy_fp_[i]}) {
        h ^= x;
        h *= 0x100000001b3ULL;
        h ^= h >> 31;
      }
    }
    return h == 0 ? 1 : h;
  }

  void Refresh() {
    const std::size_t n = policies_.size();
    policy_fp_.resize(n);
    for (std::size_t i = 0; i < n; ++i) policy_fp_[i] = policies_[i].Fingerprint();
    payoff_ = EvalPayoffMatrix(policies_);
    meta_graph_ = PsroNashMetaGraph(payoff_, config_.nash_tolerance);
    reps_ = UniqueRows(meta_graph_);
    rep_of_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      rep_of_[i] = i;
      for (std::size_t r : reps_) {
        if (r != 0 && r < i && RowsEqual(meta_graph_.row(i), meta_graph_.row(r))) {
          rep_of_[i] = r;
          break;
        }
      }
    }
    // Anchor set: distinct meta-graph rows, plus the uniform prior and the
    // barycentric grid over the effective population when simplex sampling
    // is enabled.
    std::vector<StoreEntry> next;
    auto add = [&](std::vector<double> anchor, std::optional<std::size_t> slot) {
      for (auto& e : next) {
        if (SameAnchor(e.anchor, anchor)) {
          if (!e.slot && slot) e.slot = slot;
          return;
        }
      }
      next.push_back(StoreEntry{std::move(anchor), policies_.front(), slot, 0});
    };
    for (std::size_t i = 0; i < n; ++i) {
      add(Canonical(meta_graph_.row(i)),
          i >= 1 ? std::optional<std::size_t>(i) : std::nullopt);
    }
    if (config_.epsilon > 0.0) {
      std::vector<double> uniform(n, 0.0);
      for (std::size_t r : reps_) uniform[r] = 1.0 / static_cast<double>(reps_.size());
      add(std::move(uniform), std::nullopt);
      for (const auto& g : BarycentricGrid(reps_.size(), config_.grid_resolution)) {
        std::vector<double> anchor(n, 0.0);
        for (std::size_t j = 0; j < reps_.size(); ++j) anchor[reps_[j]] = g[j];
        add(std::move(anchor), std::nullopt);
      }
    }
    std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) {
      return a.anchor > b.anchor;
    });
    for (auto& e : next) {
      if (e.slot) {
        e.policy = policies_[*e.slot];
        e.trained_target = slot_target_[*e.slot];
        continue;
      }
      if (store_.empty()) continue;
      if (auto old = store_.FindExact(e.anchor)) {
        const auto& prev = store_.entries()[*old];
        e.policy = prev.policy;
        e.trained_target = prev.trained_target;
      } else {
        e.policy = store_.entries()[store_.NearestIndex(e.anchor)].policy;
      }
    }
    store_.mutable_entries() = std::move(next);
  }

  bool Trained(const StoreEntry& e) const {
    return e.trained_target == TargetFingerprint(e.anchor);
  }

  bool Settled() const {
    for (const auto& e : store_.entries()) {
      if (e.slot && !Trained(e)) return false;
    }
    return true;
  }

  // Best response to the Nash mixture of the whole population; its value
  // against that mixture is the frontier gain. Returns true if the
  // population grew.
  bool ExpansionCheck(TrainingRecord& rec) {
    const auto cert = SolveZeroSumNash(payoff_, config_.nash_tolerance);
    const MixtureWeights nash(Canonical(cert.strategy));
    const std::size_t start = store_.empty() ? 0 : store_.NearestIndex(nash.values());
    const TabularPolicy& seed =
        store_.empty() ? policies_.front() : store_.entries()[start].policy;
    Rng rng = rng_.Fork("expand", static_cast<std::uint64_t>(round_));
    auto br = PruneUnreached(abr_->Improve(seed, nash, policies_, rng));
    ++rec.abr_calls;
    final_gain_ = ExpectedValue(br, AggregateMixture(policies_, nash));
    rec.frontier_gain = final_gain_;
    if (final_gain_ > config_.br_gain_threshold &&
        policies_.size() < static_cast<std::size_t>(config_.max_population)) {
      const std::uint64_t target = TargetFingerprint(nash.values());
      policy_fp_.push_back(br.Fingerprint());
      policies_.push_back(std::move(br));
      slot_target_.push_back(target);
      rec.expanded = true;
      return true;
    }
    return false;
  }

  struct Task {
    std::size_t entry;
    int repeats;
  };

  // Runs the tasks against the current (immutable) population and applies
  // every result at the barrier. Returns the number of ABR invocations.
  std::size_t RunTasks(const std::vector<Task>& tasks, std::string_view label,
                       TrainingRecord& rec) {
    const auto& entries = store_.entries();
    std::vector<TabularPolicy> results(tasks.size(), policies_.front());
    std::vector<std::uint64_t> targets(tasks.size());
    std::size_t calls = 0;
    for (const auto& t : tasks) calls += abr_->deterministic() ? 1 : t.repeats;
    ParallelFor(tasks.size(), [&](std::size_t i) {
      const auto& e = entries[tasks[i].entry];
      const MixtureWeights sigma(e.anchor);
      Rng rng = rng_.Fork(std::string(label) + "/" + std::to_string(round_) +
                          "/" + AnchorLabel(e.anchor));
      TabularPolicy current = e.policy;
      const int reps = abr_->deterministic() ? 1 : tasks[i].repeats;
      for (int r = 0; r < reps; ++r) {
        current = abr_->Improve(current, sigma, policies_, rng);
      }
      results[i] = PruneUnreached(current);
      targets[i] = TargetFingerprint(e.anchor);
    });
    auto& mutable_entries = store_.mutable_entries();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      auto& e = mutable_entries[tasks[i].entry];
      if (e.slot) {
        for (std::size_t s = 1; s < policies_.size(); ++s) {
          if (!SameAnchor(Canonical(meta_graph_.row(s)), e.anchor)) continue;
          if (!(policies_[s] == results[i])) ++rec.slot_updates;
          policies_[s] = results[i];
          slot_target_[s] = targets[i];
        }
      }
      e.policy = std::move(results[i]);
      e.trained_target = targets[i];
    }
    return calls;
  }

  void SampledRound(TrainingRecord& rec) {
    Rng rng = rng_.Fork("round", static_cast<std::uint64_t>(round_));
    std::vector<Task> tasks;
    for (int d = 0; d < config_.invocations_per_round; ++d) {
      const auto sigma =
          SampleOpponentPrior(meta_graph_, config_.epsilon, config_.alpha, rng);
      const std::size_t entry = store_.NearestIndex(Canonical(sigma.values()));
      auto it = std::find_if(tasks.begin(), tasks.end(),
                             [&](const Task& t) { return t.entry == entry; });
      if (it == tasks.end()) tasks.push_back({entry, 1});
      else ++it->repeats;
    }
    rec.abr_calls += RunTasks(tasks, "round", rec);
  }

  // Trains every anchor not yet trained against its current target.
  std::size_t Sweep(TrainingRecord& rec) {
    std::vector<Task> tasks;
    const auto& entries = store_.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!Trained(entries[i])) tasks.push_back({i, 1});
    }
    return RunTasks(tasks, "sweep", rec);
  }

  TrainerConfig config_;
  GameSpec spec_;
  Rng rng_;
  std::unique_ptr<AbrOperator> abr_;
  RoundCallback callback_;

  std::vector<TabularPolicy> policies_;
  std::vector<std::uint64_t> slot_target_;
  // Policy fingerprints as of the last Refresh.
  std::vector<std::uint64_t> policy_fp_;
  Matrix payoff_;
  Matrix meta_graph_;
  std::vector<std::size_t> reps_;
  std::vector<std::size_t> rep_of_;
  ConditionalPolicyStore store_;
  std::vector<TrainingRecord> history_;
  int round_ = 0;
  bool converged_ = false;
  double final_gain_ = std::numeric_limits<double>::infinity();
};

inline TrainingResult Train(const TrainerConfig& config, const GameSpec& spec) {
  return SimplexTrainer(config, spec).Run();
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_TRAINER_HPP_
