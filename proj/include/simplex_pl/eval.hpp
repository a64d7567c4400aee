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

#ifndef SIMPLEX_PL_EVAL_HPP_
#define SIMPLEX_PL_EVAL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>

#include "simplex_pl/best_response.hpp"
#include "simplex_pl/errors.hpp"
#include "simplex_pl/game.hpp"
#include "simplex_pl/meta.hpp"
#include "simplex_pl/parallel.hpp"
#include "simplex_pl/policy.hpp"
#include "simplex_pl/population.hpp"
#include "simplex_pl/posterior.hpp"
#include "simplex_pl/rng.hpp"
#include "simplex_pl/trainer.hpp"

namespace simplex_pl {

// Shannon entropy in nats, with 0 ln 0 = 0.
inline double Entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}
inline double Entropy(const MixtureWeights& sigma) { return Entropy(sigma.values()); }

// E[H(sigma)] for sigma ~ Dirichlet(alpha, ..., alpha) of dimension k.
inline double ExpectedDirichletEntropy(std::size_t k, double alpha) {
  using boost::math::digamma;
  const double kd = static_cast<double>(k);
  return digamma(kd * alpha + 1.0) - digamma(alpha + 1.0);
}

// Concentration whose expected entropy is `target` (bisection in log alpha).
inline double ConcentrationForEntropy(std::size_t k, double target) {
  if (k < 2 || !(target > 0.0) || !(target < std::log(static_cast<double>(k)))) {
    throw InvalidSpecError("entropy target out of range for k=" + std::to_string(k));
  }
  double lo = -12.0, hi = 12.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ExpectedDirichletEntropy(k, std::exp(mid)) < target) lo = mid;
    else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

// `count` concentrations with expected entropies evenly spaced over
// [0.46, 2.03] nats for k = 8, scaled by ln k / ln 8 for other sizes.
inline std::vector<double> DefaultConcentrationLevels(std::size_t k, int count = 7) {
  const double scale = std::log(static_cast<double>(k)) / std::log(8.0);
  const double lo = 0.46 * scale, hi = 2.03 * scale;
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    const double h = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    out.push_back(ConcentrationForEntropy(k, h));
  }
  return out;
}

// --- Simulation -------------------------------------------------------------

struct Episode {
  std::vector<int> actions0;
  std::vector<int> actions1;
  std::vector<int> outcomes;  // player 0's perspective
  double ret = 0.0;           // player 0's return
};

inline int SampleAction(const TabularPolicy& policy, InfoId id, Rng& rng) {
  return static_cast<int>(rng.Categorical(policy.Distribution(id))) + 1;
}

inline Episode PlayEpisode(const TabularPolicy& p0, const TabularPolicy& p1,
                           Rng& rng) {
  RequireSameGame(p0, p1);
  const auto& index = p0.index();
  const int k = p0.num_cards();
  Episode ep;
  InfoId id0 = index.root(), id1 = index.root();
  for (int t = 0; t < k; ++t) {
    const int a = SampleAction(p0, id0, rng);
    const int b = SampleAction(p1, id1, rng);
    const int w = Sign(a - b);
    ep.actions0.push_back(a);
    ep.actions1.push_back(b);
    ep.outcomes.push_back(w);
    ep.ret += w * (k - t);
    if (t + 1 < k) {
      id0 = index.child(id0, a, w);
      id1 = index.child(id1, b, -w);
    }
  }
  return ep;
}

// --- Any-mixture experiment -------------------------------------------------

enum class Candidate { kExactBestResponse = 0, kInformed, kUninformed, kNashMixture };
inline constexpr std::array<Candidate, 4> kCandidates = {
    Candidate::kExactBestResponse, Candidate::kInformed, Candidate::kUninformed,
    Candidate::kNashMixture};

inline const char* CandidateName(Candidate c) {
  switch (c) {
    case Candidate::kExactBestResponse: return "exact_br";
    case Candidate::kInformed: return "informed";
    case Candidate::kUninformed: return "uninformed";
    case Candidate::kNashMixture: return "ne_mixture";
  }
  return "?";
}

struct EvalMode {
  // 0 = exact expectation; otherwise the number of sampled episodes per
  // (candidate, mixture) pair.
  int episodes = 0;
  bool exact() const { return episodes == 0; }
};

struct MeanAndError {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanAndError Summarize(std::span<const double> xs) {
  MeanAndError out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

struct AnyMixtureSample {
  std::vector<double> sigma;
  double entropy = 0.0;
  std::array<double, 4> returns{};  // indexed by Candidate
  // Per-sample standard error of the Monte-Carlo estimate (0 when exact).
  std::array<double, 4> stderrs{};
};

struct AnyMixtureLevel {
  double alpha = 0.0;
  std::vector<AnyMixtureSample> samples;
  double mean_entropy = 0.0;
  std::array<MeanAndError, 4> returns{};
};

struct AnyMixtureReport {
  std::vector<AnyMixtureLevel> levels;
  EvalMode mode;
  // False when the store was empty; informed/uninformed entries are then NaN.
  bool has_store = true;

  bool Available(Candidate c) const {
    return has_store || (c != Candidate::kInformed && c != Candidate::kUninformed);
  }
};

// Effective-population uniform prior.
inline std::vector<double> UniformOverEffective(const Matrix& meta_graph) {
  const auto reps = UniqueRows(meta_graph);
  std::vector<double> u(meta_graph.rows(), 0.0);
  for (std::size_t r : reps) u[r] = 1.0 / static_cast<double>(reps.size());
  return u;
}

inline double MonteCarloValue(const TabularPolicy& candidate,
                              std::span<const TabularPolicy> population,
                              const MixtureWeights& sigma, int episodes,
                              Rng& rng, double* stderr_out) {
  std::vector<double> rets(episodes);
  for (int e = 0; e < episodes; ++e) {
    const auto& opp = population[rng.Categorical(sigma.values())];
    rets[e] = PlayEpisode(candidate, opp, rng).ret;
  }
  const auto s = Summarize(rets);
  if (stderr_out) *stderr_out = s.stderr_;
  return s.mean;
}

// For each concentration level, draws `samples_per_level` priors from a
// symmetric Dirichlet over the effective population and scores four
// candidates against Pi^sigma: a fresh exact best response, the stored
// policy nearest sigma (informed), the stored policy nearest the uniform
// prior (uninformed), and the Nash mixture of the population. An empty
// store skips the two store-backed candidates.
inline AnyMixtureReport AnyMixtureExperiment(
    const PopulationSnapshot& pop, const ConditionalPolicyStore& store,
    std::span<const double> levels, int samples_per_level, const Rng& rng,
    EvalMode mode = {}) {
  if (levels.empty()) throw InvalidSpecError("no concentration levels given");
  if (samples_per_level < 1) throw InvalidSpecError("samples_per_level must be >= 1");
  const auto reps = UniqueRows(pop.meta_graph);
  const auto uniform = UniformOverEffective(pop.meta_graph);
  const bool has_store = !store.empty();
  const TabularPolicy* uninformed = has_store ? &store.Lookup(uniform) : nullptr;
  const auto nash_cert = SolveZeroSumNash(pop.payoff);
  const TabularPolicy nash_policy =
      AggregateMixture(pop.policies, MixtureWeights(nash_cert.strategy));

  AnyMixtureReport report;
  report.mode = mode;
  report.has_store = has_store;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    AnyMixtureLevel level;
    level.alpha = levels[l];
    level.samples.resize(samples_per_level);
    ParallelFor(static_cast<std::size_t>(samples_per_level), [&](std::size_t s) {
      Rng local = rng.Fork("any_mixture/" + std::to_string(l), s);
      const auto d = SampleDirichlet(local, reps.size(), levels[l]);
      std::vector<double> sigma(pop.size(), 0.0);
      for (std::size_t i = 0; i < reps.size(); ++i) sigma[reps[i]] = d[i];
      const MixtureWeights mw(sigma);
      auto& out = level.samples[s];
      out.sigma = sigma;
      out.entropy = Entropy(mw);
      const auto mixture = AggregateMixture(pop.policies, mw);
      const auto br = ExactBestResponse(mixture);
      const std::array<const TabularPolicy*, 4> policies = {
          &br.policy, has_store ? &store.Lookup(sigma) : nullptr, uninformed,
          &nash_policy};
      for (Candidate c : kCandidates) {
        const auto ci = static_cast<std::size_t>(c);
        if (policies[ci] == nullptr) {
          out.returns[ci] = std::numeric_limits<double>::quiet_NaN();
        } else if (mode.exact()) {
          out.returns[ci] = c == Candidate::kExactBestResponse
                                ? br.value
                                : ExpectedValue(*policies[ci], mixture);
        } else {
          Rng mc = local.Fork(CandidateName(c));
          out.returns[ci] = MonteCarloValue(*policies[ci], pop.policies, mw,
                                            mode.episodes, mc, &out.stderrs[ci]);
        }
      }
    });
    std::vector<double> hs;
    for (const auto& s : level.samples) hs.push_back(s.entropy);
    level.mean_entropy = Summarize(hs).mean;
    for (Candidate c : kCandidates) {
      const auto ci = static_cast<std::size_t>(c);
      std::vector<double> xs;
      for (const auto& s : level.samples) xs.push_back(s.returns[ci]);
      level.returns[ci] = Summarize(xs);
    }
    report.levels.push_back(std::move(level));
  }
  return report;
}

// Spearman rank correlation (average ranks for ties).
inline double SpearmanCorrelation(std::span<const double> x,
                                  std::span<const double> y) {
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      for (std::size_t m = i; m <= j; ++m) r[order[m]] = 0.5 * (i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// --- Exploitability and relative population performance ---------------------

// Best-response value against Pi^sigma; never negative in this symmetric
// zero-sum game.
inline double Exploitability(const MixtureWeights& sigma,
                             std::span<const TabularPolicy> population) {
  return BestResponseToMixture(population, sigma).value;
}
inline double Exploitability(const MixtureWeights& sigma,
                             const PopulationSnapshot& pop) {
  return Exploitability(sigma, pop.policies);
}

// U_{A,B}: J(a_i, b_j) for every pair.
inline Matrix CrossPayoff(std::span<const TabularPolicy> a,
                          std::span<const TabularPolicy> b) {
  Matrix u(a.size(), b.size());
  ParallelFor(a.size() * b.size(), [&](std::size_t p) {
    const std::size_t i = p / b.size(), j = p % b.size();
    u(i, j) = ExpectedValue(a[i], b[j]);
  });
  return u;
}

// p'Uq at a Nash equilibrium (p, q) of the zero-sum game on U.
inline double Rpp(const Matrix& cross_payoff, double tol = kDefaultNashTolerance) {
  const auto sol = SolveMatrixGame(cross_payoff);
  if (sol.gap > tol) {
    throw ConvergenceError("matrix game gap " + std::to_string(sol.gap) +
                           " exceeds tolerance");
  }
  return sol.value;
}

// --- Strategic divergence ---------------------------------------------------

// Jensen-Shannon divergence in nats, bounded by ln 2.
inline double JensenShannon(std::span<const double> p, std::span<const double> q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) d += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) d += 0.5 * q[i] * std::log(q[i] / m);
  }
  return std::clamp(d, 0.0, std::log(2.0));
}

struct DivergenceMatrix {
  Matrix values;
  int episodes = 0;
};

// D_ij: mean JSD between row policy i and column policy j over the row
// player's decisions, with row policy i playing the column population's
// uniform mixture. Rollouts are shared across j.
inline DivergenceMatrix JsdMatrix(std::span<const TabularPolicy> rows,
                                  std::span<const TabularPolicy> cols,
                                  int episodes, const Rng& rng) {
  if (rows.empty() || cols.empty()) throw SchemaError("empty population");
  for (const auto& p : cols) RequireSameGame(rows.front(), p);
  for (const auto& p : rows) RequireSameGame(rows.front(), p);
  if (episodes < 1) throw InvalidSpecError("episodes must be >= 1");
  const auto col_mixture =
      AggregateMixture(cols, MixtureWeights::Uniform(cols.size()));
  const auto& index = rows.front().index();
  DivergenceMatrix out{Matrix(rows.size(), cols.size()), episodes};
  ParallelFor(rows.size(), [&](std::size_t i) {
    Rng local = rng.Fork("jsd", i);
    std::vector<double> sum(cols.size(), 0.0);
    std::size_t decisions = 0;
    for (int e = 0; e < episodes; ++e) {
      const auto ep = PlayEpisode(rows[i], col_mixture, local);
      InfoId id = index.root();
      for (std::size_t t = 0; t < ep.actions0.size(); ++t) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
          sum[j] += JensenShannon(rows[i].Distribution(id), cols[j].Distribution(id));
        }
        ++decisions;
        if (t + 1 < ep.actions0.size()) id = index.child(id, ep.actions0[t], ep.outcomes[t]);
      }
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out.values(i, j) = sum[j] / static_cast<double>(decisions);
    }
  });
  return out;
}

struct DivergenceCurve {
  std::vector<double> weighted;   // per turn 0..K
  std::vector<int> continuing;    // episodes still running at each turn
};

// Plays `row_policy` against `opponent` and, after each observation, weights
// column j of D by the analytical posterior over the row population
// (uniform prior). Turn 0 is the prior itself.
inline DivergenceCurve PosteriorWeightedDivergence(
    const Matrix& divergence, std::span<const TabularPolicy> row_population,
    const TabularPolicy& row_policy, const TabularPolicy& opponent,
    std::size_t column, int episodes, const Rng& rng) {
  if (divergence.rows() != row_population.size() || column >= divergence.cols()) {
    throw SchemaError("divergence matrix does not match the populations");
  }
  const int k = row_policy.num_cards();
  DivergenceCurve curve{std::vector<double>(k + 1, 0.0), std::vector<int>(k + 1, 0)};
  const auto prior = MixtureWeights::Uniform(row_population.size());
  std::vector<std::vector<double>> per_episode(episodes);
  ParallelFor(static_cast<std::size_t>(episodes), [&](std::size_t e) {
    Rng local = rng.Fork("pwd", e);
    const auto ep = PlayEpisode(row_policy, opponent, local);
    auto state = InitialPosterior(prior);
    auto weigh = [&](const MixtureWeights& post) {
      double v = 0.0;
      for (std::size_t i = 0; i < post.size(); ++i) v += post[i] * divergence(i, column);
      return v;
    };
    per_episode[e].push_back(weigh(state.posterior));
    for (int t = 0; t < k; ++t) {
      state = PosteriorUpdate(state, ep.actions0[t], ep.outcomes[t], row_population);
      per_episode[e].push_back(weigh(state.posterior));
    }
  });
  for (int t = 0; t <= k; ++t) {
    for (const auto& row : per_episode) curve.weighted[t] += row[t];
    curve.weighted[t] /= static_cast<double>(episodes);
    // Goofspiel has no early termination.
    curve.continuing[t] = episodes;
  }
  return curve;
}

// --- Posterior traces -------------------------------------------------------

struct PosteriorTraceRow {
  int episode = 0;
  int turn = 0;
  std::size_t true_opponent = 0;
  std::vector<double> posterior;
};

// Episodes of `player` against an opponent drawn from `prior`, recording
// the analytical posterior over the population after every turn.
inline std::vector<PosteriorTraceRow> PosteriorTrace(
    const TabularPolicy& player, std::span<const TabularPolicy> population,
    const MixtureWeights& prior, int episodes, const Rng& rng) {
  std::vector<std::vector<PosteriorTraceRow>> per(episodes);
  ParallelFor(static_cast<std::size_t>(episodes), [&](std::size_t e) {
    Rng local = rng.Fork("trace", e);
    const std::size_t truth = local.Categorical(prior.values());
    const auto ep = PlayEpisode(player, population[truth], local);
    auto state = InitialPosterior(prior);
    const int ei = static_cast<int>(e);
    per[e].push_back({ei, 0, truth, state.posterior.values()});
    for (std::size_t t = 0; t < ep.actions0.size(); ++t) {
      state = PosteriorUpdate(state, ep.actions0[t], ep.outcomes[t], population);
      per[e].push_back({ei, static_cast<int>(t + 1), truth, state.posterior.values()});
    }
  });
  std::vector<PosteriorTraceRow> out;
  for (auto& rows : per) {
    for (auto& r : rows) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_EVAL_HPP_
