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

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "simplex_pl/eval.hpp"
#include "simplex_pl/posterior.hpp"
#include "test_util.hpp"

namespace simplex_pl {
namespace {

using testing::RandomPolicy;

TEST(ConsistentOpponentSequences, Examples) {
  const GameSpec spec{5};
  const auto empty = ConsistentOpponentSequences({}, {}, spec);
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_TRUE(empty.front().empty());
  const std::vector<int> a5 = {5}, a1 = {1}, win = {1};
  EXPECT_EQ(ConsistentOpponentSequences(a5, win, spec),
            (std::vector<std::vector<int>>{{1}, {2}, {3}, {4}}));
  EXPECT_TRUE(ConsistentOpponentSequences(a1, win, spec).empty());
  const std::vector<int> bad = {6};
  EXPECT_THROW(ConsistentOpponentSequences(bad, win, spec), IllegalActionError);
}

// Oracle: filter every opponent permutation prefix by the sign rule.
TEST(ConsistentOpponentSequences, MatchesPermutationFilter) {
  Rng rng(1);
  const int k = 5;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  for (int trial = 0; trial < 50; ++trial) {
    const int t = static_cast<int>(rng.Below(k + 1));
    auto own = perms[rng.Below(perms.size())];
    own.resize(t);
    std::vector<int> outcomes(t);
    for (int& w : outcomes) w = static_cast<int>(rng.Below(3)) - 1;
    std::set<std::vector<int>> expected;
    for (const auto& p : perms) {
      bool ok = true;
      for (int i = 0; i < t; ++i) ok &= Sign(own[i] - p[i]) == outcomes[i];
      if (ok) expected.insert(std::vector<int>(p.begin(), p.begin() + t));
    }
    const auto got = ConsistentOpponentSequences(own, outcomes, GameSpec{k});
    EXPECT_EQ(std::set<std::vector<int>>(got.begin(), got.end()), expected);
    EXPECT_EQ(got.size(), expected.size());
  }
}

// Reference likelihood: walk the game engine with the own bids fixed,
// branching over opponent bids and keeping only outcome-consistent ones.
double ReferenceLikelihood(const std::vector<int>& own, const std::vector<int>& outcomes,
                           const TabularPolicy& opp) {
  const auto& index = opp.index();
  std::function<double(const GameState&)> walk = [&](const GameState& s) -> double {
    const auto t = static_cast<std::size_t>(s.turn());
    if (t == own.size()) return 1.0;
    const auto id = *index.Find(MakeInfoStateKey(s, 1));
    double total = 0.0;
    for (int b : HandRanks(s.hand(1))) {
      const auto [next, w] = ApplyJointAction(s, own[t], b);
      if (w != outcomes[t]) continue;
      total += opp.Prob(id, b) * walk(next);
    }
    return total;
  };
  return walk(NewGame(opp.spec()));
}

struct History {
  std::vector<int> own;
  std::vector<int> outcomes;
};

// Plays `player` against `opponent` for `turns` turns.
History Simulate(const TabularPolicy& player, const TabularPolicy& opponent, int turns,
                 Rng& rng) {
  const auto ep = PlayEpisode(player, opponent, rng);
  return {std::vector<int>(ep.actions0.begin(), ep.actions0.begin() + turns),
          std::vector<int>(ep.outcomes.begin(), ep.outcomes.begin() + turns)};
}

TEST(OpponentLikelihood, Examples) {
  const GameSpec spec{5};
  EXPECT_EQ(OpponentLikelihood({}, {}, UniformRandomPolicy(spec)), 1.0);
  EXPECT_EQ(OpponentLikelihood({}, {}, PointMatchingPolicy(spec)), 1.0);
  const auto pm = PointMatchingPolicy(spec);
  // Bidding 3 then 4 against a point matcher (bids 5 then 4): lose, tie.
  const std::vector<int> own = {3, 4};
  EXPECT_EQ(OpponentLikelihood(own, std::vector<int>{-1, 0}, pm), 1.0);
  EXPECT_EQ(OpponentLikelihood(own, std::vector<int>{-1, 1}, pm), 0.0);
  const auto random = UniformRandomPolicy(spec);
  for (int a = 1; a <= 5; ++a) {
    for (int w : {-1, 0, 1}) {
      const std::vector<int> oa = {a}, ow = {w};
      const double count =
          static_cast<double>(ConsistentOpponentSequences(oa, ow, spec).size());
      EXPECT_NEAR(OpponentLikelihood(oa, ow, random), count / 5.0, 1e-15);
    }
  }
}

TEST(OpponentLikelihood, MatchesEngineWalk) {
  Rng rng(2);
  for (int k : {3, 4, 5}) {
    const GameSpec spec{k};
    for (int trial = 0; trial < 30; ++trial) {
      const auto opp = RandomPolicy(spec, rng, 0.3);
      const auto h = Simulate(RandomPolicy(spec, rng), RandomPolicy(spec, rng),
                              static_cast<int>(rng.Below(k + 1)), rng);
      EXPECT_NEAR(OpponentLikelihood(h.own, h.outcomes, opp),
                  ReferenceLikelihood(h.own, h.outcomes, opp), 1e-12);
    }
  }
}

TEST(PosteriorUpdate, TurnZeroIsThePrior) {
  const MixtureWeights prior({0.2, 0.5, 0.3});
  const auto s = InitialPosterior(prior);
  EXPECT_EQ(s.posterior, prior);
  const std::vector<TabularPolicy> pop(3, UniformRandomPolicy(GameSpec{4}));
  EXPECT_EQ(BatchPosterior(prior, {}, {}, pop), prior);
}

TEST(PosteriorUpdate, EliminatesInconsistentDeterministicOpponents) {
  const GameSpec spec{5};
  const std::vector<TabularPolicy> pop = {PointMatchingPolicy(spec), SacrificeTopPolicy(spec)};
  // Bid 3 at turn 0 and win: the point matcher would have bid 5.
  const auto s = PosteriorUpdate(InitialPosterior(MixtureWeights::Uniform(2)), 3, 1, pop);
  EXPECT_EQ(s.posterior[0], 0.0);
  EXPECT_EQ(s.posterior[1], 1.0);
  // The sacrificer now bids 5, so a 4 cannot win.
  EXPECT_THROW(PosteriorUpdate(s, 4, 1, pop), ImpossibleEvidenceError);
}

TEST(PosteriorUpdate, RejectsUpdatesPastTheLastTurn) {
  const GameSpec spec{2};
  const std::vector<TabularPolicy> pop = {UniformRandomPolicy(spec)};
  auto s = InitialPosterior(MixtureWeights::OneHot(1, 0));
  s = PosteriorUpdate(s, 1, 0, pop);
  s = PosteriorUpdate(s, 2, 0, pop);
  EXPECT_THROW(PosteriorUpdate(s, 1, 0, pop), IllegalActionError);
  EXPECT_THROW(PosteriorUpdate(InitialPosterior(MixtureWeights::Uniform(2)), 1, 0, pop),
               InvalidMixtureError);
}

// Property: incremental updates equal one batch Bayes computation, and the
// posterior stays normalized.
TEST(PosteriorUpdate, IncrementalEqualsBatch) {
  Rng rng(3);
  const GameSpec spec{5};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TabularPolicy> pop;
    const std::size_t n = 2 + rng.Below(4);
    for (std::size_t i = 0; i < n; ++i) pop.push_back(RandomPolicy(spec, rng, 0.4));
    const MixtureWeights prior(SampleDirichlet(rng, n, 1.0));
    const auto truth = pop[rng.Categorical(prior.values())];
    const auto h = Simulate(RandomPolicy(spec, rng), truth, spec.num_cards, rng);
    auto s = InitialPosterior(prior);
    for (int t = 0; t < spec.num_cards; ++t) {
      s = PosteriorUpdate(s, h.own[t], h.outcomes[t], pop);
      const auto batch = BatchPosterior(
          prior, std::span(h.own).first(t + 1), std::span(h.outcomes).first(t + 1), pop);
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_NEAR(s.posterior[j], batch[j], 1e-12);
        total += s.posterior[j];
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(PosteriorUpdate, MassOnTheTrueOpponentGrowsOnAverage) {
  Rng rng(4);
  const GameSpec spec{4};
  std::vector<TabularPolicy> pop = {UniformRandomPolicy(spec), PointMatchingPolicy(spec),
                                    SacrificeTopPolicy(spec), RandomPolicy(spec, rng, 0.5)};
  const auto prior = MixtureWeights::Uniform(pop.size());
  const auto player = UniformRandomPolicy(spec);
  const int episodes = 400;
  std::vector<double> mean(spec.num_cards + 1, 0.0);
  for (int e = 0; e < episodes; ++e) {
    const std::size_t truth = rng.Categorical(prior.values());
    const auto h = Simulate(player, pop[truth], spec.num_cards, rng);
    auto s = InitialPosterior(prior);
    mean[0] += s.posterior[truth] / episodes;
    for (int t = 0; t < spec.num_cards; ++t) {
      s = PosteriorUpdate(s, h.own[t], h.outcomes[t], pop);
      mean[t + 1] += s.posterior[truth] / episodes;
    }
  }
  for (int t = 1; t <= spec.num_cards; ++t) EXPECT_GE(mean[t], mean[t - 1] - 1e-12);
}

}  // namespace
}  // namespace simplex_pl
