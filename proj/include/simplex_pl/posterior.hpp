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

// Exact Bayesian inference over which population member the opponent is,
// from one player's own bids and the public win/draw/loss outcomes. The
// opponent's hidden bids are marginalized by enumerating every bid
// sequence consistent with the outcomes.

#ifndef SIMPLEX_PL_POSTERIOR_HPP_
#define SIMPLEX_PL_POSTERIOR_HPP_

#include <span>
#include <string>
#include <vector>

#include "simplex_pl/errors.hpp"
#include "simplex_pl/game.hpp"
#include "simplex_pl/policy.hpp"

namespace simplex_pl {

namespace internal {

inline void CheckHistory(std::span<const int> own_actions,
                         std::span<const int> outcomes, const GameSpec& spec) {
  if (own_actions.size() != outcomes.size() ||
      own_actions.size() > static_cast<std::size_t>(spec.num_cards)) {
    throw IllegalActionError("history lengths are inconsistent");
  }
  Hand hand = FullHand(spec.num_cards);
  for (std::size_t i = 0; i < own_actions.size(); ++i) {
    const int a = own_actions[i];
    if (a < 1 || a > spec.num_cards || !HandHas(hand, a)) {
      throw IllegalActionError("bid " + std::to_string(a) + " is not legal");
    }
    if (outcomes[i] < -1 || outcomes[i] > 1) {
      throw IllegalActionError("outcome must be -1, 0 or +1");
    }
    hand = HandWithout(hand, a);
  }
}

}  // namespace internal

// Every prefix of an opponent bid permutation with sign(a_k - b_k) = w_k.
inline std::vector<std::vector<int>> ConsistentOpponentSequences(
    std::span<const int> own_actions, std::span<const int> outcomes,
    const GameSpec& spec) {
  internal::CheckHistory(own_actions, outcomes, spec);
  std::vector<std::vector<int>> out;
  std::vector<int> seq;
  auto rec = [&](auto&& self, Hand hand) -> void {
    const std::size_t k = seq.size();
    if (k == own_actions.size()) {
      out.push_back(seq);
      return;
    }
    for (int b : HandRanks(hand)) {
      if (Sign(own_actions[k] - b) != outcomes[k]) continue;
      seq.push_back(b);
      self(self, HandWithout(hand, b));
      seq.pop_back();
    }
  };
  rec(rec, FullHand(spec.num_cards));
  return out;
}

// Pr(history | opponent): sum over consistent hidden sequences of the
// opponent's probability of bidding them. The opponent sees the negated
// outcomes, which selects its info states.
inline double OpponentLikelihood(std::span<const int> own_actions,
                                 std::span<const int> outcomes,
                                 const TabularPolicy& opponent) {
  const auto& index = opponent.index();
  double total = 0.0;
  for (const auto& seq :
       ConsistentOpponentSequences(own_actions, outcomes, opponent.spec())) {
    double p = 1.0;
    InfoId id = index.root();
    for (std::size_t k = 0; k < seq.size() && p > 0.0; ++k) {
      p *= opponent.Prob(id, seq[k]);
      if (k + 1 < seq.size()) id = index.child(id, seq[k], -outcomes[k]);
    }
    total += p;
  }
  return total;
}

inline double OpponentLikelihood(std::span<const int> own_actions,
                                 std::span<const int> outcomes,
                                 std::size_t opponent,
                                 std::span<const TabularPolicy> population) {
  return OpponentLikelihood(own_actions, outcomes, population[opponent]);
}

struct PosteriorState {
  MixtureWeights prior;
  MixtureWeights posterior;
  std::vector<int> own_actions;
  std::vector<int> outcomes;
  // Pr(history | opponent j) for the history so far.
  std::vector<double> likelihoods;

  int turn() const { return static_cast<int>(own_actions.size()); }
};

inline PosteriorState InitialPosterior(const MixtureWeights& prior) {
  return {prior, prior, {}, {}, std::vector<double>(prior.size(), 1.0)};
}

// Bayes' rule over the full history at once.
inline MixtureWeights BatchPosterior(const MixtureWeights& prior,
                                     std::span<const int> own_actions,
                                     std::span<const int> outcomes,
                                     std::span<const TabularPolicy> population) {
  if (prior.size() != population.size()) {
    throw InvalidMixtureError("prior does not match population size");
  }
  std::vector<double> w(prior.size());
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = prior[j] == 0.0
               ? 0.0
               : prior[j] * OpponentLikelihood(own_actions, outcomes, population[j]);
    total += w[j];
  }
  if (!(total > 0.0)) {
    throw ImpossibleEvidenceError("no population member explains the history");
  }
  for (double& x : w) x /= total;
  return MixtureWeights(std::move(w));
}

// One incremental step: the previous posterior is reweighted by the ratio
// of full-history likelihoods, which equals the conditional likelihood of
// the newest observation.
inline PosteriorState PosteriorUpdate(const PosteriorState& state,
                                      int own_action, int outcome,
                                      std::span<const TabularPolicy> population) {
  if (state.prior.size() != population.size()) {
    throw InvalidMixtureError("prior does not match population size");
  }
  if (!population.empty() &&
      state.turn() >= population.front().num_cards()) {
    throw IllegalActionError("posterior update past the last turn");
  }
  PosteriorState next = state;
  next.own_actions.push_back(own_action);
  next.outcomes.push_back(outcome);
  std::vector<double> w(population.size(), 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < population.size(); ++j) {
    if (state.posterior[j] == 0.0) {
      next.likelihoods[j] = 0.0;
      continue;
    }
    next.likelihoods[j] =
        OpponentLikelihood(next.own_actions, next.outcomes, population[j]);
    w[j] = state.posterior[j] * (next.likelihoods[j] / state.likelihoods[j]);
    total += w[j];
  }
  if (!(total > 0.0)) {
    throw ImpossibleEvidenceError("no population member explains the history");
  }
  for (double& x : w) x /= total;
  next.posterior = MixtureWeights(std::move(w));
  return next;
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_POSTERIOR_HPP_
