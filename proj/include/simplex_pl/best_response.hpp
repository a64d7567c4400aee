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

#ifndef SIMPLEX_PL_BEST_RESPONSE_HPP_
#define SIMPLEX_PL_BEST_RESPONSE_HPP_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "simplex_pl/errors.hpp"
#include "simplex_pl/game.hpp"
#include "simplex_pl/policy.hpp"

namespace simplex_pl {

// Value ties closer than this are broken towards the lowest bid.
inline constexpr double kBestResponseTieTolerance = 1e-12;

struct BestResponse {
  TabularPolicy policy;
  double value = 0.0;
};

namespace internal {

struct JointWalk {
  const TabularPolicy& p0;
  const TabularPolicy& p1;
  int k;

  double Run(InfoId id0, InfoId id1, Hand h0, Hand h1, int t, double diff,
             double prob) const {
    if (t == k) return prob * diff;
    const int card = k - t;
    double total = 0.0;
    for (int a : HandRanks(h0)) {
      const double pa = p0.Prob(id0, a);
      if (pa == 0.0) continue;
      for (int b : HandRanks(h1)) {
        const double pb = p1.Prob(id1, b);
        if (pb == 0.0) continue;
        const int w = Sign(a - b);
        total += Run(p0.index().child(id0, a, w), p1.index().child(id1, b, -w),
                     HandWithout(h0, a), HandWithout(h1, b), t + 1,
                     diff + w * card, prob * pa * pb);
      }
    }
    return total;
  }
};

// One opponent history consistent with the responder's current key.
struct OpponentHistory {
  InfoId id;
  Hand hand;
  double weight;  // opponent's reach probability
  double diff;    // responder points minus opponent points so far
};

class BestResponseSolver {
 public:
  explicit BestResponseSolver(const TabularPolicy& opponent)
      : opponent_(opponent),
        index_(opponent.index()),
        k_(opponent.num_cards()),
        policy_(opponent.shared_index()) {}

  BestResponse Solve() {
    const Hand full = FullHand(k_);
    std::vector<OpponentHistory> start{{index_.root(), full, 1.0, 0.0}};
    const double value = Visit(index_.root(), 0, start);
    return {std::move(policy_), value};
  }

 private:
  static double TerminalValue(const std::vector<OpponentHistory>& hs) {
    double v = 0.0;
    for (const auto& h : hs) v += h.weight * h.diff;
    return v;
  }

  double Visit(InfoId id, int t, const std::vector<OpponentHistory>& hs) {
    const int card = k_ - t;
    const Hand legal = index_.legal(id);
    int best_action = 0;
    double best_value = 0.0;
    std::array<std::vector<OpponentHistory>, 3> groups;
    for (int a : HandRanks(legal)) {
      for (auto& g : groups) g.clear();
      for (const auto& h : hs) {
        for (int b : HandRanks(h.hand)) {
          const double q = opponent_.Prob(h.id, b);
          if (q == 0.0) continue;
          const int w = Sign(a - b);
          groups[w + 1].push_back({index_.child(h.id, b, -w),
                                   HandWithout(h.hand, b), h.weight * q,
                                   h.diff + w * card});
        }
      }
      double value = 0.0;
      for (int w = -1; w <= 1; ++w) {
        const auto& g = groups[w + 1];
        if (t + 1 == k_) {
          value += TerminalValue(g);
          continue;
        }
        const InfoId child = index_.child(id, a, w);
        if (child == kNoInfoState) continue;  // unreachable, g is empty
        value += Visit(child, t + 1, g);
      }
      if (best_action == 0 || value > best_value + kBestResponseTieTolerance) {
        best_action = a;
        best_value = value;
      }
    }
    policy_.SetDeterministic(id, best_action);
    return best_value;
  }

  const TabularPolicy& opponent_;
  const InfoStateIndex& index_;
  int k_;
  TabularPolicy policy_;
};

}  // namespace internal

// J(policy, opponent): exact expected point difference for the player
// using `policy`, by full traversal of the joint game tree.
inline double ExpectedValue(const TabularPolicy& policy,
                            const TabularPolicy& opponent) {
  RequireSameGame(policy, opponent);
  const int k = policy.num_cards();
  const Hand full = FullHand(k);
  const InfoId root = policy.index().root();
  return internal::JointWalk{policy, opponent, k}.Run(root, root, full, full, 0,
                                                      0.0, 1.0);
}

// Deterministic best response by backward induction over the responder's
// info states, each carrying the opponent histories consistent with it.
// Ties go to the lowest bid.
inline BestResponse ExactBestResponse(const TabularPolicy& opponent) {
  return internal::BestResponseSolver(opponent).Solve();
}

inline BestResponse BestResponseToMixture(
    std::span<const TabularPolicy> policies, const MixtureWeights& sigma) {
  return ExactBestResponse(AggregateMixture(policies, sigma));
}

inline constexpr int kBruteForceMaxCards = 3;

// Enumerates every deterministic policy (keys in lexicographic order, bids
// ascending) and keeps the first maximizer. Only for tiny games.
inline BestResponse BruteForceBestResponse(const TabularPolicy& opponent) {
  const int k = opponent.num_cards();
  if (k > kBruteForceMaxCards) {
    throw InvalidSpecError("brute-force best response refuses K=" +
                           std::to_string(k) + " (limit " +
                           std::to_string(kBruteForceMaxCards) + ")");
  }
  const auto& index = opponent.index();
  const std::size_t n = index.size();
  std::vector<std::vector<int>> choices(n);
  for (std::size_t i = 0; i < n; ++i) {
    choices[i] = HandRanks(index.legal(static_cast<InfoId>(i)));
  }
  std::vector<std::size_t> digit(n, 0);
  TabularPolicy candidate(opponent.shared_index());
  for (std::size_t i = 0; i < n; ++i) {
    candidate.SetDeterministic(static_cast<InfoId>(i), choices[i][0]);
  }
  std::optional<BestResponse> best;
  while (true) {
    const double v = ExpectedValue(candidate, opponent);
    if (!best || v > best->value + kBestResponseTieTolerance) {
      best = BestResponse{candidate, v};
    }
    // Odometer with the last key varying fastest.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++digit[pos] < choices[pos].size()) break;
      digit[pos] = 0;
      if (pos == 0) return *best;
    }
    for (std::size_t i = pos; i < n; ++i) {
      candidate.SetDeterministic(static_cast<InfoId>(i), choices[i][digit[i]]);
    }
    if (n == 0) return *best;
  }
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_BEST_RESPONSE_HPP_
