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

#ifndef SIMPLEX_PL_POLICY_HPP_
#define SIMPLEX_PL_POLICY_HPP_

#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "simplex_pl/errors.hpp"
#include "simplex_pl/game.hpp"

namespace simplex_pl {

// Tolerance used when accepting externally produced simplex points.
inline constexpr double kSimplexTolerance = 1e-9;

// A point in the population simplex. Entries are renormalized on
// construction so the stored sum is 1 to rounding.
class MixtureWeights {
 public:
  MixtureWeights() = default;
  explicit MixtureWeights(std::vector<double> weights)
      : weights_(std::move(weights)) {
    if (weights_.empty()) throw InvalidMixtureError("empty mixture");
    double total = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw InvalidMixtureError("mixture weight must be finite and >= 0");
      }
      total += w;
    }
    if (std::abs(total - 1.0) > kSimplexTolerance) {
      throw InvalidMixtureError("mixture weights sum to " +
                                std::to_string(total));
    }
    for (double& w : weights_) w /= total;
  }

  static MixtureWeights OneHot(std::size_t n, std::size_t i) {
    std::vector<double> w(n, 0.0);
    w.at(i) = 1.0;
    return MixtureWeights(std::move(w));
  }
  static MixtureWeights Uniform(std::size_t n) {
    return MixtureWeights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& values() const { return weights_; }

  friend bool operator==(const MixtureWeights&, const MixtureWeights&) = default;

 private:
  std::vector<double> weights_;
};

// Behavioral policy over the shared info-state space of one game. Each
// distribution is stored densely over ranks 1..K (slot r - 1).
class TabularPolicy {
 public:
  // Starts uniform over legal actions at every key.
  explicit TabularPolicy(std::shared_ptr<const InfoStateIndex> index)
      : index_(std::move(index)),
        probs_(index_->size() * index_->num_cards(), 0.0) {
    for (std::size_t id = 0; id < index_->size(); ++id) {
      SetUniform(static_cast<InfoId>(id));
    }
  }
  explicit TabularPolicy(const GameSpec& spec)
      : TabularPolicy(GetInfoStateIndex(spec)) {}

  const GameSpec& spec() const { return index_->spec(); }
  const InfoStateIndex& index() const { return *index_; }
  const std::shared_ptr<const InfoStateIndex>& shared_index() const {
    return index_;
  }
  int num_cards() const { return index_->num_cards(); }

  std::span<const double> Distribution(InfoId id) const {
    return {probs_.data() + Offset(id), static_cast<std::size_t>(num_cards())};
  }
  double Prob(InfoId id, int action) const {
    return probs_[Offset(id) + action - 1];
  }

  // Accepts any non-negative vector supported on legal actions whose sum is
  // within kSimplexTolerance of 1, and stores it renormalized.
  // Renormalizes unless `normalize` is false, in which case values are stored
  // verbatim (used when reloading serialized policies bit-for-bit).
  void SetDistribution(InfoId id, std::span<const double> dist,
                       bool normalize = true) {
    const int k = num_cards();
    if (static_cast<int>(dist.size()) != k) {
      throw InvalidMixtureError("distribution has wrong length");
    }
    const Hand legal = index_->legal(id);
    double total = 0.0;
    for (int r = 1; r <= k; ++r) {
      const double p = dist[r - 1];
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw InvalidMixtureError("negative or non-finite probability at " +
                                  index_->key(id).ToString());
      }
      if (p > 0.0 && !HandHas(legal, r)) {
        throw IllegalActionError("probability on illegal bid " +
                                 std::to_string(r) + " at " +
                                 index_->key(id).ToString());
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kSimplexTolerance) {
      throw InvalidMixtureError("distribution at " + index_->key(id).ToString() +
                                " sums to " + std::to_string(total));
    }
    const double scale = normalize ? total : 1.0;
    for (int r = 0; r < k; ++r) probs_[Offset(id) + r] = dist[r] / scale;
  }

  void SetDeterministic(InfoId id, int action) {
    if (!HandHas(index_->legal(id), action)) {
      throw IllegalActionError("bid " + std::to_string(action) +
                               " is not legal at " + index_->key(id).ToString());
    }
    const std::size_t off = Offset(id);
    for (int r = 0; r < num_cards(); ++r) probs_[off + r] = 0.0;
    probs_[off + action - 1] = 1.0;
  }

  void SetUniform(InfoId id) {
    const Hand legal = index_->legal(id);
    const double p = 1.0 / static_cast<double>(std::popcount(legal));
    const std::size_t off = Offset(id);
    for (int r = 1; r <= num_cards(); ++r) {
      probs_[off + r - 1] = HandHas(legal, r) ? p : 0.0;
    }
  }

  bool IsUniform(InfoId id) const {
    const Hand legal = index_->legal(id);
    const double p = 1.0 / static_cast<double>(std::popcount(legal));
    for (int r = 1; r <= num_cards(); ++r) {
      const double expected = HandHas(legal, r) ? p : 0.0;
      if (Prob(id, r) != expected) return false;
    }
    return true;
  }

  std::span<const double> raw() const { return probs_; }

  // Stable 64-bit hash of the game size and every probability.
  std::uint64_t Fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(num_cards());
    for (double p : probs_) {
      h ^= std::bit_cast<std::uint64_t>(p);
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return h;
  }

  friend bool operator==(const TabularPolicy& a, const TabularPolicy& b) {
    return a.spec() == b.spec() && a.probs_ == b.probs_;
  }

 private:
  std::size_t Offset(InfoId id) const {
    return static_cast<std::size_t>(id) * num_cards();
  }

  std::shared_ptr<const InfoStateIndex> index_;
  std::vector<double> probs_;
};

inline void RequireSameGame(const TabularPolicy& a, const TabularPolicy& b) {
  if (!(a.spec() == b.spec())) {
    throw SpecMismatchError("policies belong to different games (K=" +
                            std::to_string(a.num_cards()) + " vs K=" +
                            std::to_string(b.num_cards()) + ")");
  }
}

inline TabularPolicy UniformRandomPolicy(const GameSpec& spec) {
  return TabularPolicy(spec);
}

namespace internal {

// Deterministic policy that bids `target(turn)` when it is still in hand and
// otherwise the lowest legal bid (only reachable after off-script play).
template <typename TargetFn>
TabularPolicy ScriptedPolicy(const GameSpec& spec, TargetFn target) {
  TabularPolicy policy(spec);
  const auto& index = policy.index();
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto id = static_cast<InfoId>(i);
    const Hand legal = index.legal(id);
    const int want = target(index.turn(id));
    policy.SetDeterministic(id, HandHas(legal, want) ? want
                                                     : std::countr_zero(legal) + 1);
  }
  return policy;
}

}  // namespace internal

// Bids the rank equal to the revealed point card.
inline TabularPolicy PointMatchingPolicy(const GameSpec& spec) {
  return internal::ScriptedPolicy(
      spec, [k = spec.num_cards](int t) { return k - t; });
}

// Gives up the top card with a bid of 1, then outbids a point matcher by one
// on every remaining card.
inline TabularPolicy SacrificeTopPolicy(const GameSpec& spec) {
  return internal::ScriptedPolicy(
      spec, [k = spec.num_cards](int t) { return t == 0 ? 1 : k - t + 1; });
}

// Product of the policy's own action probabilities along the path to each
// key. The opponent's actions only select which keys exist, so they do not
// enter the product.
inline std::vector<double> OwnReachProbs(const TabularPolicy& policy) {
  const auto& index = policy.index();
  std::vector<double> reach(index.size(), 0.0);
  // Ids are sorted by key string, hence by turn, so parents come first.
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto id = static_cast<InfoId>(i);
    const InfoId parent = index.parent(id);
    if (parent == kNoInfoState) {
      reach[i] = 1.0;
      continue;
    }
    reach[i] = reach[parent] * policy.Prob(parent, index.key(id).actions.back());
  }
  return reach;
}

// Resets every key the policy cannot reach through its own play to uniform.
// Such keys never influence values, aggregation or posteriors.
inline TabularPolicy PruneUnreached(const TabularPolicy& policy) {
  TabularPolicy out = policy;
  const auto reach = OwnReachProbs(policy);
  for (std::size_t i = 0; i < reach.size(); ++i) {
    if (reach[i] == 0.0) out.SetUniform(static_cast<InfoId>(i));
  }
  return out;
}

// Behavioral policy realization-equivalent to drawing pi_i ~ sigma once per
// episode. Keys with zero aggregate reach are uniform.
inline TabularPolicy AggregateMixture(std::span<const TabularPolicy> policies,
                                      const MixtureWeights& sigma) {
  if (policies.empty() || policies.size() != sigma.size()) {
    throw InvalidMixtureError("mixture has " + std::to_string(sigma.size()) +
                              " weights for " +
                              std::to_string(policies.size()) + " policies");
  }
  for (const auto& p : policies) RequireSameGame(policies.front(), p);
  const int k = policies.front().num_cards();
  const auto& index = policies.front().index();
  const std::size_t n = index.size();
  std::vector<double> numer(n * k, 0.0);
  std::vector<double> denom(n, 0.0);
  for (std::size_t i = 0; i < policies.size(); ++i) {
    if (sigma[i] == 0.0) continue;
    const auto reach = OwnReachProbs(policies[i]);
    for (std::size_t id = 0; id < n; ++id) {
      const double w = sigma[i] * reach[id];
      if (w == 0.0) continue;
      denom[id] += w;
      const auto dist = policies[i].Distribution(static_cast<InfoId>(id));
      for (int r = 0; r < k; ++r) numer[id * k + r] += w * dist[r];
    }
  }
  TabularPolicy out(policies.front().shared_index());
  std::vector<double> dist(k);
  for (std::size_t id = 0; id < n; ++id) {
    if (denom[id] <= 0.0) continue;  // stays uniform
    for (int r = 0; r < k; ++r) dist[r] = numer[id * k + r] / denom[id];
    out.SetDistribution(static_cast<InfoId>(id), dist);
  }
  return out;
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_POLICY_HPP_
