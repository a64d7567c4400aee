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

// Goofspiel with imperfect information: K point cards revealed in
// descending order (K, K-1, ..., 1), both players bid simultaneously with a
// hand of ranks {1..K}, and only the sign of each bid comparison is
// revealed. Tied bids discard the point card. Returns are the point
// difference from player 0's perspective.

#ifndef SIMPLEX_PL_GAME_HPP_
#define SIMPLEX_PL_GAME_HPP_

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simplex_pl/errors.hpp"

namespace simplex_pl {

// Keys encode one digit per bid, so the engine is limited to 9 cards.
inline constexpr int kMaxCards = 9;

enum class TieRule { kDiscard };

struct GameSpec {
  int num_cards = 5;
  TieRule tie_rule = TieRule::kDiscard;

  void Validate() const {
    if (num_cards < 2 || num_cards > kMaxCards) {
      throw InvalidSpecError("num_cards must be in [2, " +
                             std::to_string(kMaxCards) + "], got " +
                             std::to_string(num_cards));
    }
  }
  int TotalPoints() const { return num_cards * (num_cards + 1) / 2; }
  // Value of the point card revealed at turn t.
  int PointCard(int turn) const { return num_cards - turn; }

  friend bool operator==(const GameSpec&, const GameSpec&) = default;
};

inline int Sign(int x) { return (x > 0) - (x < 0); }

// Bit r - 1 set <=> rank r is held.
using Hand = std::uint32_t;

inline Hand FullHand(int num_cards) { return (Hand{1} << num_cards) - 1; }
inline bool HandHas(Hand h, int rank) { return (h >> (rank - 1)) & 1U; }
inline Hand HandWithout(Hand h, int rank) { return h & ~(Hand{1} << (rank - 1)); }

inline std::vector<int> HandRanks(Hand h) {
  std::vector<int> out;
  for (int r = 1; h != 0; ++r, h >>= 1) {
    if (h & 1U) out.push_back(r);
  }
  return out;
}

class GameState {
 public:
  int turn() const { return static_cast<int>(outcomes_.size()); }
  const GameSpec& spec() const { return spec_; }
  Hand hand(int player) const { return hands_[player]; }
  const std::vector<int>& actions(int player) const { return actions_[player]; }
  // Sign of (bid_0 - bid_1) per turn, i.e. player 0's perspective.
  const std::vector<int>& outcomes() const { return outcomes_; }
  int points(int player) const { return points_[player]; }
  bool IsTerminal() const { return turn() == spec_.num_cards; }

  friend bool operator==(const GameState&, const GameState&) = default;

 private:
  friend GameState NewGame(const GameSpec& spec);
  friend std::pair<GameState, int> ApplyJointAction(const GameState& state,
                                                    int a0, int a1);

  GameSpec spec_;
  std::array<Hand, 2> hands_{};
  std::array<std::vector<int>, 2> actions_;
  std::vector<int> outcomes_;
  std::array<int, 2> points_{};
};

inline GameState NewGame(const GameSpec& spec) {
  spec.Validate();
  GameState s;
  s.spec_ = spec;
  s.hands_ = {FullHand(spec.num_cards), FullHand(spec.num_cards)};
  return s;
}

// Returns the successor state and w = sign(a0 - a1).
inline std::pair<GameState, int> ApplyJointAction(const GameState& state,
                                                  int a0, int a1) {
  if (state.IsTerminal()) {
    throw IllegalActionError("game is over");
  }
  const int k = state.spec_.num_cards;
  for (auto [player, bid] : {std::pair{0, a0}, std::pair{1, a1}}) {
    if (bid < 1 || bid > k || !HandHas(state.hands_[player], bid)) {
      throw IllegalActionError("player " + std::to_string(player) +
                               " cannot bid " + std::to_string(bid));
    }
  }
  GameState next = state;
  const int w = Sign(a0 - a1);
  const int card = state.spec_.PointCard(state.turn());
  if (w > 0) next.points_[0] += card;
  if (w < 0) next.points_[1] += card;
  next.hands_[0] = HandWithout(next.hands_[0], a0);
  next.hands_[1] = HandWithout(next.hands_[1], a1);
  next.actions_[0].push_back(a0);
  next.actions_[1].push_back(a1);
  next.outcomes_.push_back(w);
  return {std::move(next), w};
}

inline double TerminalReturn(const GameState& state) {
  if (!state.IsTerminal()) {
    throw NotTerminalError("terminal_return called at turn " +
                           std::to_string(state.turn()));
  }
  return static_cast<double>(state.points(0) - state.points(1));
}

// A player's observation history: own bids and the egocentric outcome of
// each bid comparison (+1 = this player won the card).
struct InfoStateKey {
  std::vector<int> actions;
  std::vector<int> outcomes;

  int turn() const { return static_cast<int>(actions.size()); }

  InfoStateKey Child(int action, int outcome) const {
    InfoStateKey c = *this;
    c.actions.push_back(action);
    c.outcomes.push_back(outcome);
    return c;
  }

  // "t0" at the root, otherwise e.g. "t2:5+3-" (bid 5 won, bid 3 lost).
  std::string ToString() const {
    std::string s = "t" + std::to_string(turn());
    if (!actions.empty()) s += ':';
    for (std::size_t i = 0; i < actions.size(); ++i) {
      s += static_cast<char>('0' + actions[i]);
      s += outcomes[i] > 0 ? '+' : (outcomes[i] < 0 ? '-' : '0');
    }
    return s;
  }

  static InfoStateKey Parse(std::string_view text) {
    auto bad = [&] {
      return SchemaError("malformed info-state key '" + std::string(text) + "'");
    };
    if (text.size() < 2 || text[0] != 't') throw bad();
    const int t = text[1] - '0';
    if (t < 0 || t > kMaxCards) throw bad();
    InfoStateKey key;
    if (t == 0) {
      if (text.size() != 2) throw bad();
      return key;
    }
    if (text.size() != 3 + 2 * static_cast<std::size_t>(t) || text[2] != ':') {
      throw bad();
    }
    for (int i = 0; i < t; ++i) {
      const char a = text[3 + 2 * i];
      const char w = text[4 + 2 * i];
      if (a < '1' || a > '9') throw bad();
      key.actions.push_back(a - '0');
      if (w == '+') key.outcomes.push_back(1);
      else if (w == '0') key.outcomes.push_back(0);
      else if (w == '-') key.outcomes.push_back(-1);
      else throw bad();
    }
    return key;
  }

  friend auto operator<=>(const InfoStateKey& a, const InfoStateKey& b) {
    return a.ToString() <=> b.ToString();
  }
  friend bool operator==(const InfoStateKey&, const InfoStateKey&) = default;
};

inline InfoStateKey MakeInfoStateKey(const GameState& state, int player) {
  InfoStateKey key;
  key.actions = state.actions(player);
  key.outcomes = state.outcomes();
  if (player == 1) {
    for (auto& w : key.outcomes) w = -w;
  }
  return key;
}

using InfoId = std::int32_t;
inline constexpr InfoId kNoInfoState = -1;

// Dense numbering of every non-terminal information state reachable under
// some joint play, shared by both players. Ids follow the lexicographic
// order of the key strings.
class InfoStateIndex {
 public:
  explicit InfoStateIndex(const GameSpec& spec) : spec_(spec) {
    spec.Validate();
    std::set<std::string> seen;
    std::vector<InfoStateKey> keys;
    InfoStateKey root;
    Explore(root, FullHand(spec.num_cards), FullHand(spec.num_cards), seen,
            keys);
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
      return a.ToString() < b.ToString();
    });
    keys_ = std::move(keys);
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      ids_.emplace(keys_[i].ToString(), static_cast<InfoId>(i));
    }
    const int k = spec.num_cards;
    children_.assign(keys_.size() * k * 3, kNoInfoState);
    parents_.assign(keys_.size(), kNoInfoState);
    legal_.resize(keys_.size());
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      Hand h = FullHand(k);
      for (int a : keys_[i].actions) h = HandWithout(h, a);
      legal_[i] = h;
      for (int a : HandRanks(h)) {
        for (int w = -1; w <= 1; ++w) {
          auto it = ids_.find(keys_[i].Child(a, w).ToString());
          if (it != ids_.end()) {
            children_[(i * k + (a - 1)) * 3 + (w + 1)] = it->second;
            parents_[it->second] = static_cast<InfoId>(i);
          }
        }
      }
    }
    root_ = ids_.at(InfoStateKey{}.ToString());
  }

  const GameSpec& spec() const { return spec_; }
  int num_cards() const { return spec_.num_cards; }
  std::size_t size() const { return keys_.size(); }
  InfoId root() const { return root_; }
  const InfoStateKey& key(InfoId id) const { return keys_[id]; }
  int turn(InfoId id) const { return keys_[id].turn(); }
  Hand legal(InfoId id) const { return legal_[id]; }
  InfoId parent(InfoId id) const { return parents_[id]; }

  // kNoInfoState when the child is terminal or unreachable.
  InfoId child(InfoId id, int action, int outcome) const {
    return children_[(static_cast<std::size_t>(id) * spec_.num_cards +
                      (action - 1)) * 3 + (outcome + 1)];
  }

  std::optional<InfoId> Find(const InfoStateKey& key) const {
    auto it = ids_.find(key.ToString());
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

 private:
  void Explore(InfoStateKey& own, Hand own_hand, Hand opp_hand,
               std::set<std::string>& seen, std::vector<InfoStateKey>& keys) {
    if (own.turn() == spec_.num_cards) return;
    if (seen.insert(own.ToString()).second) keys.push_back(own);
    for (int a : HandRanks(own_hand)) {
      for (int b : HandRanks(opp_hand)) {
        own.actions.push_back(a);
        own.outcomes.push_back(Sign(a - b));
        Explore(own, HandWithout(own_hand, a), HandWithout(opp_hand, b), seen,
                keys);
        own.actions.pop_back();
        own.outcomes.pop_back();
      }
    }
  }

  GameSpec spec_;
  std::vector<InfoStateKey> keys_;
  std::map<std::string, InfoId> ids_;
  std::vector<InfoId> children_;
  std::vector<InfoId> parents_;
  std::vector<Hand> legal_;
  InfoId root_ = kNoInfoState;
};

// Indices are immutable and shared between every policy of the same game.
inline std::shared_ptr<const InfoStateIndex> GetInfoStateIndex(
    const GameSpec& spec) {
  spec.Validate();
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const InfoStateIndex>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[spec.num_cards];
  if (!slot) slot = std::make_shared<const InfoStateIndex>(spec);
  return slot;
}

inline std::vector<InfoStateKey> EnumerateInfostates(const GameSpec& spec) {
  auto index = GetInfoStateIndex(spec);
  std::vector<InfoStateKey> out;
  out.reserve(index->size());
  for (std::size_t i = 0; i < index->size(); ++i) {
    out.push_back(index->key(static_cast<InfoId>(i)));
  }
  return out;
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_GAME_HPP_
