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

#include "simplex_pl/game.hpp"
#include "simplex_pl/rng.hpp"

namespace simplex_pl {
namespace {

GameState Play(const GameSpec& spec, const std::vector<int>& b0, const std::vector<int>& b1) {
  auto s = NewGame(spec);
  for (std::size_t t = 0; t < b0.size(); ++t) s = ApplyJointAction(s, b0[t], b1[t]).first;
  return s;
}

TEST(NewGame, FullHandsAtTurnZero) {
  for (int k : {2, 5}) {
    const auto s = NewGame(GameSpec{k});
    EXPECT_EQ(s.turn(), 0);
    EXPECT_EQ(s.hand(0), FullHand(k));
    EXPECT_EQ(s.hand(1), FullHand(k));
    EXPECT_TRUE(s.outcomes().empty());
    EXPECT_EQ(HandRanks(s.hand(0)).size(), static_cast<std::size_t>(k));
  }
}

TEST(NewGame, RejectsTooFewCards) {
  EXPECT_THROW(NewGame(GameSpec{1}), InvalidSpecError);
  EXPECT_THROW(NewGame(GameSpec{0}), InvalidSpecError);
  EXPECT_THROW(NewGame(GameSpec{kMaxCards + 1}), InvalidSpecError);
}

TEST(ApplyJointAction, TieDiscardsTheCard) {
  const auto [s, w] = ApplyJointAction(NewGame(GameSpec{5}), 3, 3);
  EXPECT_EQ(w, 0);
  EXPECT_EQ(s.points(0), 0);
  EXPECT_EQ(s.points(1), 0);
  EXPECT_FALSE(HandHas(s.hand(0), 3));
  EXPECT_FALSE(HandHas(s.hand(1), 3));
}

TEST(ApplyJointAction, HigherBidTakesThePointCard) {
  const auto [s, w] = ApplyJointAction(NewGame(GameSpec{5}), 5, 1);
  EXPECT_EQ(w, 1);
  EXPECT_EQ(s.points(0), 5);
  EXPECT_EQ(s.points(1), 0);
}

TEST(ApplyJointAction, RejectsIllegalBids) {
  const GameSpec spec{5};
  auto s = ApplyJointAction(NewGame(spec), 2, 4).first;
  EXPECT_THROW(ApplyJointAction(s, 2, 1), IllegalActionError);
  EXPECT_THROW(ApplyJointAction(s, 1, 4), IllegalActionError);
  EXPECT_THROW(ApplyJointAction(s, 0, 1), IllegalActionError);
  EXPECT_THROW(ApplyJointAction(s, 1, 6), IllegalActionError);
  const auto done = Play(spec, {1, 2, 3, 4, 5}, {1, 2, 3, 4, 5});
  EXPECT_THROW(ApplyJointAction(done, 1, 1), IllegalActionError);
}

TEST(TerminalReturn, WorkedExamples) {
  EXPECT_EQ(TerminalReturn(Play(GameSpec{5}, {5, 4, 3, 2, 1}, {1, 2, 3, 4, 5})), 6.0);
  EXPECT_EQ(TerminalReturn(Play(GameSpec{5}, {2, 4, 1, 5, 3}, {2, 4, 1, 5, 3})), 0.0);
  EXPECT_EQ(TerminalReturn(Play(GameSpec{2}, {2, 1}, {1, 2})), 1.0);
  // Sacrifice the top card, then win everything else.
  EXPECT_EQ(TerminalReturn(Play(GameSpec{5}, {1, 5, 4, 3, 2}, {5, 4, 3, 2, 1})), 5.0);
}

TEST(TerminalReturn, RejectsUnfinishedGames) {
  EXPECT_THROW(TerminalReturn(NewGame(GameSpec{3})), NotTerminalError);
  EXPECT_THROW(TerminalReturn(Play(GameSpec{3}, {1, 2}, {2, 1})), NotTerminalError);
}

// Every pair of bid permutations, K=4.
void ForEachJointPlay(int k, const std::function<void(const std::vector<int>&,
                                                      const std::vector<int>&)>& fn) {
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> perms;
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  for (const auto& a : perms) {
    for (const auto& b : perms) fn(a, b);
  }
}

TEST(GameProperties, ZeroSumSymmetricAndBounded) {
  const GameSpec spec{4};
  ForEachJointPlay(4, [&](const auto& a, const auto& b) {
    const double r = TerminalReturn(Play(spec, a, b));
    EXPECT_EQ(r, -TerminalReturn(Play(spec, b, a)));
    EXPECT_LE(std::abs(r), spec.TotalPoints());
    const auto s = Play(spec, a, b);
    EXPECT_EQ(s.points(0) + s.points(1) <= spec.TotalPoints(), true);
  });
}

TEST(GameProperties, TransitionsArePure) {
  Rng rng(5);
  const GameSpec spec{5};
  for (int trial = 0; trial < 50; ++trial) {
    auto s = NewGame(spec);
    while (!s.IsTerminal()) {
      const auto h0 = HandRanks(s.hand(0)), h1 = HandRanks(s.hand(1));
      const int a0 = h0[rng.Below(h0.size())], a1 = h1[rng.Below(h1.size())];
      const auto x = ApplyJointAction(s, a0, a1);
      const auto y = ApplyJointAction(s, a0, a1);
      EXPECT_EQ(x.second, y.second);
      EXPECT_EQ(MakeInfoStateKey(x.first, 0), MakeInfoStateKey(y.first, 0));
      EXPECT_EQ(x.first.points(0), y.first.points(0));
      s = x.first;
    }
  }
}

TEST(InfoStateKey, RootIsShared) {
  const auto s = NewGame(GameSpec{5});
  EXPECT_EQ(MakeInfoStateKey(s, 0), MakeInfoStateKey(s, 1));
  EXPECT_EQ(MakeInfoStateKey(s, 0).ToString(), "t0");
}

TEST(InfoStateKey, IsEgocentric) {
  const auto s = ApplyJointAction(NewGame(GameSpec{5}), 4, 2).first;
  const auto k0 = MakeInfoStateKey(s, 0), k1 = MakeInfoStateKey(s, 1);
  EXPECT_EQ(k0.ToString(), "t1:4+");
  EXPECT_EQ(k1.ToString(), "t1:2-");
  EXPECT_NE(k0, k1);
  // Same own bid, mirrored outcome.
  const auto m = ApplyJointAction(NewGame(GameSpec{5}), 2, 4).first;
  EXPECT_EQ(MakeInfoStateKey(m, 1).ToString(), "t1:4+");
}

TEST(InfoStateKey, HidesOpponentBid) {
  const auto a = ApplyJointAction(NewGame(GameSpec{5}), 4, 1).first;
  const auto b = ApplyJointAction(NewGame(GameSpec{5}), 4, 3).first;
  EXPECT_EQ(MakeInfoStateKey(a, 0), MakeInfoStateKey(b, 0));
  EXPECT_NE(MakeInfoStateKey(a, 1), MakeInfoStateKey(b, 1));
}

TEST(InfoStateKey, StringRoundTrip) {
  for (const auto& key : EnumerateInfostates(GameSpec{4})) {
    EXPECT_EQ(InfoStateKey::Parse(key.ToString()), key);
  }
  for (const char* bad : {"", "t", "x0", "t1", "t1:", "t1:4", "t1:4x", "t1:0+", "t0:1+",
                          "t2:1+"}) {
    EXPECT_THROW(InfoStateKey::Parse(bad), SchemaError) << bad;
  }
}

TEST(InfoStateKey, PerfectRecall) {
  Rng rng(9);
  const GameSpec spec{5};
  for (int trial = 0; trial < 100; ++trial) {
    auto s = NewGame(spec);
    std::vector<InfoStateKey> seen[2];
    while (!s.IsTerminal()) {
      for (int p : {0, 1}) seen[p].push_back(MakeInfoStateKey(s, p));
      const auto h0 = HandRanks(s.hand(0)), h1 = HandRanks(s.hand(1));
      s = ApplyJointAction(s, h0[rng.Below(h0.size())], h1[rng.Below(h1.size())]).first;
    }
    for (int p : {0, 1}) {
      const auto last = MakeInfoStateKey(s, p);
      for (const auto& earlier : seen[p]) {
        InfoStateKey prefix;
        prefix.actions.assign(last.actions.begin(), last.actions.begin() + earlier.turn());
        prefix.outcomes.assign(last.outcomes.begin(), last.outcomes.begin() + earlier.turn());
        EXPECT_EQ(prefix, earlier);
      }
    }
  }
}

// Independent oracle: walk every joint play and collect the keys of
// non-terminal states for both players.
std::set<std::string> ReachableKeysByBruteForce(int k) {
  std::set<std::string> keys;
  std::function<void(const GameState&)> walk = [&](const GameState& s) {
    if (s.IsTerminal()) return;
    keys.insert(MakeInfoStateKey(s, 0).ToString());
    keys.insert(MakeInfoStateKey(s, 1).ToString());
    for (int a : HandRanks(s.hand(0))) {
      for (int b : HandRanks(s.hand(1))) walk(ApplyJointAction(s, a, b).first);
    }
  };
  walk(NewGame(GameSpec{k}));
  return keys;
}

TEST(EnumerateInfostates, MatchesBruteForceWalk) {
  for (int k = 2; k <= 5; ++k) {
    std::set<std::string> enumerated;
    for (const auto& key : EnumerateInfostates(GameSpec{k})) enumerated.insert(key.ToString());
    EXPECT_EQ(enumerated, ReachableKeysByBruteForce(k)) << "K=" << k;
  }
}

TEST(EnumerateInfostates, SmallGameCounts) {
  // K=2: the root plus bid 1 (tie or loss) and bid 2 (win or tie). Bid 1
  // cannot win and bid 2 cannot lose, so only 4 of the 6 pairs are reachable.
  const auto k2 = EnumerateInfostates(GameSpec{2});
  EXPECT_EQ(k2.size(), 5u);
  const auto index2 = GetInfoStateIndex(GameSpec{2});
  for (std::size_t i = 0; i < index2->size(); ++i) {
    const auto id = static_cast<InfoId>(i);
    if (index2->turn(id) == 1) { EXPECT_EQ(std::popcount(index2->legal(id)), 1); }
  }
  const auto index3 = GetInfoStateIndex(GameSpec{3});
  EXPECT_EQ(std::popcount(index3->legal(index3->root())), 3);
  int turn1 = 0;
  for (std::size_t i = 0; i < index3->size(); ++i) turn1 += index3->turn(static_cast<InfoId>(i)) == 1;
  EXPECT_EQ(turn1, 7);
  EXPECT_EQ(GetInfoStateIndex(GameSpec{5})->size(), 4974u);
}

TEST(InfoStateIndex, StructureIsConsistent) {
  const auto index = GetInfoStateIndex(GameSpec{4});
  EXPECT_EQ(index->key(index->root()).turn(), 0);
  EXPECT_EQ(index->parent(index->root()), kNoInfoState);
  for (std::size_t i = 0; i < index->size(); ++i) {
    const auto id = static_cast<InfoId>(i);
    const auto& key = index->key(id);
    EXPECT_GE(std::popcount(index->legal(id)), 1);
    EXPECT_EQ(std::popcount(index->legal(id)), 4 - key.turn());
    EXPECT_EQ(index->Find(key), std::optional<InfoId>(id));
    for (int a : HandRanks(index->legal(id))) {
      EXPECT_FALSE(std::count(key.actions.begin(), key.actions.end(), a));
      for (int w : {-1, 0, 1}) {
        const InfoId c = index->child(id, a, w);
        if (c == kNoInfoState) continue;
        EXPECT_EQ(index->key(c), key.Child(a, w));
        EXPECT_EQ(index->parent(c), id);
      }
    }
  }
  InfoStateKey impossible;
  impossible.actions = {1};
  impossible.outcomes = {1};
  EXPECT_FALSE(index->Find(impossible).has_value());
}

}  // namespace
}  // namespace simplex_pl
