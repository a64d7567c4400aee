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

#ifndef SIMPLEX_PL_POPULATION_HPP_
#define SIMPLEX_PL_POPULATION_HPP_

#include <vector>

#include "simplex_pl/best_response.hpp"
#include "simplex_pl/errors.hpp"
#include "simplex_pl/game.hpp"
#include "simplex_pl/meta.hpp"
#include "simplex_pl/policy.hpp"

namespace simplex_pl {

// Ordered population with its meta-graph and payoff matrix. Slot 0 is the
// fixed seed policy.
struct PopulationSnapshot {
  GameSpec spec;
  std::vector<TabularPolicy> policies;
  Matrix meta_graph;
  Matrix payoff;

  std::size_t size() const { return policies.size(); }

  void Validate() const {
    const std::size_t n = policies.size();
    if (n == 0) throw SchemaError("population is empty");
    for (const auto& p : policies) {
      if (!(p.spec() == spec)) throw SpecMismatchError("policy game mismatch");
    }
    if (meta_graph.rows() != n || payoff.rows() != n) {
      throw SchemaError("population, meta-graph and payoff sizes disagree");
    }
    ValidateMetaGraph(meta_graph);
    RequireAntisymmetric(payoff);
  }

  // Behavioral policy of the mixture Pi^sigma.
  TabularPolicy Mixture(const MixtureWeights& sigma) const {
    return AggregateMixture(policies, sigma);
  }
};

inline BestResponse BestResponseToMixture(const PopulationSnapshot& pop,
                                          const MixtureWeights& sigma) {
  return BestResponseToMixture(pop.policies, sigma);
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_POPULATION_HPP_
