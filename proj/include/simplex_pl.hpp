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

// Umbrella header.

#ifndef SIMPLEX_PL_SIMPLEX_PL_HPP_
#define SIMPLEX_PL_SIMPLEX_PL_HPP_

#include "simplex_pl/best_response.hpp"
#include "simplex_pl/errors.hpp"
#include "simplex_pl/eval.hpp"
#include "simplex_pl/game.hpp"
#include "simplex_pl/io.hpp"
#include "simplex_pl/linear_program.hpp"
#include "simplex_pl/meta.hpp"
#include "simplex_pl/policy.hpp"
#include "simplex_pl/population.hpp"
#include "simplex_pl/posterior.hpp"
#include "simplex_pl/rng.hpp"
#include "simplex_pl/trainer.hpp"

#endif  // SIMPLEX_PL_SIMPLEX_PL_HPP_
