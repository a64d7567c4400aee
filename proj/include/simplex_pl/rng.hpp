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

#ifndef SIMPLEX_PL_RNG_HPP_
#define SIMPLEX_PL_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace simplex_pl {

// Counter-based generator: output n of a stream is a pure function of
// (key, n). Streams are forked by hashing a stable label into the key, so
// the values a consumer sees never depend on how many draws other
// consumers made, or in which order / thread they ran.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng() = default;
  explicit Rng(std::uint64_t seed) : key_(Mix(seed ^ 0x5bd1e9955bd1e995ULL)) {}
  Rng(std::uint64_t key, std::uint64_t counter) : key_(key), counter_(counter) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    ++counter_;
    return Mix(key_ + 0x9e3779b97f4a7c15ULL * counter_);
  }

  Rng Fork(std::string_view label) const {
    return Rng(Mix(key_ ^ Fnv1a(label)), 0);
  }
  Rng Fork(std::string_view label, std::uint64_t index) const {
    return Rng(Mix(Mix(key_ ^ Fnv1a(label)) + index), 0);
  }

  // Uniform in [0, 1).
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::size_t Below(std::size_t n) {
    return static_cast<std::size_t>(Uniform() * static_cast<double>(n));
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Index drawn from a discrete distribution (need not be normalized).
  std::size_t Categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = Uniform() * total;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0.0) continue;
      last_positive = i;
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    return last_positive;
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  static std::uint64_t Mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t Fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::uint64_t key_ = 0x853c49e6748fea9bULL;
  std::uint64_t counter_ = 0;
};

// Symmetric Dirichlet(alpha) draw of dimension k. Gamma variates are drawn
// in log space (Gamma(a) = Gamma(a + 1) * U^(1/a)) so that very small
// concentrations do not underflow to an all-zero vector.
inline std::vector<double> SampleDirichlet(Rng& rng, std::size_t k,
                                           double alpha) {
  std::vector<double> logs(k);
  std::gamma_distribution<double> gamma(alpha + 1.0, 1.0);
  for (auto& l : logs) {
    double g = gamma(rng);
    double u = rng.Uniform();
    while (u <= 0.0) u = rng.Uniform();
    l = std::log(g) + std::log(u) / alpha;
  }
  double hi = -std::numeric_limits<double>::infinity();
  for (double l : logs) hi = std::max(hi, l);
  std::vector<double> out(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = std::exp(logs[i] - hi);
    total += out[i];
  }
  for (auto& x : out) x /= total;
  return out;
}

}  // namespace simplex_pl

#endif  // SIMPLEX_PL_RNG_HPP_
