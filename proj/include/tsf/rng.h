// Copyright 2026 The tsfnet Authors.
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

#ifndef TSF_RNG_H_
#define TSF_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace tsf {

// Seed derivation. Every stage and every replicate gets its own stream:
//   stream_seed = mix(master ^ mix(hash(tag) + counter))
// so any stage can be rerun in isolation from the master seed alone.
std::uint64_t SplitMix64(std::uint64_t x);
std::uint64_t DeriveSeed(std::uint64_t master, std::string_view tag,
                         std::uint64_t counter = 0);

// Portable random source. std::mt19937_64 output is fully specified by the
// standard; the distributions in <random> are not, so all variates are
// derived here from raw engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform on (0, 1].
  double UniformPositive() { return 1.0 - Uniform(); }
  // Uniform integer on [0, n). n must be > 0.
  std::uint64_t Index(std::uint64_t n);
  bool Bernoulli(double p) { return Uniform() < p; }
  double Normal(double mean = 0.0, double sd = 1.0);
  std::uint64_t Poisson(double mean);
  // Number of failures before the first success, p in (0, 1].
  std::uint64_t Geometric(double p);
  // Index drawn from an unnormalised weight vector. Weights must be >= 0
  // with a positive sum.
  std::size_t Categorical(std::span<const double> weights);

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[Index(i)]);
    }
  }

  // k distinct indices from [0, n), uniformly, in selection order.
  std::vector<std::size_t> SampleWithoutReplacement(std::size_t n,
                                                    std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace tsf

#endif  // TSF_RNG_H_
