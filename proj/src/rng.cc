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

#include "tsf/rng.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace tsf {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t DeriveSeed(std::uint64_t master, std::string_view tag,
                         std::uint64_t counter) {
  // FNV-1a over the tag keeps stage names stable across platforms.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(master ^ SplitMix64(h + counter));
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::Index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::Index: empty range");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::Normal(double mean, double sd) {
  const double u1 = UniformPositive();
  const double u2 = Uniform();
  const double z =
      std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + sd * z;
}

std::uint64_t Rng::Poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean < 30.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = UniformPositive();
    while (prod > limit) {
      ++k;
      prod *= UniformPositive();
    }
    return k;
  }
  // Normal approximation is adequate for the cluster sizes used here.
  const double x = std::round(Normal(mean, std::sqrt(mean)));
  return x < 0.0 ? 0 : static_cast<std::uint64_t>(x);
}

std::uint64_t Rng::Geometric(double p) {
  if (p >= 1.0) return 0;
  if (p <= 0.0) throw std::invalid_argument("Rng::Geometric: p must be > 0");
  const double g = std::floor(std::log(UniformPositive()) / std::log1p(-p));
  if (g >= 1.8e19) return UINT64_MAX;
  return static_cast<std::uint64_t>(g);
}

std::size_t Rng::Categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw std::invalid_argument("Rng::Categorical: weights sum to zero");
  }
  double u = Uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // Floating-point leftovers land on the last positive weight.
  for (std::size_t i = weights.size(); i > 0; --i) {
    if (weights[i - 1] > 0.0) return i - 1;
  }
  return 0;
}

std::vector<std::size_t> Rng::SampleWithoutReplacement(std::size_t n,
                                                       std::size_t k) {
  if (k > n) k = n;
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + Index(n - i)]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace tsf
