// Copyright 2026 The qpt developers
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

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace qpt {

/**
 * Seeded pseudo-random stream. The same seed always reproduces the same
 * sample sequence, and `fork(k)` derives an independent substream from
 * (seed, k) without consuming any state of the parent. Forking from the
 * seed rather than the engine state keeps results independent of how many
 * samples the parent has drawn, which is what makes per-item substreams
 * (per tomographic setting, per Monte-Carlo sample, per restart) safe to
 * evaluate in any order or on any number of threads.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  /// Independent substream derived from (seed, stream).
  Rng fork(std::uint64_t stream) const {
    return Rng(mix(seed_ + 0x9e3779b97f4a7c15ull * (stream + 1)));
  }

  std::uint64_t seed() const { return seed_; }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller.
  double gaussian() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    return r * std::cos(two_pi() * uniform());
  }

  /// Complex standard normal: independent N(0,1) real and imaginary parts.
  std::complex<double> complex_gaussian() {
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double phi = two_pi() * uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  /// Poisson sample with the given mean (0 for mean <= 0).
  std::int64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(engine_);
  }

  /// Uniform integer in [0, bound).
  std::uint64_t uniform_int(std::uint64_t bound) {
    std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
    return dist(engine_);
  }

 private:
  static constexpr double two_pi() { return 6.28318530717958647692; }

  // splitmix64 finalizer; decorrelates nearby seeds.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]; safe as a log argument.
  double uniform_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace qpt
