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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qpt/process.hpp"

namespace qpt {

/**
 * Polarization alphabet: H = |0>, V = |1>, D = (|0>+|1>)/sqrt(2),
 * R = (|0>-i|1>)/sqrt(2). 'A' = (|0>-|1>)/sqrt(2) is also understood for
 * state preparation, though it is not part of the tomographic alphabet.
 */
PureState single_qubit_state(char label);

/// Tensor product of single-qubit states, e.g. "DH"; left char = control qubit.
PureState two_qubit_product_state(std::string_view label);

/// One tomographic setting: separable input state and analyzer projector.
struct Setting {
  std::string input_label;
  std::string analyzer_label;
  PureState input_state;
  PureState analyzer_state;
};

/**
 * The 256 standard two-qubit settings: the Cartesian product of the 16
 * input labels {H,V,D,R}^2 with the same 16 analyzer labels, row-major
 * (input varies slowest). Cached.
 */
const std::vector<Setting>& standard_settings();

/// Index of (input, analyzer) in the standard order.
std::size_t setting_index(std::string_view input, std::string_view analyzer);

enum class CountNoise { none, poisson };

/// Depolarizing + per-output-qubit dephasing, plus the counting-noise mode.
struct NoiseSpec {
  double depolarizing = 0.0;  // p in [0, 1]
  double dephasing = 0.0;     // q in [0, 1]
  CountNoise count_noise = CountNoise::none;
};

struct CountRecord {
  std::string input_label;
  std::string analyzer_label;
  std::int64_t counts = 0;
};

/**
 * The 256 tomographic records (counts per setting) plus the total-pairs
 * constant C. Records are normalized to the standard setting order.
 */
class CountSet {
 public:
  CountSet(std::vector<CountRecord> records, double total_pairs,
           std::optional<std::uint64_t> seed = std::nullopt,
           std::optional<NoiseSpec> noise = std::nullopt);

  const std::vector<CountRecord>& records() const { return records_; }
  double total_pairs() const { return total_pairs_; }
  std::int64_t counts_at(std::string_view input, std::string_view analyzer) const;
  /// Measured frequency c_ab / C at the standard-order index.
  double frequency(std::size_t index) const;

  const std::optional<std::uint64_t>& seed() const { return seed_; }
  const std::optional<NoiseSpec>& noise() const { return noise_; }

 private:
  std::vector<CountRecord> records_;  // standard order
  double total_pairs_;
  std::optional<std::uint64_t> seed_;
  std::optional<NoiseSpec> noise_;
};

/**
 * <psi_b| E(|phi_a><phi_a|) |psi_b| for one setting; real within 1e-10 and
 * clamped to [0, 1]. Unconstrained chi needs the explicit opt-in.
 */
double predict_probability(const ProcessMatrix& chi, const Setting& s,
                           bool allow_unconstrained = false);

/**
 * (1-p) x (chi composed with strength-q phase damping on each output qubit)
 * + p x fully depolarizing. TP and CP for physical input.
 */
ProcessMatrix apply_noise(const ProcessMatrix& chi, const NoiseSpec& noise);

/**
 * Synthetic coincidence counts: mu_ab = C * p_ab(apply_noise(chi)), drawn
 * Poisson(mu) per setting (or rounded when count_noise = none). Each setting
 * uses the substream rng.fork(setting index), so the records are independent
 * of evaluation order. An unconstrained chi requires the opt-in and trivial
 * analog noise (p = q = 0); probabilities are clamped to [0, 1] as usual.
 */
CountSet simulate_counts(const ProcessMatrix& chi, double total_pairs, const NoiseSpec& noise,
                         const Rng& rng, bool allow_unconstrained = false);

}  // namespace qpt
