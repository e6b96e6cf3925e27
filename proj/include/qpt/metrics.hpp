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

#include "qpt/tomography.hpp"

namespace qpt {

/// Tr(ideal * actual) for a rank-1 (unitary) ideal chi; clamped to [0, 1].
double process_fidelity(const ProcessMatrix& ideal, const ProcessMatrix& actual);

/// (d F_P + 1) / (d + 1).
double average_gate_fidelity(double process_fid, int dim);

struct CpDistanceResult {
  double cp_distance;       // sqrt(1 - F_P); a metric on processes
  double error_prob_bound;  // 1 - F_P, upper bound on the average error probability
};
CpDistanceResult cp_distance(double process_fid);

/// (d Tr(chi^2) + 1) / (d + 1): the average output purity over Haar-uniform
/// pure inputs (exact for unital processes).
double average_output_purity(const ProcessMatrix& chi);

struct DirectFidelityEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int settings_used = 0;  // tomographic settings with nonzero weight
};

/**
 * Process fidelity with a Clifford ideal, computed directly from the counts
 * as an affine combination of measured probabilities: each term of
 * (1/d^3) sum_k s_k Tr[A_sigma(k) E(A_k)] is expanded over {H,V,D,R}
 * eigenstate decompositions of the input and analyzer Paulis. The standard
 * error propagates Poisson variance (var(c) = c) through the weights.
 */
DirectFidelityEstimate direct_process_fidelity(const CountSet& data, const UnitaryGate& ideal);

/**
 * Maximum increase in tangle over pure inputs: Haar samples (substream per
 * sample index) augmented with the 16 standard product inputs and
 * |+/-> (x) {|0>,|1>}, the known maximizer candidates for CNOT-like gates.
 */
double entangling_capability(const ProcessMatrix& chi, int n_samples, const Rng& rng,
                             int threads = 1, bool allow_unconstrained = false);

struct ScatterRow {
  double input_tangle;
  double output_tangle;
  double delta_tangle;
  double fidelity;       // output-state fidelity vs the ideal unitary output
  double entropy_added;  // normalized linear entropy of the output (inputs are pure)
};

struct ScatterTable {
  std::vector<ScatterRow> rows;  // in sample order for the given seed
};

/**
 * Monte-Carlo sweep over Haar-uniform pure inputs: per sample, the
 * chi-predicted output state's tangle change, fidelity with the ideal
 * output and entropy added. Row i uses substream rng.fork(i), so the table
 * is identical for any thread count.
 */
ScatterTable scatter_sweep(const ProcessMatrix& chi, const UnitaryGate& ideal, int n_samples,
                           const Rng& rng, int threads = 1, bool allow_unconstrained = false);

/// apply_process on the pure input's projector.
DensityMatrix predict_output(const ProcessMatrix& chi, const PureState& input,
                             bool allow_unconstrained = false);

struct MetricsReport {
  double process_fidelity;
  double average_gate_fidelity;
  double cp_distance;
  double error_prob_bound;
  double average_purity;
  double average_linear_entropy;
  double entangling_capability;
  double min_output_fidelity;
  std::uint64_t sweep_seed;
  int sweep_samples;
};

/// All gate-performance measures in one pass; optionally hands out the
/// scatter table used for min_output_fidelity.
MetricsReport compute_metrics(const ProcessMatrix& chi, const UnitaryGate& ideal,
                              int sweep_samples, std::uint64_t seed, int threads = 1,
                              ScatterTable* scatter_out = nullptr,
                              bool allow_unconstrained = false);

}  // namespace qpt
