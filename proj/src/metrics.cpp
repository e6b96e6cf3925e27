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

#include "qpt/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qpt {

namespace {

void require_rank1_ideal(const ProcessMatrix& ideal, const char* what) {
  const double tr = ideal.chi().trace().real();
  const double tr2 = ideal.chi().squaredNorm();
  if (std::abs(tr - 1.0) > 1e-6 || std::abs(tr2 - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(what) +
                                ": ideal chi must be a rank-1, trace-1 unitary process");
}

// Unvec (column-major) of S * vec(rho).
Matrix superop_apply(const Matrix& superop, const Matrix& rho) {
  const Eigen::Index d = rho.rows();
  const Vector out = superop * rho.reshaped();
  return out.reshaped(d, d);
}

void parallel_for(int n, int threads, const std::function<void(int, int)>& chunk) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2 * threads) {
    chunk(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const int per = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const int begin = w * per;
    const int end = std::min(n, begin + per);
    if (begin >= end) break;
    pool.emplace_back(chunk, begin, end);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

double process_fidelity(const ProcessMatrix& ideal, const ProcessMatrix& actual) {
  if (ideal.basis().name() != actual.basis().name() || ideal.dim() != actual.dim())
    throw std::invalid_argument("process_fidelity: basis mismatch");
  require_rank1_ideal(ideal, "process_fidelity");
  const Complex tr = (ideal.chi() * actual.chi()).trace();
  return std::clamp(tr.real(), 0.0, 1.0);
}

double average_gate_fidelity(double process_fid, int dim) {
  if (process_fid < -1e-12 || process_fid > 1.0 + 1e-12)
    throw std::invalid_argument("average_gate_fidelity: F_P outside [0, 1]");
  if (dim < 2) throw std::invalid_argument("average_gate_fidelity: dim must be >= 2");
  return (dim * process_fid + 1.0) / (dim + 1.0);
}

CpDistanceResult cp_distance(double process_fid) {
  if (process_fid < -1e-12 || process_fid > 1.0 + 1e-12)
    throw std::invalid_argument("cp_distance: F_P outside [0, 1]");
  const double bound = std::max(0.0, 1.0 - process_fid);
  return {std::sqrt(bound), bound};
}

double average_output_purity(const ProcessMatrix& chi) {
  const double d = static_cast<double>(chi.dim());
  return (d * chi.chi().squaredNorm() + 1.0) / (d + 1.0);
}

namespace {

// Single-qubit Pauli expansions over projectors of the {H,V,D,R} alphabet:
// I = H + V, X = 2D - H - V, Y = H + V - 2R, Z = H - V.
constexpr double kPauliWeights[4][4] = {
    {1.0, 1.0, 0.0, 0.0},    // I
    {-1.0, -1.0, 2.0, 0.0},  // X
    {1.0, 1.0, 0.0, -2.0},   // Y
    {1.0, -1.0, 0.0, 0.0},   // Z
};
constexpr char kAlphabet[4] = {'H', 'V', 'D', 'R'};

}  // namespace

DirectFidelityEstimate direct_process_fidelity(const CountSet& data, const UnitaryGate& ideal) {
  if (ideal.dim() != 4)
    throw std::invalid_argument("direct_process_fidelity: two-qubit gates only");
  const BasisPtr basis = pauli_basis(2);
  const Matrix& u = ideal.matrix();

  // Conjugation action on the Pauli basis; the ideal must be Clifford so
  // that U A_k U^dag = s_k A_sigma(k) with s_k = +/-1.
  std::array<int, 16> sigma{};
  std::array<double, 16> sign{};
  for (int k = 0; k < 16; ++k) {
    const Matrix conj = u * basis->element(k) * u.adjoint();
    int found = -1;
    double s = 0.0;
    for (int m = 0; m < 16; ++m) {
      const Complex c = (basis->element(m).adjoint() * conj).trace() / 4.0;
      if (std::abs(c) > 1e-9) {
        if (std::abs(std::abs(c) - 1.0) > 1e-9 || std::abs(c.imag()) > 1e-9 || found >= 0) {
          throw std::invalid_argument(
              "direct_process_fidelity: ideal gate is not Clifford (Pauli conjugation is not a "
              "signed permutation)");
        }
        found = m;
        s = c.real();
      }
    }
    sigma[static_cast<std::size_t>(k)] = found;
    sign[static_cast<std::size_t>(k)] = s;
  }

  // Affine weights per setting: expand input Pauli A_k and analyzer Pauli
  // A_sigma(k) over product eigenstate projectors.
  std::array<double, 256> weight{};
  for (int k = 0; k < 16; ++k) {
    const int ki = k / 4, kj = k % 4;
    const int si = sigma[static_cast<std::size_t>(k)] / 4;
    const int sj = sigma[static_cast<std::size_t>(k)] % 4;
    for (int a1 = 0; a1 < 4; ++a1) {
      const double w1 = kPauliWeights[ki][a1];
      if (w1 == 0.0) continue;
      for (int a2 = 0; a2 < 4; ++a2) {
        const double w2 = kPauliWeights[kj][a2];
        if (w2 == 0.0) continue;
        for (int b1 = 0; b1 < 4; ++b1) {
          const double v1 = kPauliWeights[si][b1];
          if (v1 == 0.0) continue;
          for (int b2 = 0; b2 < 4; ++b2) {
            const double v2 = kPauliWeights[sj][b2];
            if (v2 == 0.0) continue;
            const std::size_t idx =
                setting_index(std::string{kAlphabet[a1], kAlphabet[a2]},
                              std::string{kAlphabet[b1], kAlphabet[b2]});
            weight[idx] += sign[static_cast<std::size_t>(k)] * w1 * w2 * v1 * v2;
          }
        }
      }
    }
  }

  const double denom = 64.0;  // d^3 for the unnormalized Pauli basis
  double estimate = 0.0;
  double variance = 0.0;
  int used = 0;
  const double c_total = data.total_pairs();
  for (std::size_t idx = 0; idx < 256; ++idx) {
    if (weight[idx] == 0.0) continue;
    ++used;
    const double alpha = weight[idx] / denom;
    estimate += alpha * data.frequency(idx);
    variance += alpha * alpha * static_cast<double>(data.records()[idx].counts) / (c_total * c_total);
  }
  return {estimate, std::sqrt(variance), used};
}

namespace {

std::vector<PureState> augmented_inputs() {
  std::vector<PureState> states;
  states.reserve(20);
  for (char a : {'H', 'V', 'D', 'R'})
    for (char b : {'H', 'V', 'D', 'R'})
      states.push_back(two_qubit_product_state(std::string{a, b}));
  for (const char* label : {"DH", "DV", "AH", "AV"})
    states.push_back(two_qubit_product_state(label));
  return states;
}

}  // namespace

double entangling_capability(const ProcessMatrix& chi, int n_samples, const Rng& rng,
                             int threads, bool allow_unconstrained) {
  if (chi.is_unconstrained() && !allow_unconstrained)
    throw std::invalid_argument("entangling_capability: chi must be physical");
  if (n_samples < 1)
    throw std::invalid_argument("entangling_capability: n_samples must be >= 1");
  const Matrix superop = chi_to_superop(chi);

  const auto delta_tangle = [&](const PureState& psi) {
    const Matrix rho_in = psi.projector();
    const Matrix rho_out = superop_apply(superop, rho_in);
    return tangle(rho_out) - tangle(rho_in);
  };

  double best = -1.0;
  for (const auto& psi : augmented_inputs()) best = std::max(best, delta_tangle(psi));

  std::vector<double> per_sample(static_cast<std::size_t>(n_samples));
  parallel_for(n_samples, threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng sub = rng.fork(static_cast<std::uint64_t>(i));
      per_sample[static_cast<std::size_t>(i)] = delta_tangle(haar_random_pure(2, sub));
    }
  });
  for (double dt : per_sample) best = std::max(best, dt);
  return best;
}

ScatterTable scatter_sweep(const ProcessMatrix& chi, const UnitaryGate& ideal, int n_samples,
                           const Rng& rng, int threads, bool allow_unconstrained) {
  if (chi.is_unconstrained() && !allow_unconstrained)
    throw std::invalid_argument("scatter_sweep: chi must be physical");
  if (n_samples < 1) throw std::invalid_argument("scatter_sweep: n_samples must be >= 1");
  if (ideal.dim() != chi.dim())
    throw std::invalid_argument("scatter_sweep: dimension mismatch");
  const Matrix superop = chi_to_superop(chi);
  const Matrix& u = ideal.matrix();

  ScatterTable table;
  table.rows.resize(static_cast<std::size_t>(n_samples));
  parallel_for(n_samples, threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng sub = rng.fork(static_cast<std::uint64_t>(i));
      const PureState psi = haar_random_pure(2, sub);
      const Matrix rho_in = psi.projector();
      const Matrix rho_out = superop_apply(superop, rho_in);
      const Vector ideal_out = u * psi.amplitudes();
      const double in_tangle = tangle(rho_in);
      const double out_tangle = tangle(rho_out);
      const Complex fid = ideal_out.adjoint() * rho_out * ideal_out;
      table.rows[static_cast<std::size_t>(i)] = ScatterRow{
          in_tangle, out_tangle, out_tangle - in_tangle,
          std::clamp(fid.real(), 0.0, 1.0),
          std::clamp(linear_entropy_normalized(rho_out), 0.0, 1.0)};
    }
  });
  return table;
}

DensityMatrix predict_output(const ProcessMatrix& chi, const PureState& input,
                             bool allow_unconstrained) {
  return apply_process(chi, DensityMatrix::from_pure(input), allow_unconstrained);
}

MetricsReport compute_metrics(const ProcessMatrix& chi, const UnitaryGate& ideal,
                              int sweep_samples, std::uint64_t seed, int threads,
                              ScatterTable* scatter_out, bool allow_unconstrained) {
  const ProcessMatrix ideal_chi = chi_from_unitary(ideal, chi.basis_ptr());
  const double fp = process_fidelity(ideal_chi, chi);
  const CpDistanceResult cp = cp_distance(fp);
  const double avg_purity = average_output_purity(chi);
  const double d = static_cast<double>(chi.dim());

  const Rng rng(seed);
  ScatterTable table =
      scatter_sweep(chi, ideal, sweep_samples, rng.fork(1), threads, allow_unconstrained);
  double min_fid = 1.0;
  for (const auto& row : table.rows) min_fid = std::min(min_fid, row.fidelity);
  const double capability =
      entangling_capability(chi, sweep_samples, rng.fork(2), threads, allow_unconstrained);

  MetricsReport report{
      fp,
      average_gate_fidelity(fp, static_cast<int>(d)),
      cp.cp_distance,
      cp.error_prob_bound,
      avg_purity,
      d / (d - 1.0) * (1.0 - avg_purity),
      capability,
      min_fid,
      seed,
      sweep_samples};
  if (scatter_out) *scatter_out = std::move(table);
  return report;
}

}  // namespace qpt
