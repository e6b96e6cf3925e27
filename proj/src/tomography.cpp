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

#include "qpt/tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace qpt {

namespace {

constexpr char kAlphabet[] = {'H', 'V', 'D', 'R'};

int alphabet_index(char label) {
  switch (label) {
    case 'H': return 0;
    case 'V': return 1;
    case 'D': return 2;
    case 'R': return 3;
    default: return -1;
  }
}

const std::vector<std::string>& two_qubit_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    out.reserve(16);
    for (char a : kAlphabet)
      for (char b : kAlphabet) out.push_back(std::string{a, b});
    return out;
  }();
  return labels;
}

}  // namespace

PureState single_qubit_state(char label) {
  Vector v(2);
  const double s = 1.0 / std::sqrt(2.0);
  switch (label) {
    case 'H': v << 1.0, 0.0; break;
    case 'V': v << 0.0, 1.0; break;
    case 'D': v << s, s; break;
    case 'A': v << s, -s; break;
    case 'R': v << s, Complex(0.0, -s); break;
    default:
      throw std::invalid_argument(std::string("single_qubit_state: unknown label '") + label + "'");
  }
  return PureState(std::move(v));
}

PureState two_qubit_product_state(std::string_view label) {
  if (label.size() != 2)
    throw std::invalid_argument("two_qubit_product_state: label must have two characters");
  const Vector a = single_qubit_state(label[0]).amplitudes();
  const Vector b = single_qubit_state(label[1]).amplitudes();
  Vector v(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) v(2 * i + j) = a(i) * b(j);
  return PureState(std::move(v));
}

const std::vector<Setting>& standard_settings() {
  static const std::vector<Setting> settings = [] {
    std::vector<Setting> out;
    out.reserve(256);
    for (const auto& in : two_qubit_labels())
      for (const auto& an : two_qubit_labels())
        out.push_back(Setting{in, an, two_qubit_product_state(in), two_qubit_product_state(an)});
    return out;
  }();
  return settings;
}

std::size_t setting_index(std::string_view input, std::string_view analyzer) {
  if (input.size() != 2 || analyzer.size() != 2)
    throw std::invalid_argument("setting_index: labels must have two characters");
  const int i0 = alphabet_index(input[0]), i1 = alphabet_index(input[1]);
  const int a0 = alphabet_index(analyzer[0]), a1 = alphabet_index(analyzer[1]);
  if (i0 < 0 || i1 < 0 || a0 < 0 || a1 < 0)
    throw std::invalid_argument("setting_index: labels must be drawn from {H,V,D,R}");
  return static_cast<std::size_t>((i0 * 4 + i1) * 16 + (a0 * 4 + a1));
}

CountSet::CountSet(std::vector<CountRecord> records, double total_pairs,
                   std::optional<std::uint64_t> seed, std::optional<NoiseSpec> noise)
    : total_pairs_(total_pairs), seed_(seed), noise_(noise) {
  if (!(total_pairs > 0.0)) throw std::invalid_argument("CountSet: total_pairs must be positive");
  if (records.size() != 256)
    throw std::invalid_argument("CountSet: expected exactly 256 records, got " +
                                std::to_string(records.size()));
  records_.resize(256);
  std::vector<bool> seen(256, false);
  for (auto& r : records) {
    const std::size_t idx = setting_index(r.input_label, r.analyzer_label);
    if (seen[idx])
      throw std::invalid_argument("CountSet: duplicate setting (" + r.input_label + ", " +
                                  r.analyzer_label + ")");
    if (r.counts < 0)
      throw std::invalid_argument("CountSet: negative counts at (" + r.input_label + ", " +
                                  r.analyzer_label + ")");
    seen[idx] = true;
    records_[idx] = std::move(r);
  }
}

std::int64_t CountSet::counts_at(std::string_view input, std::string_view analyzer) const {
  return records_[setting_index(input, analyzer)].counts;
}

double CountSet::frequency(std::size_t index) const {
  return static_cast<double>(records_[index].counts) / total_pairs_;
}

double predict_probability(const ProcessMatrix& chi, const Setting& s, bool allow_unconstrained) {
  if (chi.is_unconstrained() && !allow_unconstrained)
    throw std::invalid_argument(
        "predict_probability: chi is unconstrained; pass allow_unconstrained to evaluate anyway");
  if (chi.dim() != s.input_state.dim())
    throw std::invalid_argument("predict_probability: dimension mismatch");
  const OperatorBasis& basis = chi.basis();
  // v_m = <phi| A_m^dag |psi>; p = v^dag chi v.
  Vector v(basis.size());
  for (Eigen::Index m = 0; m < basis.size(); ++m)
    v(m) = s.input_state.amplitudes().adjoint() *
           (basis.element(m).adjoint() * s.analyzer_state.amplitudes());
  const Complex p = v.adjoint() * chi.chi() * v;
  return std::clamp(p.real(), 0.0, 1.0);
}

ProcessMatrix apply_noise(const ProcessMatrix& chi, const NoiseSpec& noise) {
  if (chi.is_unconstrained())
    throw std::invalid_argument("apply_noise: chi must be physical");
  if (chi.basis().name() != "pauli-2q")
    throw std::invalid_argument("apply_noise: chi must be in the pauli-2q basis");
  const double p = noise.depolarizing;
  const double q = noise.dephasing;
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("apply_noise: depolarizing strength outside [0, 1]");
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("apply_noise: dephasing strength outside [0, 1]");

  Matrix dephased = chi.chi();
  if (q > 0.0) {
    // Phase damping Kraus pair per output qubit: E0 = diag(1, sqrt(1-q)),
    // E1 = diag(0, sqrt(q)); composed channel via superoperators.
    Matrix e0 = Matrix::Zero(2, 2), e1 = Matrix::Zero(2, 2);
    e0(0, 0) = 1.0;
    e0(1, 1) = std::sqrt(1.0 - q);
    e1(1, 1) = std::sqrt(q);
    Matrix deph_super = Matrix::Zero(16, 16);
    const std::array<Matrix, 2> ks = {e0, e1};
    for (const auto& a : ks)
      for (const auto& b : ks) {
        const Matrix k2 = kron(a, b);
        deph_super.noalias() += kron(k2.conjugate(), k2);
      }
    dephased = superop_to_chi(deph_super * chi_to_superop(chi), chi.basis());
    dephased = 0.5 * (dephased + dephased.adjoint());
  }
  Matrix out = (1.0 - p) * dephased;
  out.noalias() += (p / 16.0) * Matrix::Identity(16, 16);
  return ProcessMatrix::physical(std::move(out), chi.basis_ptr());
}

CountSet simulate_counts(const ProcessMatrix& chi, double total_pairs, const NoiseSpec& noise,
                         const Rng& rng, bool allow_unconstrained) {
  if (!(total_pairs > 0.0))
    throw std::invalid_argument("simulate_counts: total_pairs must be positive");
  if (chi.is_unconstrained() && !allow_unconstrained)
    throw std::invalid_argument(
        "simulate_counts: chi is unconstrained; pass allow_unconstrained to simulate anyway");
  const bool skip_analog = chi.is_unconstrained();
  if (skip_analog && (noise.depolarizing != 0.0 || noise.dephasing != 0.0))
    throw std::invalid_argument(
        "simulate_counts: analog noise requires a physical chi");
  const ProcessMatrix noisy = skip_analog ? chi : apply_noise(chi, noise);
  const auto& settings = standard_settings();
  std::vector<CountRecord> records;
  records.reserve(settings.size());
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const Setting& s = settings[i];
    const double mu = total_pairs * predict_probability(noisy, s, allow_unconstrained);
    std::int64_t c = 0;
    if (noise.count_noise == CountNoise::poisson) {
      Rng sub = rng.fork(i);
      c = sub.poisson(mu);
    } else {
      c = std::llround(mu);
    }
    records.push_back(CountRecord{s.input_label, s.analyzer_label, c});
  }
  return CountSet(std::move(records), total_pairs, rng.seed(), noise);
}

}  // namespace qpt
