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

#include <Eigen/Dense>
#include <complex>

#include "qpt/rng.hpp"

namespace qpt {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/**
 * Normalized n-qubit state vector. The amplitude vector must have
 * power-of-two length and unit Euclidean norm within 1e-12.
 */
class PureState {
 public:
  explicit PureState(Vector amplitudes);

  static PureState computational_basis(int n_qubits, Eigen::Index index);

  const Vector& amplitudes() const { return amps_; }
  Eigen::Index dim() const { return amps_.size(); }
  int n_qubits() const { return n_qubits_; }

  /// |psi><psi| projector.
  Matrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  Vector amps_;
  int n_qubits_;
};

/**
 * n-qubit density matrix. The checked constructor enforces Hermiticity
 * (max element deviation 1e-10), unit trace (1e-10) and positivity
 * (eigenvalues >= -1e-8). `unchecked` skips the eigen-solve and trace
 * test for internal hot paths whose outputs are valid by construction.
 */
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries);

  static DensityMatrix unchecked(Matrix entries);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n_qubits);

  const Matrix& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  int n_qubits() const { return n_qubits_; }

 private:
  struct unchecked_tag {};
  DensityMatrix(Matrix entries, unchecked_tag);

  Matrix entries_;
  int n_qubits_;
};

/// Haar-uniform pure state on n qubits (normalized complex Gaussian vector).
PureState haar_random_pure(int n_qubits, Rng& rng);

/// Haar-distributed unitary matrix (QR of a Ginibre matrix with the
/// R-diagonal phase correction).
Matrix haar_random_unitary(Eigen::Index dim, Rng& rng);

/// Uhlmann fidelity in the squared convention F = (Tr sqrt(sqrt(a) b sqrt(a)))^2,
/// so that pure-vs-pure fidelity equals |<psi|phi>|^2.
double state_fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// Same, on raw Hermitian PSD matrices (no invariant validation).
double state_fidelity(const Matrix& a, const Matrix& b);

/// <psi|rho|psi>; equals state_fidelity when the first argument is pure.
double pure_state_fidelity(const PureState& psi, const Matrix& rho);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);
double purity(const Matrix& rho);

/// (d/(d-1)) (1 - Tr(rho^2)): 0 for pure states, 1 for maximally mixed.
double linear_entropy_normalized(const DensityMatrix& rho);
double linear_entropy_normalized(const Matrix& rho);

/// Two-qubit tangle (squared Wootters concurrence), in [0, 1].
double tangle(const DensityMatrix& rho);
double tangle(const Matrix& rho);

}  // namespace qpt
