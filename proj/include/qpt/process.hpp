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

#include <memory>
#include <string>
#include <vector>

#include "qpt/states.hpp"

namespace qpt {

/// Kronecker product, blocks a(i,j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

/**
 * A basis {A_m} for operators on a d-dimensional space, d^2 elements.
 * Elements must be linearly independent (checked through the Gram matrix
 * of Hilbert-Schmidt inner products).
 *
 * The default basis for n qubits is the 4^n unnormalized tensor products
 * of {I, X, Y, Z} in lexicographic order (II, IX, ..., ZZ for n = 2,
 * control qubit on the left), so element 0 is the identity and
 * Tr(A_j^dag A_k) = d delta_jk.
 */
class OperatorBasis {
 public:
  OperatorBasis(std::string name, std::vector<Matrix> elements);

  const std::string& name() const { return name_; }
  Eigen::Index dim() const { return dim_; }                        // d
  Eigen::Index size() const { return static_cast<Eigen::Index>(elements_.size()); }  // d^2
  const Matrix& element(Eigen::Index m) const { return elements_[static_cast<std::size_t>(m)]; }
  const std::vector<Matrix>& elements() const { return elements_; }

 private:
  std::string name_;
  std::vector<Matrix> elements_;
  Eigen::Index dim_;
};

using BasisPtr = std::shared_ptr<const OperatorBasis>;

/// The tensor-product Pauli basis on n qubits ("pauli-2q" for n = 2). Cached.
BasisPtr pauli_basis(int n_qubits);

/// Unitary d x d matrix, U^dag U = I within 1e-10.
class UnitaryGate {
 public:
  explicit UnitaryGate(Matrix matrix);
  const Matrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  Matrix matrix_;
};

UnitaryGate cnot_gate();
UnitaryGate identity_gate(Eigen::Index dim = 4);

/**
 * Process matrix chi over an operator basis: E(rho) = sum_mn chi_mn A_m rho A_n^dag.
 *
 * Always Hermitian within 1e-10. Matrices built by `physical` additionally
 * satisfy complete positivity (eigenvalues >= -1e-8) and trace preservation
 * up to `tp_tolerance` (1e-6 default; reconstruction passes its own looser
 * fit threshold, and parametrized chi(t) factories skip the TP check since
 * trace preservation there is the fit's job, not the type's). Matrices from
 * linear inversion are flagged `unconstrained` and exempt from both.
 */
class ProcessMatrix {
 public:
  static ProcessMatrix physical(Matrix chi, BasisPtr basis, double tp_tolerance = 1e-6);
  static ProcessMatrix unconstrained(Matrix chi, BasisPtr basis);

  const Matrix& chi() const { return chi_; }
  const OperatorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  Eigen::Index dim() const { return basis_->dim(); }
  bool is_unconstrained() const { return unconstrained_; }

 private:
  ProcessMatrix(Matrix chi, BasisPtr basis, bool unconstrained);

  Matrix chi_;
  BasisPtr basis_;
  bool unconstrained_;
};

/**
 * chi of the unitary channel rho -> U rho U^dag: the rank-1 outer product
 * of the expansion coefficients u_m = Tr(A_m^dag U) / Tr(A_m^dag A_m).
 * In the default Pauli basis Tr(chi) = Tr(chi^2) = 1.
 */
ProcessMatrix chi_from_unitary(const UnitaryGate& u, BasisPtr basis);
ProcessMatrix chi_from_unitary(const UnitaryGate& u);  // pauli basis of matching size

/**
 * E(rho) = sum_mn chi_mn A_m rho A_n^dag. Unconstrained chi requires the
 * explicit opt-in; the result then (and in general) carries no validation:
 * its trace is within ~tp_defect(chi) of 1, exactly 1e-8-close for TP chi.
 */
DensityMatrix apply_process(const ProcessMatrix& chi, const DensityMatrix& rho,
                            bool allow_unconstrained = false);

/// Raw matrix form of apply_process (no flag or validity handling).
Matrix apply_process_matrix(const Matrix& chi, const OperatorBasis& basis, const Matrix& rho);

/// Max-absolute-element norm of (sum_mn chi_mn A_n^dag A_m - I); 0 iff trace preserving.
double tp_defect(const ProcessMatrix& chi);
double tp_defect(const Matrix& chi, const OperatorBasis& basis);

/// max(0, -lambda_min(chi)); 0 iff chi is completely positive.
double cp_defect(const ProcessMatrix& chi);
double cp_defect(const Matrix& chi);

/**
 * Re-express a two-qubit Pauli-basis chi in the basis {U_CNOT A_m}. The 00
 * element of the result equals Tr(chi_CNOT chi), the process fidelity with
 * the ideal CNOT.
 */
ProcessMatrix to_cnot_basis(const ProcessMatrix& chi);

/// Inverse of to_cnot_basis.
ProcessMatrix from_cnot_basis(const ProcessMatrix& chi);

/// Column-major superoperator S with S vec(rho) = vec(E(rho)).
Matrix chi_to_superop(const ProcessMatrix& chi);
Matrix chi_to_superop(const Matrix& chi, const OperatorBasis& basis);

/// Inverse of chi_to_superop; requires the (orthogonal) Pauli basis.
Matrix superop_to_chi(const Matrix& superop, const OperatorBasis& basis);

/**
 * Random CPTP process matrix: Haar unitary on system x environment,
 * environment traced out (Stinespring dilation with `kraus_rank`
 * environment levels). Generally not unital.
 */
ProcessMatrix random_cptp_chi(Rng& rng, int kraus_rank = 4);

/**
 * Random mixture of Haar unitaries with Dirichlet weights. Unital and CPTP;
 * within this family the average-output-purity identity
 * (d Tr(chi^2) + 1)/(d + 1) is exact.
 */
ProcessMatrix random_mixed_unitary_chi(Rng& rng, int n_unitaries = 4);

}  // namespace qpt
