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

#include "qpt/process.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace qpt {

namespace {

const Matrix& pauli_1q(int which) {
  static const std::array<Matrix, 4> paulis = [] {
    std::array<Matrix, 4> p;
    for (auto& m : p) m = Matrix::Zero(2, 2);
    p[0](0, 0) = 1.0;
    p[0](1, 1) = 1.0;                      // I
    p[1](0, 1) = 1.0;
    p[1](1, 0) = 1.0;                      // X
    p[2](0, 1) = Complex(0.0, -1.0);
    p[2](1, 0) = Complex(0.0, 1.0);        // Y
    p[3](0, 0) = 1.0;
    p[3](1, 1) = -1.0;                     // Z
    return p;
  }();
  return paulis[static_cast<std::size_t>(which)];
}

// Expansion coefficients of M over the basis: c_m = Tr(A_m^dag M) / Tr(A_m^dag A_m).
Vector expansion_coefficients(const Matrix& m, const OperatorBasis& basis) {
  Vector c(basis.size());
  for (Eigen::Index k = 0; k < basis.size(); ++k) {
    const Matrix& a = basis.element(k);
    c(k) = (a.adjoint() * m).trace() / (a.adjoint() * a).trace();
  }
  return c;
}

void require_pauli(const OperatorBasis& basis, const char* what) {
  if (basis.name().rfind("pauli", 0) != 0)
    throw std::invalid_argument(std::string(what) + ": requires the Pauli basis");
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

OperatorBasis::OperatorBasis(std::string name, std::vector<Matrix> elements)
    : name_(std::move(name)), elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("OperatorBasis: no elements");
  dim_ = elements_[0].rows();
  if (static_cast<Eigen::Index>(elements_.size()) != dim_ * dim_)
    throw std::invalid_argument("OperatorBasis: need d^2 elements of size d x d");
  for (const auto& e : elements_)
    if (e.rows() != dim_ || e.cols() != dim_)
      throw std::invalid_argument("OperatorBasis: elements differ in shape");
  // Linear independence: the Gram matrix of HS inner products must be nonsingular.
  const Eigen::Index n = size();
  Matrix gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      gram(j, k) = (elements_[static_cast<std::size_t>(j)].adjoint() *
                    elements_[static_cast<std::size_t>(k)])
                       .trace();
  Eigen::FullPivLU<Matrix> lu(gram);
  if (!lu.isInvertible())
    throw std::invalid_argument("OperatorBasis: elements are not linearly independent");
}

BasisPtr pauli_basis(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("pauli_basis: n_qubits must be >= 1");
  static std::mutex mutex;
  static std::map<int, BasisPtr> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n_qubits);
  if (it != cache.end()) return it->second;

  std::vector<Matrix> elements;
  const std::size_t count = std::size_t{1} << (2 * n_qubits);
  elements.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    // Base-4 digits of m, most significant digit = leftmost tensor factor.
    Matrix acc = Matrix::Identity(1, 1);
    for (int q = n_qubits - 1; q >= 0; --q) {
      const int digit = static_cast<int>((m >> (2 * q)) & 3);
      acc = kron(acc, pauli_1q(digit));
    }
    elements.push_back(std::move(acc));
  }
  auto basis = std::make_shared<const OperatorBasis>(
      "pauli-" + std::to_string(n_qubits) + "q", std::move(elements));
  cache.emplace(n_qubits, basis);
  return basis;
}

UnitaryGate::UnitaryGate(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("UnitaryGate: matrix is not square");
  const Matrix defect = matrix_.adjoint() * matrix_ - Matrix::Identity(matrix_.rows(), matrix_.cols());
  if (defect.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("UnitaryGate: matrix is not unitary");
}

UnitaryGate cnot_gate() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u(2, 3) = 1.0;
  u(3, 2) = 1.0;
  return UnitaryGate(std::move(u));
}

UnitaryGate identity_gate(Eigen::Index dim) { return UnitaryGate(Matrix::Identity(dim, dim)); }

ProcessMatrix::ProcessMatrix(Matrix chi, BasisPtr basis, bool unconstrained)
    : chi_(std::move(chi)), basis_(std::move(basis)), unconstrained_(unconstrained) {
  if (!basis_) throw std::invalid_argument("ProcessMatrix: null basis");
  if (chi_.rows() != basis_->size() || chi_.cols() != basis_->size())
    throw std::invalid_argument("ProcessMatrix: chi must be d^2 x d^2");
  if ((chi_ - chi_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("ProcessMatrix: chi is not Hermitian");
}

ProcessMatrix ProcessMatrix::physical(Matrix chi, BasisPtr basis, double tp_tolerance) {
  ProcessMatrix out(std::move(chi), std::move(basis), false);
  if (cp_defect(out.chi_) > 1e-8)
    throw std::invalid_argument("ProcessMatrix: chi is not completely positive");
  if (tp_defect(out.chi_, *out.basis_) > tp_tolerance)
    throw std::invalid_argument("ProcessMatrix: chi is not trace preserving");
  return out;
}

ProcessMatrix ProcessMatrix::unconstrained(Matrix chi, BasisPtr basis) {
  return ProcessMatrix(std::move(chi), std::move(basis), true);
}

ProcessMatrix chi_from_unitary(const UnitaryGate& u, BasisPtr basis) {
  if (u.dim() != basis->dim())
    throw std::invalid_argument("chi_from_unitary: gate and basis dimensions differ");
  const Vector c = expansion_coefficients(u.matrix(), *basis);
  Matrix chi = c * c.adjoint();
  // Rank-1 projector; exactly TP, so the default tolerance applies.
  return ProcessMatrix::physical(std::move(chi), std::move(basis));
}

ProcessMatrix chi_from_unitary(const UnitaryGate& u) {
  int n = 0;
  while ((Eigen::Index{1} << n) < u.dim()) ++n;
  if ((Eigen::Index{1} << n) != u.dim())
    throw std::invalid_argument("chi_from_unitary: dimension is not a power of two");
  return chi_from_unitary(u, pauli_basis(n));
}

Matrix apply_process_matrix(const Matrix& chi, const OperatorBasis& basis, const Matrix& rho) {
  const Eigen::Index n = basis.size();
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (Eigen::Index m = 0; m < n; ++m) {
    const Matrix left = basis.element(m) * rho;
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex w = chi(m, k);
      if (w != Complex(0.0)) out.noalias() += w * left * basis.element(k).adjoint();
    }
  }
  return out;
}

DensityMatrix apply_process(const ProcessMatrix& chi, const DensityMatrix& rho,
                            bool allow_unconstrained) {
  if (chi.dim() != rho.dim())
    throw std::invalid_argument("apply_process: dimension mismatch");
  if (chi.is_unconstrained() && !allow_unconstrained)
    throw std::invalid_argument(
        "apply_process: chi is unconstrained; pass allow_unconstrained to apply anyway");
  return DensityMatrix::unchecked(apply_process_matrix(chi.chi(), chi.basis(), rho.entries()));
}

double tp_defect(const Matrix& chi, const OperatorBasis& basis) {
  const Eigen::Index n = basis.size();
  Matrix s = Matrix::Zero(basis.dim(), basis.dim());
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex w = chi(m, k);
      if (w != Complex(0.0)) s.noalias() += w * (basis.element(k).adjoint() * basis.element(m));
    }
  s -= Matrix::Identity(basis.dim(), basis.dim());
  return s.cwiseAbs().maxCoeff();
}

double tp_defect(const ProcessMatrix& chi) { return tp_defect(chi.chi(), chi.basis()); }

double cp_defect(const Matrix& chi) {
  if ((chi - chi.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("cp_defect: chi is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(chi, Eigen::EigenvaluesOnly);
  return std::max(0.0, -es.eigenvalues().minCoeff());
}

double cp_defect(const ProcessMatrix& chi) { return cp_defect(chi.chi()); }

namespace {

// Basis-change coefficient matrix between the Pauli basis and {U A_m}:
// C_km = Tr((U A_k)^dag A_m) / d expresses A_m = sum_k C_km (U A_k).
Matrix cnot_basis_change_matrix(const OperatorBasis& pauli, bool to_cnot) {
  const Matrix u = cnot_gate().matrix();
  const Eigen::Index n = pauli.size();
  const double d = static_cast<double>(pauli.dim());
  Matrix c(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index m = 0; m < n; ++m) {
      if (to_cnot)
        c(k, m) = ((u * pauli.element(k)).adjoint() * pauli.element(m)).trace() / d;
      else
        c(k, m) = (pauli.element(k).adjoint() * (u * pauli.element(m))).trace() / d;
    }
  return c;
}

BasisPtr cnot_basis() {
  static std::mutex mutex;
  static BasisPtr cached;
  std::lock_guard<std::mutex> lock(mutex);
  if (!cached) {
    const BasisPtr pauli = pauli_basis(2);
    const Matrix u = cnot_gate().matrix();
    std::vector<Matrix> elements;
    elements.reserve(16);
    for (const auto& a : pauli->elements()) elements.push_back(u * a);
    cached = std::make_shared<const OperatorBasis>("cnot-2q", std::move(elements));
  }
  return cached;
}

}  // namespace

ProcessMatrix to_cnot_basis(const ProcessMatrix& chi) {
  if (chi.basis().name() != "pauli-2q")
    throw std::invalid_argument("to_cnot_basis: chi must be in the pauli-2q basis");
  const Matrix c = cnot_basis_change_matrix(chi.basis(), true);
  Matrix converted = c * chi.chi() * c.adjoint();
  converted = 0.5 * (converted + converted.adjoint());
  if (chi.is_unconstrained()) return ProcessMatrix::unconstrained(std::move(converted), cnot_basis());
  // The map itself is unchanged, only its representation; skip the TP
  // re-check, which is basis-dependent in cost, not in truth.
  return ProcessMatrix::physical(std::move(converted), cnot_basis(),
                                 std::numeric_limits<double>::infinity());
}

ProcessMatrix from_cnot_basis(const ProcessMatrix& chi) {
  if (chi.basis().name() != "cnot-2q")
    throw std::invalid_argument("from_cnot_basis: chi must be in the cnot-2q basis");
  const BasisPtr pauli = pauli_basis(2);
  const Matrix c = cnot_basis_change_matrix(*pauli, false);
  Matrix converted = c * chi.chi() * c.adjoint();
  converted = 0.5 * (converted + converted.adjoint());
  if (chi.is_unconstrained()) return ProcessMatrix::unconstrained(std::move(converted), pauli);
  return ProcessMatrix::physical(std::move(converted), pauli,
                                 std::numeric_limits<double>::infinity());
}

Matrix chi_to_superop(const Matrix& chi, const OperatorBasis& basis) {
  const Eigen::Index n = basis.size();
  const Eigen::Index d2 = basis.dim() * basis.dim();
  Matrix s = Matrix::Zero(d2, d2);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex w = chi(m, k);
      if (w != Complex(0.0)) s.noalias() += w * kron(basis.element(k).conjugate(), basis.element(m));
    }
  return s;
}

Matrix chi_to_superop(const ProcessMatrix& chi) { return chi_to_superop(chi.chi(), chi.basis()); }

Matrix superop_to_chi(const Matrix& superop, const OperatorBasis& basis) {
  require_pauli(basis, "superop_to_chi");
  const Eigen::Index n = basis.size();
  const double d2 = static_cast<double>(basis.dim() * basis.dim());
  Matrix chi(n, n);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k)
      chi(m, k) =
          (kron(basis.element(k).conjugate(), basis.element(m)).adjoint() * superop).trace() / d2;
  return chi;
}

ProcessMatrix random_cptp_chi(Rng& rng, int kraus_rank) {
  if (kraus_rank < 1) throw std::invalid_argument("random_cptp_chi: kraus_rank must be >= 1");
  const BasisPtr basis = pauli_basis(2);
  const Eigen::Index d = 4;
  const Matrix u = haar_random_unitary(d * kraus_rank, rng);
  Matrix chi = Matrix::Zero(16, 16);
  for (int i = 0; i < kraus_rank; ++i) {
    // Kraus operator <i|U|0>_env: rows are the i-th environment block,
    // columns the 0-th.
    const Matrix kraus = u.block(i * d, 0, d, d);
    const Vector c = expansion_coefficients(kraus, *basis);
    chi.noalias() += c * c.adjoint();
  }
  chi = 0.5 * (chi + chi.adjoint());
  return ProcessMatrix::physical(std::move(chi), basis);
}

ProcessMatrix random_mixed_unitary_chi(Rng& rng, int n_unitaries) {
  if (n_unitaries < 1) throw std::invalid_argument("random_mixed_unitary_chi: need >= 1 unitaries");
  const BasisPtr basis = pauli_basis(2);
  // Dirichlet(1,...,1) weights from normalized exponentials.
  Eigen::VectorXd w(n_unitaries);
  for (int i = 0; i < n_unitaries; ++i) w(i) = -std::log(1.0 - rng.uniform());
  w /= w.sum();
  Matrix chi = Matrix::Zero(16, 16);
  for (int i = 0; i < n_unitaries; ++i) {
    const Vector c = expansion_coefficients(haar_random_unitary(4, rng), *basis);
    chi.noalias() += w(i) * (c * c.adjoint());
  }
  chi = 0.5 * (chi + chi.adjoint());
  return ProcessMatrix::physical(std::move(chi), basis);
}

}  // namespace qpt
