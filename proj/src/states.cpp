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

#include "qpt/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpt {

namespace {

int qubit_count_of_dim(Eigen::Index dim, const char* what) {
  if (dim < 2) throw std::invalid_argument(std::string(what) + ": dimension must be at least 2");
  if ((dim & (dim - 1)) != 0)
    throw std::invalid_argument(std::string(what) + ": dimension is not a power of two");
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

// Hermitian square root via eigendecomposition, clamping eigen-solver
// noise below zero.
Matrix hermitian_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

PureState::PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
  n_qubits_ = qubit_count_of_dim(amps_.size(), "PureState");
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::invalid_argument("PureState: amplitudes are not normalized");
}

PureState PureState::computational_basis(int n_qubits, Eigen::Index index) {
  if (n_qubits < 1) throw std::invalid_argument("computational_basis: n_qubits must be >= 1");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (index < 0 || index >= dim)
    throw std::invalid_argument("computational_basis: index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(Matrix entries, unchecked_tag) : entries_(std::move(entries)) {
  n_qubits_ = qubit_count_of_dim(entries_.rows(), "DensityMatrix");
}

DensityMatrix::DensityMatrix(Matrix entries) : DensityMatrix(std::move(entries), unchecked_tag{}) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("DensityMatrix: matrix is not square");
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(entries_.trace() - Complex(1.0)) > 1e-10)
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8)
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
}

DensityMatrix DensityMatrix::unchecked(Matrix entries) {
  return DensityMatrix(std::move(entries), unchecked_tag{});
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector(), unchecked_tag{});
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim), unchecked_tag{});
}

PureState haar_random_pure(int n_qubits, Rng& rng) {
  if (n_qubits < 1) throw std::invalid_argument("haar_random_pure: n_qubits must be >= 1");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  v /= v.norm();
  return PureState(std::move(v));
}

Matrix haar_random_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("haar_random_unitary: dim must be >= 1");
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is exactly Haar.
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex rii = r(i, i);
    q.col(i) *= (std::abs(rii) > 0.0) ? rii / std::abs(rii) : Complex(1.0);
  }
  return q;
}

double state_fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("state_fidelity: dimension mismatch");
  const Matrix sa = hermitian_sqrt(a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sa * b * sa, Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double state_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  return state_fidelity(a.entries(), b.entries());
}

double pure_state_fidelity(const PureState& psi, const Matrix& rho) {
  if (rho.rows() != psi.dim())
    throw std::invalid_argument("pure_state_fidelity: dimension mismatch");
  const Complex val = psi.amplitudes().adjoint() * rho * psi.amplitudes();
  return std::clamp(val.real(), 0.0, 1.0);
}

double purity(const Matrix& rho) { return rho.squaredNorm(); }
double purity(const DensityMatrix& rho) { return purity(rho.entries()); }

double linear_entropy_normalized(const Matrix& rho) {
  const double d = static_cast<double>(rho.rows());
  return d / (d - 1.0) * (1.0 - purity(rho));
}
double linear_entropy_normalized(const DensityMatrix& rho) {
  return linear_entropy_normalized(rho.entries());
}

double tangle(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("tangle: requires a two-qubit (4x4) density matrix");
  Matrix yy(4, 4);
  yy.setZero();
  // Y (x) Y in the computational basis.
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Matrix> es(r, false);
  Eigen::Vector4d lams;
  for (int i = 0; i < 4; ++i) {
    double ev = es.eigenvalues()(i).real();
    // Eigen-solver noise on near-singular products; genuine eigenvalues
    // of rho rho~ are nonnegative.
    if (ev < 0.0) ev = 0.0;
    lams(i) = std::sqrt(ev);
  }
  std::sort(lams.data(), lams.data() + 4, std::greater<double>());
  const double c = std::max(0.0, lams(0) - lams(1) - lams(2) - lams(3));
  return std::clamp(c * c, 0.0, 1.0);
}

double tangle(const DensityMatrix& rho) { return tangle(rho.entries()); }

}  // namespace qpt
