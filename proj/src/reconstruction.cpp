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

#include "qpt/reconstruction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace qpt {

namespace {

constexpr int kDim = 4;        // Hilbert-space dimension
constexpr int kBasisSize = 16; // d^2
constexpr int kSettings = 256;
constexpr int kParams = TVec::length;
constexpr int kResiduals = kSettings + 2 * kBasisSize;

// Everything about the standard settings + Pauli basis that the fit and the
// inversion reuse: the per-setting coefficient vectors v (p = v^dag chi v),
// the 256 x 256 design matrix with its factorization, and the constraint
// tensor K[k](m,n) = Tr(A_k^dag A_n^dag A_m) / d.
struct Design {
  Matrix v;  // 16 x 256, column a = v vector of setting a
  Matrix b;  // 256 x 256
  Eigen::PartialPivLU<Matrix> lu;
  double rcond = 0.0;
  std::array<Matrix, kBasisSize> k;
  std::array<std::pair<int, int>, (kParams - kBasisSize) / 2> pairs;
};

const Design& design() {
  static const Design d = [] {
    Design out;
    const BasisPtr basis = pauli_basis(2);
    const auto& settings = standard_settings();

    out.v.resize(kBasisSize, kSettings);
    for (int a = 0; a < kSettings; ++a) {
      const Setting& s = settings[static_cast<std::size_t>(a)];
      for (int m = 0; m < kBasisSize; ++m)
        out.v(m, a) = s.input_state.amplitudes().adjoint() *
                      (basis->element(m).adjoint() * s.analyzer_state.amplitudes());
    }

    out.b.resize(kSettings, kSettings);
    for (int a = 0; a < kSettings; ++a)
      for (int m = 0; m < kBasisSize; ++m)
        for (int n = 0; n < kBasisSize; ++n)
          out.b(a, m * kBasisSize + n) = std::conj(out.v(m, a)) * out.v(n, a);
    out.lu.compute(out.b);
    out.rcond = out.lu.rcond();

    for (int k = 0; k < kBasisSize; ++k) {
      out.k[static_cast<std::size_t>(k)].resize(kBasisSize, kBasisSize);
      for (int m = 0; m < kBasisSize; ++m)
        for (int n = 0; n < kBasisSize; ++n)
          out.k[static_cast<std::size_t>(k)](m, n) =
              (basis->element(k).adjoint() * basis->element(n).adjoint() * basis->element(m))
                  .trace() /
              static_cast<double>(kDim);
    }

    int idx = 0;
    for (int i = 1; i < kBasisSize; ++i)
      for (int j = 0; j < i; ++j) out.pairs[static_cast<std::size_t>(idx++)] = {i, j};
    return out;
  }();
  return d;
}

Matrix t_to_matrix(const Eigen::VectorXd& t) {
  const Design& d = design();
  Matrix m = Matrix::Zero(kBasisSize, kBasisSize);
  for (int i = 0; i < kBasisSize; ++i) m(i, i) = t(i);
  for (std::size_t k = 0; k < d.pairs.size(); ++k) {
    const auto [i, j] = d.pairs[k];
    m(i, j) = Complex(t(kBasisSize + 2 * static_cast<int>(k)),
                      t(kBasisSize + 2 * static_cast<int>(k) + 1));
  }
  return m;
}

Eigen::VectorXd matrix_to_t(const Matrix& m) {
  const Design& d = design();
  Eigen::VectorXd t(kParams);
  for (int i = 0; i < kBasisSize; ++i) t(i) = m(i, i).real();
  for (std::size_t k = 0; k < d.pairs.size(); ++k) {
    const auto [i, j] = d.pairs[k];
    t(kBasisSize + 2 * static_cast<int>(k)) = m(i, j).real();
    t(kBasisSize + 2 * static_cast<int>(k) + 1) = m(i, j).imag();
  }
  return t;
}

// Cholesky with clamped pivots: exact for PSD matrices of any rank.
Matrix clamped_cholesky(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j).real() - l.row(j).head(j).squaredNorm();
    l(j, j) = std::sqrt(std::max(pivot, 0.0));
    if (l(j, j).real() <= 1e-14) {
      l(j, j) = 0.0;
      continue;
    }
    for (Eigen::Index i = j + 1; i < n; ++i) {
      Complex acc = a(i, j);
      for (Eigen::Index r = 0; r < j; ++r) acc -= l(i, r) * std::conj(l(j, r));
      l(i, j) = acc / l(j, j).real();
    }
  }
  return l;
}

Eigen::VectorXd measured_frequencies(const CountSet& data) {
  Eigen::VectorXd p(kSettings);
  for (int a = 0; a < kSettings; ++a) p(a) = data.frequency(static_cast<std::size_t>(a));
  return p;
}

// Residuals r and (optionally) Jacobian J of the least-squares system whose
// squared norm is objective_f: 256 data rows sqrt(C)(phat - p), then re/im
// rows sqrt(lambda) g_k of the 16 TP constraint coefficients.
struct FitWorkspace {
  Matrix t_mat;        // T
  Matrix y;            // T * V, 16 x 256
  Matrix chi;          // T^dag T
  Eigen::VectorXd r;   // residuals
  Eigen::MatrixXd j;   // Jacobian
  Eigen::MatrixXd jtj;
  Eigen::VectorXd g;

  FitWorkspace()
      : r(kResiduals), j(kResiduals, kParams), jtj(kParams, kParams), g(kParams) {}
};

void eval_residuals(const Eigen::VectorXd& t, const Eigen::VectorXd& phat, double total_pairs,
                    double lambda, FitWorkspace& w, bool with_jacobian) {
  const Design& d = design();
  const double sqrt_c = std::sqrt(total_pairs);
  const double sqrt_l = std::sqrt(lambda);

  w.t_mat = t_to_matrix(t);
  w.y.noalias() = w.t_mat * d.v;
  w.chi.noalias() = w.t_mat.adjoint() * w.t_mat;

  for (int a = 0; a < kSettings; ++a)
    w.r(a) = sqrt_c * (phat(a) - w.y.col(a).squaredNorm());

  std::array<Complex, kBasisSize> con;
  for (int k = 0; k < kBasisSize; ++k) {
    con[static_cast<std::size_t>(k)] =
        w.chi.cwiseProduct(d.k[static_cast<std::size_t>(k)]).sum() - (k == 0 ? 1.0 : 0.0);
    w.r(kSettings + 2 * k) = sqrt_l * con[static_cast<std::size_t>(k)].real();
    w.r(kSettings + 2 * k + 1) = sqrt_l * con[static_cast<std::size_t>(k)].imag();
  }

  if (!with_jacobian) return;

  // Data rows: dp/dT = (T v) v^dag, mapped onto the lower-triangular
  // parameters (2 Re / 2 Im of the corresponding entry).
  w.j.setZero();
  for (int a = 0; a < kSettings; ++a) {
    for (int i = 0; i < kBasisSize; ++i) {
      const Complex yi = w.y(i, a);
      if (yi == Complex(0.0)) continue;
      // diagonal parameter (i, i)
      {
        const Complex gij = yi * std::conj(d.v(i, a));
        w.j(a, i) = -sqrt_c * 2.0 * gij.real();
      }
      for (int jj = 0; jj < i; ++jj) {
        const Complex gij = yi * std::conj(d.v(jj, a));
        const int base = kBasisSize + (i * (i - 1) / 2 + jj) * 2;
        w.j(a, base) = -sqrt_c * 2.0 * gij.real();
        w.j(a, base + 1) = -sqrt_c * 2.0 * gij.imag();
      }
    }
  }

  // Constraint rows. For dT = E_ij:  dg_k = A1 + A2, for dT = i E_ij:
  // dg_k = i (A2 - A1), with A1 = (T K_k^T)_ij and A2 = (conj(T) K_k)_ij.
  const Matrix t_conj = w.t_mat.conjugate();
  for (int k = 0; k < kBasisSize; ++k) {
    const Matrix a1 = w.t_mat * d.k[static_cast<std::size_t>(k)].transpose();
    const Matrix a2 = t_conj * d.k[static_cast<std::size_t>(k)];
    const int row_re = kSettings + 2 * k;
    const int row_im = kSettings + 2 * k + 1;
    for (int i = 0; i < kBasisSize; ++i) {
      {
        const Complex dre = a1(i, i) + a2(i, i);
        w.j(row_re, i) = sqrt_l * dre.real();
        w.j(row_im, i) = sqrt_l * dre.imag();
      }
      for (int jj = 0; jj < i; ++jj) {
        const int base = kBasisSize + (i * (i - 1) / 2 + jj) * 2;
        const Complex dre = a1(i, jj) + a2(i, jj);
        const Complex dim = Complex(0.0, 1.0) * (a2(i, jj) - a1(i, jj));
        w.j(row_re, base) = sqrt_l * dre.real();
        w.j(row_im, base) = sqrt_l * dre.imag();
        w.j(row_re, base + 1) = sqrt_l * dim.real();
        w.j(row_im, base + 1) = sqrt_l * dim.imag();
      }
    }
  }
}

double data_term_only(const Eigen::VectorXd& t, const Eigen::VectorXd& phat, double total_pairs) {
  const Design& d = design();
  const Matrix tm = t_to_matrix(t);
  const Matrix y = tm * d.v;
  double acc = 0.0;
  for (int a = 0; a < kSettings; ++a) {
    const double diff = phat(a) - y.col(a).squaredNorm();
    acc += total_pairs * diff * diff;
  }
  return acc;
}

struct StageOutcome {
  int iterations = 0;
  double objective = 0.0;
};

// Levenberg-Marquardt with additive damping; monotone in the objective.
StageOutcome lm_stage(Eigen::VectorXd& t, const Eigen::VectorXd& phat, double total_pairs,
                      double lambda, const FitConfig& config, FitWorkspace& w) {
  eval_residuals(t, phat, total_pairs, lambda, w, true);
  double f = w.r.squaredNorm();
  w.jtj.noalias() = w.j.transpose() * w.j;
  w.g.noalias() = w.j.transpose() * w.r;

  double mu = 1e-3 * std::max(w.jtj.diagonal().maxCoeff(), 1e-12);
  double nu = 2.0;
  StageOutcome out;

  Eigen::VectorXd t_new(kParams);
  FitWorkspace trial;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (2.0 * w.g.cwiseAbs().maxCoeff() <= config.gradient_tolerance) break;

    Eigen::MatrixXd damped = w.jtj;
    damped.diagonal().array() += mu;
    const Eigen::VectorXd step = Eigen::LDLT<Eigen::MatrixXd>(damped).solve(-w.g);
    if (step.norm() <= 1e-12 * (t.norm() + 1e-12)) break;

    t_new = t + step;
    eval_residuals(t_new, phat, total_pairs, lambda, trial, false);
    const double f_new = trial.r.squaredNorm();
    const double predicted = step.dot(mu * step - w.g);
    const double rho = predicted > 0.0 ? (f - f_new) / predicted : -1.0;

    if (rho > 0.0 && f_new < f) {
      t = t_new;
      const double drop = f - f_new;
      f = f_new;
      ++out.iterations;
      eval_residuals(t, phat, total_pairs, lambda, w, true);
      w.jtj.noalias() = w.j.transpose() * w.j;
      w.g.noalias() = w.j.transpose() * w.r;
      mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (drop <= 1e-12 * std::max(1.0, f)) break;
    } else {
      mu *= nu;
      nu *= 2.0;
      if (mu > 1e16 * std::max(1.0, w.jtj.diagonal().maxCoeff())) break;
    }
  }
  out.objective = f;
  return out;
}

Matrix psd_projection(const Matrix& chi) {
  Matrix h = 0.5 * (chi + chi.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  Matrix out = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  const double tr = out.trace().real();
  if (tr > 1e-12)
    out /= tr;
  else
    out = Matrix::Identity(kBasisSize, kBasisSize) / static_cast<double>(kBasisSize);
  return out;
}

}  // namespace

TVec::TVec(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() != length)
    throw std::invalid_argument("TVec: expected length " + std::to_string(length) + ", got " +
                                std::to_string(values_.size()));
}

TVec TVec::zero() { return TVec(Eigen::VectorXd::Zero(length)); }

TVec TVec::from_chi(const Matrix& chi) {
  if (chi.rows() != kBasisSize || chi.cols() != kBasisSize)
    throw std::invalid_argument("TVec::from_chi: chi must be 16 x 16");
  // chi = U U^dag with U upper triangular, obtained by Cholesky of the
  // index-reversed matrix; then T = U^dag is lower triangular with
  // T^dag T = chi and nonnegative real diagonal.
  Matrix flipped(kBasisSize, kBasisSize);
  for (int i = 0; i < kBasisSize; ++i)
    for (int j = 0; j < kBasisSize; ++j)
      flipped(i, j) = chi(kBasisSize - 1 - i, kBasisSize - 1 - j);
  const Matrix l = clamped_cholesky(flipped);
  Matrix upper(kBasisSize, kBasisSize);
  for (int i = 0; i < kBasisSize; ++i)
    for (int j = 0; j < kBasisSize; ++j)
      upper(i, j) = l(kBasisSize - 1 - i, kBasisSize - 1 - j);
  return TVec(matrix_to_t(upper.adjoint()));
}

Matrix TVec::lower_triangular() const { return t_to_matrix(values_); }

ProcessMatrix chi_from_tvec(const TVec& t) {
  const Matrix tm = t.lower_triangular();
  Matrix chi = tm.adjoint() * tm;
  chi = 0.5 * (chi + chi.adjoint());
  // PSD by construction; trace preservation is the fit's responsibility.
  return ProcessMatrix::physical(std::move(chi), pauli_basis(2),
                                 std::numeric_limits<double>::infinity());
}

ProcessMatrix linear_inversion(const CountSet& data) {
  const Design& d = design();
  if (!(d.rcond > 1e-12))
    throw std::runtime_error("linear_inversion: design matrix is numerically singular");
  const Eigen::VectorXd phat = measured_frequencies(data);
  const Vector rhs = phat.cast<Complex>();
  const Vector x = d.lu.solve(rhs);
  Matrix chi(kBasisSize, kBasisSize);
  for (int m = 0; m < kBasisSize; ++m)
    for (int n = 0; n < kBasisSize; ++n) chi(m, n) = x(m * kBasisSize + n);
  chi = 0.5 * (chi + chi.adjoint());
  return ProcessMatrix::unconstrained(std::move(chi), pauli_basis(2));
}

double objective_f(const TVec& t, const CountSet& data, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("objective_f: lambda must be nonnegative");
  FitWorkspace w;
  eval_residuals(t.values(), measured_frequencies(data), data.total_pairs(), lambda, w, false);
  return w.r.squaredNorm();
}

Eigen::VectorXd objective_gradient(const TVec& t, const CountSet& data, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("objective_gradient: lambda must be nonnegative");
  FitWorkspace w;
  eval_residuals(t.values(), measured_frequencies(data), data.total_pairs(), lambda, w, true);
  return 2.0 * w.j.transpose() * w.r;
}

FitResult mle_reconstruct(const CountSet& data, const FitConfig& config) {
  if (config.lambda < 0.0)
    throw std::invalid_argument("mle_reconstruct: lambda must be nonnegative");
  if (config.restarts < 1)
    throw std::invalid_argument("mle_reconstruct: need at least one restart");

  const Eigen::VectorXd phat = measured_frequencies(data);
  const double total_pairs = data.total_pairs();
  const BasisPtr basis = pauli_basis(2);

  // Warm start: nearest PSD matrix to the linear inversion, trace 1.
  const ProcessMatrix li = linear_inversion(data);
  const Eigen::VectorXd t0 = TVec::from_chi(psd_projection(li.chi())).values();

  double lambda = config.lambda;
  if (lambda <= 0.0) lambda = 10.0 * std::max(data_term_only(t0, phat, total_pairs), 1e-3);

  Rng rng(config.seed);
  std::vector<Eigen::VectorXd> starts;
  starts.reserve(static_cast<std::size_t>(config.restarts));
  starts.push_back(t0);
  for (int r = 1; r < config.restarts; ++r) {
    Rng sub = rng.fork(static_cast<std::uint64_t>(r));
    Eigen::VectorXd perturbed = t0;
    for (int i = 0; i < kParams; ++i) perturbed(i) += config.restart_noise_scale * sub.gaussian();
    starts.push_back(std::move(perturbed));
  }

  std::vector<Eigen::VectorXd> current = starts;
  FitWorkspace w;
  int total_iterations = 0;
  int best = 0;
  double best_objective = 0.0;
  double defect = 0.0;
  Matrix best_chi;

  // The escalation schedule is shared across restarts so their objectives
  // stay comparable; each stage warm-starts from the previous solution.
  for (int escalation = 0;; ++escalation) {
    best = 0;
    best_objective = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r) {
      const StageOutcome outcome =
          lm_stage(current[static_cast<std::size_t>(r)], phat, total_pairs, lambda, config, w);
      total_iterations += outcome.iterations;
      if (outcome.objective < best_objective) {
        best_objective = outcome.objective;
        best = r;
      }
    }
    const Matrix tm = t_to_matrix(current[static_cast<std::size_t>(best)]);
    best_chi = tm.adjoint() * tm;
    best_chi = 0.5 * (best_chi + best_chi.adjoint());
    defect = tp_defect(best_chi, *basis);
    if (defect <= config.tp_threshold || escalation >= config.max_lambda_escalations) break;
    lambda *= 10.0;
  }

  const bool converged = defect <= config.tp_threshold;
  FitResult result{
      ProcessMatrix::physical(best_chi, basis,
                              converged ? config.tp_threshold
                                        : std::numeric_limits<double>::infinity()),
      best_objective,
      defect,
      cp_defect(best_chi),
      total_iterations,
      best,
      lambda,
      converged};
  if (!converged)
    throw ConvergenceFailure("mle_reconstruct: TP defect " + std::to_string(defect) +
                                 " above threshold after lambda escalation",
                             std::move(result));
  return result;
}

namespace {

// Least-squares fit of gamma exp(-x^2/sigma^2) to the histogram.
std::pair<double, double> fit_gaussian(const Eigen::VectorXd& centers,
                                       const Eigen::VectorXd& counts, double sigma0) {
  double gamma = counts.maxCoeff();
  double sigma = std::max(sigma0, 1e-12);
  const auto eval = [&](double g, double s, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    for (int i = 0; i < centers.size(); ++i) {
      const double x2 = centers(i) * centers(i);
      const double e = std::exp(-x2 / (s * s));
      r(i) = g * e - counts(i);
      if (jac) {
        (*jac)(i, 0) = e;
        (*jac)(i, 1) = g * e * 2.0 * x2 / (s * s * s);
      }
    }
  };
  Eigen::VectorXd r(centers.size());
  Eigen::MatrixXd jac(centers.size(), 2);
  eval(gamma, sigma, r, &jac);
  double f = r.squaredNorm();
  double mu = 1e-3;
  double nu = 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::Matrix2d a = jac.transpose() * jac;
    const Eigen::Vector2d g = jac.transpose() * r;
    if (g.cwiseAbs().maxCoeff() < 1e-12) break;
    Eigen::Matrix2d damped = a;
    damped.diagonal().array() += mu * std::max(1.0, a.diagonal().maxCoeff());
    const Eigen::Vector2d step = damped.ldlt().solve(-g);
    const double g_new = gamma + step(0);
    const double s_new = sigma + step(1);
    Eigen::VectorXd r_new(centers.size());
    eval(g_new, std::abs(s_new) > 1e-15 ? s_new : sigma, r_new, nullptr);
    const double f_new = r_new.squaredNorm();
    if (f_new < f) {
      gamma = g_new;
      if (std::abs(s_new) > 1e-15) sigma = s_new;
      eval(gamma, sigma, r, &jac);
      if (f - f_new <= 1e-14 * std::max(1.0, f)) { f = f_new; break; }
      f = f_new;
      mu = std::max(mu / 3.0, 1e-12);
      nu = 2.0;
    } else {
      mu *= nu;
      nu *= 2.0;
      if (mu > 1e16) break;
    }
  }
  return {gamma, std::abs(sigma)};
}

}  // namespace

ResidualReport residuals(const ProcessMatrix& chi, const CountSet& data,
                         bool allow_unconstrained) {
  if (chi.is_unconstrained() && !allow_unconstrained)
    throw std::invalid_argument("residuals: chi must be physical");
  const auto& settings = standard_settings();
  ResidualReport report;
  report.deltas.resize(kSettings);
  for (int a = 0; a < kSettings; ++a)
    report.deltas(a) =
        data.frequency(static_cast<std::size_t>(a)) -
        predict_probability(chi, settings[static_cast<std::size_t>(a)], allow_unconstrained);

  const double lo = report.deltas.minCoeff();
  const double hi = report.deltas.maxCoeff();
  if (hi - lo <= 0.0) {
    report.degenerate = true;
    report.sigma = 0.0;
    report.amplitude = static_cast<double>(kSettings);
    return report;
  }

  constexpr int kBins = 21;
  const double m = report.deltas.cwiseAbs().maxCoeff();
  const double width = 2.0 * m / kBins;
  report.bin_centers.resize(kBins);
  report.bin_counts = Eigen::VectorXd::Zero(kBins);
  for (int i = 0; i < kBins; ++i) report.bin_centers(i) = -m + (i + 0.5) * width;
  for (int a = 0; a < kSettings; ++a) {
    int bin = static_cast<int>(std::floor((report.deltas(a) + m) / width));
    bin = std::clamp(bin, 0, kBins - 1);
    report.bin_counts(bin) += 1.0;
  }

  const double mean = report.deltas.mean();
  const double var = (report.deltas.array() - mean).square().mean();
  const auto [gamma, sigma] = fit_gaussian(report.bin_centers, report.bin_counts,
                                           std::sqrt(2.0 * var));
  report.amplitude = gamma;
  report.sigma = sigma;
  return report;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> bootstrap_chi_stddev(const CountSet& data,
                                                                 const FitConfig& config,
                                                                 int n_resamples) {
  if (n_resamples < 2)
    throw std::invalid_argument("bootstrap_chi_stddev: need at least 2 resamples");
  const Rng root(config.seed);
  std::vector<Matrix> chis;
  chis.reserve(static_cast<std::size_t>(n_resamples));
  for (int i = 0; i < n_resamples; ++i) {
    Rng sub = root.fork(0x626f6f74ull + static_cast<std::uint64_t>(i));
    std::vector<CountRecord> records = data.records();
    for (std::size_t a = 0; a < records.size(); ++a) {
      Rng cell = sub.fork(a);
      records[a].counts = cell.poisson(static_cast<double>(records[a].counts));
    }
    CountSet resampled(std::move(records), data.total_pairs(), data.seed(), data.noise());
    FitConfig cfg = config;
    cfg.seed = sub.seed();
    chis.push_back(mle_reconstruct(resampled, cfg).chi.chi());
  }
  Eigen::MatrixXd mean_re = Eigen::MatrixXd::Zero(kBasisSize, kBasisSize);
  Eigen::MatrixXd mean_im = Eigen::MatrixXd::Zero(kBasisSize, kBasisSize);
  for (const auto& c : chis) {
    mean_re += c.real();
    mean_im += c.imag();
  }
  mean_re /= n_resamples;
  mean_im /= n_resamples;
  Eigen::MatrixXd var_re = Eigen::MatrixXd::Zero(kBasisSize, kBasisSize);
  Eigen::MatrixXd var_im = Eigen::MatrixXd::Zero(kBasisSize, kBasisSize);
  for (const auto& c : chis) {
    var_re += (c.real() - mean_re).cwiseAbs2();
    var_im += (c.imag() - mean_im).cwiseAbs2();
  }
  var_re /= n_resamples - 1;
  var_im /= n_resamples - 1;
  return {var_re.cwiseSqrt(), var_im.cwiseSqrt()};
}

}  // namespace qpt
