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

#include <stdexcept>

#include "qpt/tomography.hpp"

namespace qpt {

/**
 * Real parameter vector t of length 256 encoding a complex lower-triangular
 * T (16 real diagonal entries first, then the 120 off-diagonal complex
 * entries in row-major order as re/im pairs). chi(t) = T^dag T is Hermitian
 * PSD for every t.
 */
class TVec {
 public:
  explicit TVec(Eigen::VectorXd values);

  static TVec zero();
  /// Encode a Hermitian PSD chi: reverse Cholesky with clamped pivots, so
  /// singular (rank-deficient) matrices factor exactly.
  static TVec from_chi(const Matrix& chi);

  const Eigen::VectorXd& values() const { return values_; }
  /// The lower-triangular T encoded by this vector.
  Matrix lower_triangular() const;

  static constexpr int length = 256;

 private:
  Eigen::VectorXd values_;
};

/// chi(t) = T^dag T as a process matrix (CP by construction, TP not implied).
ProcessMatrix chi_from_tvec(const TVec& t);

struct FitConfig {
  /// Penalty weight; 0 selects the automatic schedule (10 x the data term at
  /// the projected linear-inversion start, escalated tenfold until the TP
  /// defect meets tp_threshold).
  double lambda = 0.0;
  int restarts = 3;
  int max_iterations = 200;          // per Levenberg-Marquardt stage
  double gradient_tolerance = 1e-6;  // stop when ||grad f||_inf falls below
  std::uint64_t seed = 0;
  double tp_threshold = 1e-3;
  int max_lambda_escalations = 5;
  double restart_noise_scale = 0.05;
};

struct FitResult {
  ProcessMatrix chi;
  double objective_value = 0.0;
  double tp_defect_final = 0.0;
  double cp_defect_final = 0.0;
  int iterations_used = 0;
  int restart_index_of_best = 0;
  double lambda_final = 0.0;
  bool converged = true;
};

/// Thrown when the lambda escalation schedule cannot reach the TP threshold;
/// carries the best fit found.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(std::string message, FitResult best)
      : std::runtime_error(std::move(message)), best_fit(std::move(best)) {}
  FitResult best_fit;
};

/**
 * Baseline reconstruction: solve the linear forward model B vec(chi) = c/C
 * exactly and Hermitize. The result is unbiased but generally violates
 * CP/TP under noise, and is flagged unconstrained.
 */
ProcessMatrix linear_inversion(const CountSet& data);

/**
 * The fit objective
 *   f(t) = sum_ab (1/C)(c_ab - C p_ab(chi(t)))^2 + lambda sum_k |g_k(chi(t))|^2
 * where g_k is the k-th normalized trace-preservation constraint coefficient
 * (real and imaginary parts penalized separately).
 */
double objective_f(const TVec& t, const CountSet& data, double lambda);

/// Analytic gradient of objective_f with respect to t.
Eigen::VectorXd objective_gradient(const TVec& t, const CountSet& data, double lambda);

/**
 * Fully constrained maximum-likelihood reconstruction: multi-start
 * Levenberg-Marquardt on f(t), restart 0 seeded from the PSD-projected
 * linear inversion and the rest from small Gaussian perturbations of it,
 * with the lambda escalation schedule shared across restarts so objective
 * values remain comparable. Deterministic for fixed (data, config).
 */
FitResult mle_reconstruct(const CountSet& data, const FitConfig& config = {});

struct ResidualReport {
  Eigen::VectorXd deltas;       // measured - fitted probability, standard order
  double sigma = 0.0;           // width of gamma exp(-delta^2 / sigma^2)
  double amplitude = 0.0;       // gamma
  bool degenerate = false;      // all deltas identical; sigma forced to 0
  Eigen::VectorXd bin_centers;  // 21 uniform bins over [-max|delta|, +max|delta|]
  Eigen::VectorXd bin_counts;
};

/// Residuals of a reconstruction against the data it was fitted to, with the
/// Gaussian fit of their histogram.
ResidualReport residuals(const ProcessMatrix& chi, const CountSet& data,
                         bool allow_unconstrained = false);

/**
 * Parametric bootstrap error bars on chi elements: resample counts
 * Poisson(c_ab), refit `n_resamples` times, return elementwise standard
 * deviations of the real and imaginary parts. Expensive; meant for small n.
 */
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> bootstrap_chi_stddev(const CountSet& data,
                                                                 const FitConfig& config,
                                                                 int n_resamples);

}  // namespace qpt
