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

#include <filesystem>
#include <string>

#include "qpt/metrics.hpp"
#include "qpt/reconstruction.hpp"

namespace qpt {

/// Malformed or invalid on-disk artifact; the message names the first
/// offending field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Doubles are printed with 17 significant digits so a write-read-write cycle
// is byte identical; CSV columns use 9 digits after the decimal point.
std::string format_full(double value);
std::string format_csv(double value);

void write_count_file(const std::filesystem::path& path, const CountSet& data);
CountSet read_count_file(const std::filesystem::path& path);

void write_chi_file(const std::filesystem::path& path, const ProcessMatrix& chi);

/// Loads a chi matrix; Hermiticity must hold within 1e-8. Files flagged
/// "physical" are additionally validated as CP (eigenvalues >= -1e-8) and TP
/// within `tp_tolerance`, the end-to-end physicality contract of the pipeline.
ProcessMatrix read_chi_file(const std::filesystem::path& path, double tp_tolerance = 1e-3);

void write_scatter_csv(const std::filesystem::path& path, const ScatterTable& table);

/// 21 histogram rows "delta,count"; header only for a degenerate report.
void write_histogram_csv(const std::filesystem::path& path, const ResidualReport& report);

std::string metrics_report_to_json(const MetricsReport& report);
std::string residual_report_to_json(const ResidualReport& report, bool full);
std::string density_matrix_to_json(const Matrix& rho, double purity_value, double tangle_value,
                                   const double* fidelity_vs_ideal);

}  // namespace qpt
