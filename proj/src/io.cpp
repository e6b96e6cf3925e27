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

#include "qpt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qpt {

namespace {

using nlohmann::json;

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

const json& require_field(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw ParseError(std::string("missing field '") + field + "'");
  return *it;
}

double require_number(const json& j, const char* field) {
  const json& v = require_field(j, field);
  if (!v.is_number()) throw ParseError(std::string("field '") + field + "' must be a number");
  return v.get<double>();
}

std::string require_string(const json& j, const char* field) {
  const json& v = require_field(j, field);
  if (!v.is_string()) throw ParseError(std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

Eigen::MatrixXd require_square_matrix(const json& j, const char* field, Eigen::Index n) {
  const json& v = require_field(j, field);
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n)
    throw ParseError(std::string("field '") + field + "' must be a " + std::to_string(n) + "x" +
                     std::to_string(n) + " array");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ParseError(std::string("field '") + field + "' row " + std::to_string(r) +
                       " must have " + std::to_string(n) + " entries");
    for (Eigen::Index c = 0; c < n; ++c) {
      const json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number())
        throw ParseError(std::string("field '") + field + "' entry (" + std::to_string(r) + "," +
                         std::to_string(c) + ") must be a number");
      m(r, c) = cell.get<double>();
    }
  }
  return m;
}

void append_matrix_rows(std::string& out, const Eigen::MatrixXd& m, const std::string& indent) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += indent + "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out += format_full(m(r, c));
      if (c + 1 < m.cols()) out += ", ";
    }
    out += (r + 1 < m.rows()) ? "],\n" : "]\n";
  }
}

}  // namespace

std::string format_full(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("format_full: non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string format_csv(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("format_csv: non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9f", value);
  return buf;
}

void write_count_file(const std::filesystem::path& path, const CountSet& data) {
  std::string out;
  out.reserve(1 << 15);
  out += "{\n";
  out += "  \"dimension\": 4,\n";
  out += "  \"total_pairs\": " + format_full(data.total_pairs()) + ",\n";
  out += "  \"seed\": ";
  out += data.seed() ? std::to_string(*data.seed()) : "null";
  out += ",\n";
  out += "  \"noise\": ";
  if (data.noise()) {
    const NoiseSpec& n = *data.noise();
    out += "{ \"depolarizing\": " + format_full(n.depolarizing) +
           ", \"dephasing\": " + format_full(n.dephasing) + ", \"count_noise\": \"" +
           (n.count_noise == CountNoise::poisson ? "poisson" : "none") + "\" }";
  } else {
    out += "null";
  }
  out += ",\n";
  out += "  \"records\": [\n";
  const auto& records = data.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    out += "    { \"input\": \"" + records[i].input_label + "\", \"analyzer\": \"" +
           records[i].analyzer_label + "\", \"counts\": " + std::to_string(records[i].counts) +
           " }";
    out += (i + 1 < records.size()) ? ",\n" : "\n";
  }
  out += "  ]\n";
  out += "}\n";
  write_text(path, out);
}

CountSet read_count_file(const std::filesystem::path& path) {
  const json j = load_json(path);
  const double dim = require_number(j, "dimension");
  if (dim != 4.0) throw ParseError("field 'dimension' must be 4");
  const double total_pairs = require_number(j, "total_pairs");
  if (!(total_pairs > 0.0)) throw ParseError("field 'total_pairs' must be positive");

  std::optional<std::uint64_t> seed;
  const json& jseed = require_field(j, "seed");
  if (!jseed.is_null()) {
    if (!jseed.is_number_integer()) throw ParseError("field 'seed' must be an integer or null");
    seed = jseed.get<std::uint64_t>();
  }

  std::optional<NoiseSpec> noise;
  const json& jnoise = require_field(j, "noise");
  if (!jnoise.is_null()) {
    if (!jnoise.is_object()) throw ParseError("field 'noise' must be an object or null");
    NoiseSpec n;
    n.depolarizing = require_number(jnoise, "depolarizing");
    n.dephasing = require_number(jnoise, "dephasing");
    const std::string mode = require_string(jnoise, "count_noise");
    if (mode == "poisson")
      n.count_noise = CountNoise::poisson;
    else if (mode == "none")
      n.count_noise = CountNoise::none;
    else
      throw ParseError("field 'noise.count_noise' must be \"none\" or \"poisson\"");
    noise = n;
  }

  const json& jrecords = require_field(j, "records");
  if (!jrecords.is_array()) throw ParseError("field 'records' must be an array");
  std::vector<CountRecord> records;
  records.reserve(jrecords.size());
  std::size_t idx = 0;
  for (const json& r : jrecords) {
    const std::string where = "records[" + std::to_string(idx++) + "]";
    if (!r.is_object()) throw ParseError("field '" + where + "' must be an object");
    CountRecord rec;
    rec.input_label = require_string(r, "input");
    rec.analyzer_label = require_string(r, "analyzer");
    const json& jc = require_field(r, "counts");
    if (!jc.is_number_integer())
      throw ParseError("field '" + where + ".counts' must be an integer");
    rec.counts = jc.get<std::int64_t>();
    if (rec.counts < 0) throw ParseError("field '" + where + ".counts' must be nonnegative");
    records.push_back(std::move(rec));
  }
  try {
    return CountSet(std::move(records), total_pairs, seed, noise);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("field 'records': ") + e.what());
  }
}

void write_chi_file(const std::filesystem::path& path, const ProcessMatrix& chi) {
  const Eigen::Index n = chi.basis().size();
  std::string out;
  out.reserve(1 << 15);
  out += "{\n";
  out += "  \"dimension\": " + std::to_string(chi.dim()) + ",\n";
  out += "  \"basis\": \"" + chi.basis().name() + "\",\n";
  out += std::string("  \"flags\": [\"") + (chi.is_unconstrained() ? "unconstrained" : "physical") +
         "\"],\n";
  out += "  \"real\": [\n";
  append_matrix_rows(out, chi.chi().real(), "    ");
  out += "  ],\n";
  out += "  \"imag\": [\n";
  append_matrix_rows(out, chi.chi().imag(), "    ");
  out += "  ]\n";
  out += "}\n";
  write_text(path, out);
  (void)n;
}

ProcessMatrix read_chi_file(const std::filesystem::path& path, double tp_tolerance) {
  const json j = load_json(path);
  const double dim = require_number(j, "dimension");
  if (dim != 4.0) throw ParseError("field 'dimension' must be 4");
  const std::string basis_name = require_string(j, "basis");
  BasisPtr basis;
  if (basis_name == "pauli-2q")
    basis = pauli_basis(2);
  else if (basis_name == "cnot-2q") {
    // Reconstruct through the library's canonical cnot basis.
    basis = to_cnot_basis(chi_from_unitary(cnot_gate())).basis_ptr();
  } else {
    throw ParseError("field 'basis' must be \"pauli-2q\" or \"cnot-2q\"");
  }

  const json& jflags = require_field(j, "flags");
  if (!jflags.is_array() || jflags.size() != 1 || !jflags[0].is_string())
    throw ParseError("field 'flags' must be a one-element array of strings");
  const std::string flag = jflags[0].get<std::string>();
  if (flag != "physical" && flag != "unconstrained")
    throw ParseError("field 'flags[0]' must be \"physical\" or \"unconstrained\"");

  const Eigen::MatrixXd re = require_square_matrix(j, "real", 16);
  const Eigen::MatrixXd im = require_square_matrix(j, "imag", 16);
  Matrix chi = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
  if ((chi - chi.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw ParseError("field 'real'/'imag': matrix is not Hermitian within 1e-8");
  chi = 0.5 * (chi + chi.adjoint());

  if (flag == "unconstrained") return ProcessMatrix::unconstrained(std::move(chi), std::move(basis));
  try {
    return ProcessMatrix::physical(std::move(chi), std::move(basis), tp_tolerance);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("field 'flags': file claims \"physical\" but ") + e.what());
  }
}

void write_scatter_csv(const std::filesystem::path& path, const ScatterTable& table) {
  std::string out;
  out.reserve(table.rows.size() * 64 + 64);
  out += "input_tangle,output_tangle,delta_tangle,fidelity,entropy_added\n";
  for (const auto& row : table.rows) {
    out += format_csv(row.input_tangle);
    out += ',';
    out += format_csv(row.output_tangle);
    out += ',';
    out += format_csv(row.delta_tangle);
    out += ',';
    out += format_csv(row.fidelity);
    out += ',';
    out += format_csv(row.entropy_added);
    out += '\n';
  }
  write_text(path, out);
}

void write_histogram_csv(const std::filesystem::path& path, const ResidualReport& report) {
  std::string out = "delta,count\n";
  for (Eigen::Index i = 0; i < report.bin_centers.size(); ++i) {
    out += format_csv(report.bin_centers(i));
    out += ',';
    out += format_full(report.bin_counts(i));
    out += '\n';
  }
  write_text(path, out);
}

std::string metrics_report_to_json(const MetricsReport& report) {
  std::string out;
  out += "{\n";
  out += "  \"process_fidelity\": " + format_full(report.process_fidelity) + ",\n";
  out += "  \"average_gate_fidelity\": " + format_full(report.average_gate_fidelity) + ",\n";
  out += "  \"cp_distance\": " + format_full(report.cp_distance) + ",\n";
  out += "  \"error_prob_bound\": " + format_full(report.error_prob_bound) + ",\n";
  out += "  \"average_purity\": " + format_full(report.average_purity) + ",\n";
  out += "  \"average_linear_entropy\": " + format_full(report.average_linear_entropy) + ",\n";
  out += "  \"entangling_capability\": " + format_full(report.entangling_capability) + ",\n";
  out += "  \"min_output_fidelity\": " + format_full(report.min_output_fidelity) + ",\n";
  out += "  \"sweep_samples\": " + std::to_string(report.sweep_samples) + ",\n";
  out += "  \"sweep_seed\": " + std::to_string(report.sweep_seed) + "\n";
  out += "}\n";
  return out;
}

std::string residual_report_to_json(const ResidualReport& report, bool full) {
  std::string out;
  out += "{\n";
  out += "  \"sigma\": " + format_full(report.sigma) + ",\n";
  out += "  \"amplitude\": " + format_full(report.amplitude) + ",\n";
  out += std::string("  \"degenerate\": ") + (report.degenerate ? "true" : "false");
  if (full) {
    out += ",\n  \"deltas\": [";
    for (Eigen::Index i = 0; i < report.deltas.size(); ++i) {
      out += format_full(report.deltas(i));
      if (i + 1 < report.deltas.size()) out += ", ";
    }
    out += "]";
  }
  out += "\n}\n";
  return out;
}

std::string density_matrix_to_json(const Matrix& rho, double purity_value, double tangle_value,
                                   const double* fidelity_vs_ideal) {
  std::string out;
  out += "{\n";
  out += "  \"real\": [\n";
  append_matrix_rows(out, rho.real(), "    ");
  out += "  ],\n";
  out += "  \"imag\": [\n";
  append_matrix_rows(out, rho.imag(), "    ");
  out += "  ],\n";
  out += "  \"purity\": " + format_full(purity_value) + ",\n";
  out += "  \"tangle\": " + format_full(tangle_value);
  if (fidelity_vs_ideal) out += ",\n  \"fidelity_vs_ideal\": " + format_full(*fidelity_vs_ideal);
  out += "\n}\n";
  return out;
}

}  // namespace qpt
