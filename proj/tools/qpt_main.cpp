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

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qpt/io.hpp"

namespace {

// Exit codes: 0 success, 2 input/parse error, 3 convergence failure,
// 4 physicality refusal.
constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitPhysicality = 4;

struct GateSpec {
  std::string raw = "cnot";
};

// Resolve --gate cnot | identity | chi-file:<path>.
qpt::ProcessMatrix resolve_gate_chi(const std::string& spec, bool allow_unphysical) {
  if (spec == "cnot") return qpt::chi_from_unitary(qpt::cnot_gate());
  if (spec == "identity") return qpt::chi_from_unitary(qpt::identity_gate());
  const std::string prefix = "chi-file:";
  if (spec.rfind(prefix, 0) == 0) {
    qpt::ProcessMatrix chi = qpt::read_chi_file(spec.substr(prefix.size()));
    if (chi.is_unconstrained() && !allow_unphysical)
      throw std::domain_error("chi file is flagged unconstrained; pass --allow-unphysical to use it");
    return chi;
  }
  throw qpt::ParseError("--gate must be cnot, identity or chi-file:<path>");
}

qpt::UnitaryGate resolve_ideal(const std::string& name) {
  if (name == "cnot") return qpt::cnot_gate();
  if (name == "identity") return qpt::identity_gate();
  throw qpt::ParseError("--ideal must be cnot or identity");
}

qpt::ProcessMatrix load_chi_checked(const std::string& path, bool allow_unphysical) {
  qpt::ProcessMatrix chi = qpt::read_chi_file(path);
  if (chi.is_unconstrained() && !allow_unphysical)
    throw std::domain_error("'" + path +
                            "' is flagged unconstrained; pass --allow-unphysical to use it");
  return chi;
}

int run_simulate(const std::string& gate, double pairs, double depolarizing, double dephasing,
                 const std::string& count_noise, std::uint64_t seed, const std::string& out,
                 bool allow_unphysical) {
  qpt::NoiseSpec noise;
  noise.depolarizing = depolarizing;
  noise.dephasing = dephasing;
  if (count_noise == "poisson")
    noise.count_noise = qpt::CountNoise::poisson;
  else if (count_noise == "none")
    noise.count_noise = qpt::CountNoise::none;
  else
    throw qpt::ParseError("--count-noise must be none or poisson");

  const qpt::ProcessMatrix chi = resolve_gate_chi(gate, allow_unphysical);
  const qpt::Rng rng(seed);
  const qpt::CountSet data = qpt::simulate_counts(chi, pairs, noise, rng, allow_unphysical);
  qpt::write_count_file(out, data);
  std::cout << "wrote " << out << " (" << data.records().size() << " settings, C = "
            << qpt::format_full(pairs) << ")\n";
  return kExitOk;
}

int run_reconstruct(const std::string& in, const std::string& method, double lambda, int restarts,
                    int max_iterations, double gradient_tolerance, std::uint64_t seed,
                    const std::string& out) {
  const qpt::CountSet data = qpt::read_count_file(in);
  if (method == "linear") {
    const qpt::ProcessMatrix chi = qpt::linear_inversion(data);
    qpt::write_chi_file(out, chi);
    std::cout << "method: linear\n";
    std::cout << "cp_defect: " << qpt::format_full(qpt::cp_defect(chi)) << "\n";
    std::cout << "tp_defect: " << qpt::format_full(qpt::tp_defect(chi)) << "\n";
    std::cout << "wrote " << out << " (flagged unconstrained)\n";
    return kExitOk;
  }
  if (method != "mle") throw qpt::ParseError("--method must be mle or linear");

  qpt::FitConfig config;
  config.lambda = lambda;
  config.restarts = restarts;
  config.max_iterations = max_iterations;
  config.gradient_tolerance = gradient_tolerance;
  config.seed = seed;

  const auto print_summary = [](const qpt::FitResult& fit) {
    std::cout << "objective: " << qpt::format_full(fit.objective_value) << "\n";
    std::cout << "tp_defect: " << qpt::format_full(fit.tp_defect_final) << "\n";
    std::cout << "cp_defect: " << qpt::format_full(fit.cp_defect_final) << "\n";
    std::cout << "iterations: " << fit.iterations_used << "\n";
    std::cout << "restart: " << fit.restart_index_of_best << "\n";
    std::cout << "lambda: " << qpt::format_full(fit.lambda_final) << "\n";
  };

  try {
    const qpt::FitResult fit = qpt::mle_reconstruct(data, config);
    qpt::write_chi_file(out, fit.chi);
    print_summary(fit);
    std::cout << "wrote " << out << "\n";
    return kExitOk;
  } catch (const qpt::ConvergenceFailure& e) {
    // Keep the best fit on disk; it is CP by construction but misses the TP
    // threshold, so it goes out flagged unconstrained.
    const qpt::FitResult& fit = e.best_fit;
    qpt::write_chi_file(out, qpt::ProcessMatrix::unconstrained(fit.chi.chi(), fit.chi.basis_ptr()));
    print_summary(fit);
    std::cerr << "convergence failure: " << e.what() << "\n";
    std::cout << "wrote " << out << " (flagged unconstrained)\n";
    return kExitConvergence;
  }
}

int run_metrics(const std::string& chi_path, const std::string& ideal_name, int sweep_samples,
                std::uint64_t seed, int threads, const std::string& scatter_path,
                bool allow_unphysical) {
  const qpt::ProcessMatrix chi = load_chi_checked(chi_path, allow_unphysical);
  if (chi.basis().name() != "pauli-2q")
    throw qpt::ParseError("metrics requires a pauli-2q chi; '" + chi.basis().name() +
                          "' does not match the ideal gate basis");
  const qpt::UnitaryGate ideal = resolve_ideal(ideal_name);
  qpt::ScatterTable table;
  const qpt::MetricsReport report = qpt::compute_metrics(
      chi, ideal, sweep_samples, seed, threads, scatter_path.empty() ? nullptr : &table,
      allow_unphysical);
  if (!scatter_path.empty()) qpt::write_scatter_csv(scatter_path, table);
  std::cout << qpt::metrics_report_to_json(report);
  return kExitOk;
}

int run_predict(const std::string& chi_path, const std::string& input_label,
                const std::string& amplitudes, const std::string& ideal_name,
                bool allow_unphysical) {
  const qpt::ProcessMatrix chi = load_chi_checked(chi_path, allow_unphysical);
  std::optional<qpt::PureState> input;
  if (!input_label.empty() && !amplitudes.empty())
    throw qpt::ParseError("--input and --amplitudes are mutually exclusive");
  if (!input_label.empty()) {
    input = qpt::two_qubit_product_state(input_label);
  } else if (!amplitudes.empty()) {
    std::vector<double> values;
    std::stringstream ss(amplitudes);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        values.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw qpt::ParseError("--amplitudes: '" + tok + "' is not a number");
      }
    }
    if (values.size() != 4 && values.size() != 8)
      throw qpt::ParseError("--amplitudes needs 4 reals or 8 interleaved re,im values");
    qpt::Vector amps(4);
    if (values.size() == 4)
      for (int i = 0; i < 4; ++i) amps(i) = values[static_cast<std::size_t>(i)];
    else
      for (int i = 0; i < 4; ++i)
        amps(i) = qpt::Complex(values[static_cast<std::size_t>(2 * i)],
                               values[static_cast<std::size_t>(2 * i + 1)]);
    const double norm = amps.norm();
    if (std::abs(norm - 1.0) > 1e-9)
      throw qpt::ParseError("--amplitudes: vector norm is " + qpt::format_full(norm) +
                            ", not 1 (amplitudes are not renormalized silently)");
    amps /= norm;  // remove floating dust only; rejected above if genuinely off
    input = qpt::PureState(std::move(amps));
  } else {
    throw qpt::ParseError("predict needs --input <label> or --amplitudes <list>");
  }

  const qpt::DensityMatrix out = qpt::predict_output(chi, *input, allow_unphysical);
  double fidelity = 0.0;
  const double* fidelity_ptr = nullptr;
  if (!ideal_name.empty()) {
    const qpt::UnitaryGate ideal = resolve_ideal(ideal_name);
    const qpt::PureState ideal_out(qpt::Vector(ideal.matrix() * input->amplitudes()));
    fidelity = qpt::pure_state_fidelity(ideal_out, out.entries());
    fidelity_ptr = &fidelity;
  }
  std::cout << qpt::density_matrix_to_json(out.entries(), qpt::purity(out), qpt::tangle(out),
                                           fidelity_ptr);
  return kExitOk;
}

int run_residuals(const std::string& chi_path, const std::string& counts_path, bool full,
                  const std::string& histogram_path, bool allow_unphysical) {
  const qpt::ProcessMatrix chi = load_chi_checked(chi_path, allow_unphysical);
  if (chi.basis().name() != "pauli-2q")
    throw qpt::ParseError("residuals requires a pauli-2q chi");
  const qpt::CountSet data = qpt::read_count_file(counts_path);
  const qpt::ResidualReport report = qpt::residuals(chi, data, allow_unphysical);
  if (!histogram_path.empty()) qpt::write_histogram_csv(histogram_path, report);
  std::cout << qpt::residual_report_to_json(report, full);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit quantum process tomography: simulation, reconstruction, metrics"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate synthetic coincidence counts");
  std::string sim_gate = "cnot";
  double sim_pairs = 2000.0;
  double sim_depol = 0.0;
  double sim_deph = 0.0;
  std::string sim_count_noise = "none";
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  bool sim_allow = false;
  sim->add_option("--gate", sim_gate, "cnot, identity or chi-file:<path>");
  sim->add_option("--pairs", sim_pairs, "Coincident pairs per setting (C)")
      ->check(CLI::PositiveNumber);
  sim->add_option("--depolarizing", sim_depol, "Depolarizing strength p in [0,1]");
  sim->add_option("--dephasing", sim_deph, "Output dephasing strength q in [0,1]");
  sim->add_option("--count-noise,--noise", sim_count_noise, "none or poisson");
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "Output count file")->required();
  sim->add_flag("--allow-unphysical", sim_allow, "Accept an unconstrained chi file as the gate");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Fit a process matrix to counts");
  std::string rec_in;
  std::string rec_method = "mle";
  double rec_lambda = 0.0;
  int rec_restarts = 3;
  int rec_max_iter = 200;
  double rec_gtol = 1e-6;
  std::uint64_t rec_seed = 0;
  std::string rec_out;
  rec->add_option("--in", rec_in, "Input count file")->required();
  rec->add_option("--method", rec_method, "mle or linear");
  rec->add_option("--lambda", rec_lambda, "Initial TP penalty weight (0 = automatic schedule)");
  rec->add_option("--restarts", rec_restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  rec->add_option("--max-iterations", rec_max_iter, "Iterations per optimizer stage")
      ->check(CLI::PositiveNumber);
  rec->add_option("--gradient-tolerance", rec_gtol, "Gradient stopping tolerance");
  rec->add_option("--seed", rec_seed, "Restart perturbation seed");
  rec->add_option("--out", rec_out, "Output chi file")->required();

  // metrics
  auto* met = app.add_subcommand("metrics", "Gate-performance measures of a chi file");
  std::string met_chi;
  std::string met_ideal = "cnot";
  int met_samples = 200000;
  std::uint64_t met_seed = 0;
  int met_threads = 1;
  std::string met_scatter;
  bool met_allow = false;
  met->add_option("--chi", met_chi, "Process matrix file")->required();
  met->add_option("--ideal", met_ideal, "cnot or identity");
  met->add_option("--sweep-samples", met_samples, "Haar samples for the scatter sweep")
      ->check(CLI::PositiveNumber);
  met->add_option("--seed", met_seed, "Sweep seed");
  met->add_option("--threads", met_threads, "Worker threads (results are thread-count independent)")
      ->check(CLI::PositiveNumber);
  met->add_option("--scatter", met_scatter, "Also write the sweep as CSV");
  met->add_flag("--allow-unphysical", met_allow, "Accept an unconstrained chi file");

  // predict
  auto* pre = app.add_subcommand("predict", "Predicted output state for one input");
  std::string pre_chi;
  std::string pre_input;
  std::string pre_amplitudes;
  std::string pre_ideal;
  bool pre_allow = false;
  pre->add_option("--chi", pre_chi, "Process matrix file")->required();
  pre->add_option("--input", pre_input, "Two-character input label, e.g. DH");
  pre->add_option("--amplitudes", pre_amplitudes,
                  "Comma-separated amplitudes: 4 reals or 8 interleaved re,im");
  pre->add_option("--ideal", pre_ideal, "Also report fidelity vs this ideal gate's output");
  pre->add_flag("--allow-unphysical", pre_allow, "Accept an unconstrained chi file");

  // residuals
  auto* res = app.add_subcommand("residuals", "Residual analysis of a fit against counts");
  std::string res_chi;
  std::string res_counts;
  bool res_full = false;
  std::string res_hist;
  bool res_allow = false;
  res->add_option("--chi", res_chi, "Process matrix file")->required();
  res->add_option("--counts", res_counts, "Count file")->required();
  res->add_flag("--full", res_full, "Include all 256 per-setting deltas");
  res->add_option("--histogram", res_hist, "Write the 21-bin histogram as CSV");
  res->add_flag("--allow-unphysical", res_allow, "Accept an unconstrained chi file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (sim->parsed())
      return run_simulate(sim_gate, sim_pairs, sim_depol, sim_deph, sim_count_noise, sim_seed,
                          sim_out, sim_allow);
    if (rec->parsed())
      return run_reconstruct(rec_in, rec_method, rec_lambda, rec_restarts, rec_max_iter, rec_gtol,
                             rec_seed, rec_out);
    if (met->parsed())
      return run_metrics(met_chi, met_ideal, met_samples, met_seed, met_threads, met_scatter,
                         met_allow);
    if (pre->parsed()) return run_predict(pre_chi, pre_input, pre_amplitudes, pre_ideal, pre_allow);
    if (res->parsed()) return run_residuals(res_chi, res_counts, res_full, res_hist, res_allow);
  } catch (const qpt::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPhysicality;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
