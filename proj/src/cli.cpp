#include "mfa/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mfa/classical.hpp"
#include "mfa/ensemble.hpp"
#include "mfa/io.hpp"
#include "mfa/oracle.hpp"
#include "mfa/quantum.hpp"
#include "mfa/rng.hpp"
#include "mfa/spectral.hpp"

namespace mfa::cli {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BreakdownError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string problem = "maxcut";
  std::string mode = "quantum";
  double ds = 1e-3;
  double dt = 0.0;
  double delta = 1.0;
  std::vector<double> amplitudes;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  std::string format = "csv";
  double t_over_delta = 1.0;
  std::size_t points = 101;
};

// Problem loaded from disk: Max-Cut graphs keep the graph for scoring.
struct Loaded {
  std::string id;
  std::optional<WeightedGraph> graph;
  IsingModel model;
};

Loaded load(const Options& o) {
  if (o.input.empty()) throw InputError("--input is required");
  if (!std::filesystem::exists(o.input)) throw InputError("input file not found: " + o.input);
  Loaded l;
  l.id = std::filesystem::path(o.input).stem().string();
  try {
    if (o.problem == "maxcut") {
      l.graph = read_gset_file(o.input);
      l.model = maxcut_to_ising(*l.graph);
    } else {
      l.model = qubo_to_ising(read_qubo_file(o.input));
    }
  } catch (const ParseError& e) {
    throw InputError(o.input + ": " + e.what());
  } catch (const ModelError& e) {
    throw InputError(o.input + ": " + e.what());
  }
  return l;
}

QuantumAnnealConfig quantum_config(const Options& o) {
  QuantumAnnealConfig cfg;
  cfg.ds = o.ds;
  cfg.delta = o.delta;
  return cfg;
}

SolverEcho echo_of(const Options& o, const QuantumAnnealConfig& q, std::size_t n_trials) {
  SolverEcho e;
  e.mode = o.mode;
  e.delta = q.delta;
  e.s_start = q.s_start;
  e.s_end = q.s_end;
  e.ds = q.ds;
  e.dt = o.dt;
  e.inner_tol = q.inner_tol;
  e.inner_max_iter = q.inner_max_iter;
  e.n_trials = n_trials;
  return e;
}

ResultFormat format_of(const std::string& f) { return f == "json" ? ResultFormat::json : ResultFormat::csv; }

void write_record(const ResultRecord& record, const Options& o, std::ostream& out) {
  if (o.out.empty()) return;
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw InputError("cannot write " + o.out);
  write_results(record, format_of(o.format), file);
  if (format_of(o.format) == ResultFormat::csv) {
    auto ecdf_path = std::filesystem::path(o.out);
    ecdf_path.replace_extension(".ecdf.csv");
    std::ofstream ecdf(ecdf_path, std::ios::binary);
    if (!ecdf) throw InputError("cannot write " + ecdf_path.string());
    write_ecdf_csv(record, ecdf);
    out << "wrote " << o.out << " and " << ecdf_path.string() << '\n';
  } else {
    out << "wrote " << o.out << '\n';
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_batch(const TrialBatchResult& b, std::ostream& out) {
  out << "amplitude " << format_number(b.amplitude) << ": trials " << b.trials.size()
      << ", failed " << b.n_failed << ", best " << format_number(b.best) << ", mean "
      << format_number(b.mean) << ", std " << format_number(b.std) << '\n';
}

int cmd_solve(const Options& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = load(o);
  const double amplitude = o.amplitudes.empty() ? 0.1 : o.amplitudes.front();
  ResultRecord record;
  record.problem_id = loaded.id;
  record.objective = loaded.graph ? Objective::cut : Objective::energy;
  record.master_seed = o.seed;

  NoiseSpec noise;
  noise.amplitude = amplitude;
  noise.master_seed = o.seed;
  noise.n_trials = 1;
  const auto qcfg = quantum_config(o);
  record.config = echo_of(o, qcfg, 1);

  if (o.mode == "quantum") {
    auto batch = loaded.graph ? run_trials(*loaded.graph, noise, qcfg) : run_trials(loaded.model, noise, qcfg);
    if (batch.n_failed > 0) throw std::runtime_error("anneal failed: " + batch.trials.front().error);
    record.batches.push_back(std::move(batch));
  } else {
    // Classical: the same single noise draw, scaled by 1/lambda_max.
    const auto mode = o.mode == "classical-sc" ? ClassicalMode::self_consistent : ClassicalMode::gradient;
    const auto rescaled = rescale_model(loaded.model, {}, RescaleFallback::spectral_radius);
    CounterRng rng(substream_seed(o.seed, 0));
    std::vector<double> h(loaded.model.field);
    for (auto& x : h) x += rescaled.scale * rng.uniform(-amplitude, amplitude);
    const IsingModel noisy(loaded.model.couplings, std::move(h), loaded.model.offset);
    auto ccfg = default_classical_config(noisy, mode);
    if (o.dt > 0.0) ccfg.dt = o.dt;
    const auto result = classical_anneal(noisy, ccfg);
    if (result.breakdown) {
      throw BreakdownError("self-consistent iteration broke down at T = " +
                           format_number(*result.breakdown_temperature));
    }
    TrialBatchResult batch;
    batch.amplitude = amplitude;
    batch.objective = record.objective;
    TrialRecord t;
    t.seed = substream_seed(o.seed, 0);
    t.energy = ising_energy(loaded.model, result.spins);
    t.value = loaded.graph ? cut_value(*loaded.graph, result.spins) : t.energy;
    t.digest = result.spins.digest();
    t.nonconverged_steps = result.nonconverged_steps;
    batch.trials.push_back(t);
    summarize(batch);
    record.batches.push_back(std::move(batch));
  }
  record.wall_clock_seconds = seconds_since(start);
  const auto& t = record.batches.front().trials.front();
  out << loaded.id << " (" << loaded.model.size() << " spins, mode " << o.mode << ")\n";
  if (loaded.graph) out << "cut = " << format_number(t.value) << '\n';
  out << "energy = " << format_number(t.energy) << '\n';
  write_record(record, o, out);
  return kOk;
}

int cmd_benchmark(const Options& o, std::ostream& out) {
  if (o.mode != "quantum") throw InputError("benchmark runs the quantum anneal only (--mode quantum)");
  const auto start = std::chrono::steady_clock::now();
  const auto loaded = load(o);
  std::vector<double> amplitudes = o.amplitudes;
  if (amplitudes.empty()) amplitudes = {0.05, 0.1, 0.2, 0.4};
  NoiseSpec base;
  base.master_seed = o.seed;
  base.n_trials = o.trials;
  const auto qcfg = quantum_config(o);

  ResultRecord record;
  record.problem_id = loaded.id;
  record.objective = loaded.graph ? Objective::cut : Objective::energy;
  record.master_seed = o.seed;
  record.config = echo_of(o, qcfg, o.trials);
  record.batches = loaded.graph ? amplitude_sweep(*loaded.graph, amplitudes, base, qcfg)
                                : amplitude_sweep(loaded.model, amplitudes, base, qcfg);
  record.wall_clock_seconds = seconds_since(start);
  out << loaded.id << " (" << loaded.model.size() << " spins, " << o.trials
      << " trials per amplitude)\n";
  for (const auto& b : record.batches) print_batch(b, out);
  write_record(record, o, out);
  return kOk;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  const auto loaded = load(o);
  try {
    if (loaded.graph) {
      const auto r = exact_max_cut(*loaded.graph, Exec::parallel);
      out << loaded.id << ": max cut = " << format_number(r.best_value) << " (" << r.num_optima
          << " optimal partitions)\n";
    } else {
      const auto r = exact_ground_state(loaded.model, Exec::parallel);
      out << loaded.id << ": ground energy = " << format_number(r.best_value) << " ("
          << r.num_optima << " optima)\n";
    }
  } catch (const OracleSizeError& e) {
    throw InputError(e.what());
  }
  return kOk;
}

int cmd_compare_terms(const Options& o, std::ostream& out) {
  const auto rows = mixing_term_table(o.t_over_delta, o.points);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    if (!file) throw InputError("cannot write " + o.out);
    sink = &file;
  }
  *sink << "m,entropy_term,transverse_term\n";
  for (const auto& r : rows) {
    *sink << format_number(r.m) << ',' << format_number(r.entropy_term) << ','
          << format_number(r.transverse_term) << '\n';
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Mean-field annealing for Ising, QUBO and Max-Cut problems", "mfa"};
  app.require_subcommand(1);

  auto add_problem_flags = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Problem file (G-set edge list, or QUBO triplets)")->required();
    sub->add_option("--problem", o.problem, "Input kind")
        ->check(CLI::IsMember({"maxcut", "qubo"}))
        ->capture_default_str();
  };
  auto add_solver_flags = [&](CLI::App* sub) {
    sub->add_option("--mode", o.mode, "Solver: quantum (s-schedule), classical-gradient, classical-sc")
        ->check(CLI::IsMember({"quantum", "classical-gradient", "classical-sc"}))
        ->capture_default_str();
    sub->add_option("--ds", o.ds, "Schedule step in s (default 0.001)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--dt", o.dt, "Temperature step for classical modes (0 = T_start/1000)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--delta", o.delta, "Transverse field strength (default 1)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--seed", o.seed, "Master seed for the noise fields")->capture_default_str();
    sub->add_option("--threads", o.threads, "Worker threads (0 = all available)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--out", o.out, "Write the result record here");
    sub->add_option("--format", o.format, "Result format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "Single anneal with one noise draw");
  add_problem_flags(solve);
  add_solver_flags(solve);
  solve->add_option("--amplitude", o.amplitudes, "Noise amplitude A, h_i ~ unif(-A, A)/lambda_max (default 0.1)")
      ->check(CLI::NonNegativeNumber);

  auto* bench = app.add_subcommand("benchmark", "Noise-field trial ensembles over an amplitude sweep");
  add_problem_flags(bench);
  add_solver_flags(bench);
  bench->add_option("--amplitude", o.amplitudes, "Noise amplitude, repeatable (default 0.05 0.1 0.2 0.4)")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--trials", o.trials, "Trials per amplitude (default 200)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum for instances with N <= 24");
  add_problem_flags(oracle);
  oracle->add_option("--threads", o.threads, "Worker threads (0 = all available)")
      ->check(CLI::NonNegativeNumber);

  auto* terms = app.add_subcommand("compare-terms", "Entropy vs transverse mixing terms as CSV");
  terms->add_option("--t-over-delta", o.t_over_delta, "Temperature in units of Delta")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  terms->add_option("--points", o.points, "Number of samples")
      ->check(CLI::Range(std::size_t{2}, std::size_t{10000000}))
      ->capture_default_str();
  terms->add_option("--out", o.out, "Output CSV (default: standard output)");

  std::vector<std::string> argv_store;
  argv_store.emplace_back("mfa");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  set_thread_count(o.threads);
  try {
    if (*solve) return cmd_solve(o, out);
    if (*bench) return cmd_benchmark(o, out);
    if (*oracle) return cmd_oracle(o, out);
    return cmd_compare_terms(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const BreakdownError& e) {
    err << "breakdown: " << e.what() << '\n';
    return kSolverBreakdown;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace mfa::cli
