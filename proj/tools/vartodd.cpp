// Copyright 2026 The VarTODD Authors
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

// vartodd: generate, optimize, tune and check parity matrices.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vartodd/benchmarks.hpp"
#include "vartodd/parity.hpp"
#include "vartodd/policy.hpp"
#include "vartodd/search.hpp"
#include "vartodd/tuner.hpp"

namespace {

using namespace vartodd;
using nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kMalformedInput = 2,
  kBudgetExhausted = 3,
  kVerificationFailed = 4,
};

// Raised for unreadable or malformed input files.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
auto read_input(const std::string& what, F&& load) {
  try {
    return load();
  } catch (const std::exception& e) {
    throw InputError(what + ": " + e.what());
  }
}

bool is_trajectory_file(const std::string& path) {
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  return first == "vartodd-trajectory v1";
}

// A parity matrix file, or the final state of a trajectory file.
ParityMatrix load_matrix_or_final(const std::string& path) {
  return read_input(path, [&] {
    if (is_trajectory_file(path)) return load_trajectory(path).final_state();
    return load_parity_matrix(path);
  });
}

unsigned resolve_threads(unsigned flag) {
  if (const char* env = std::getenv("VARTODD_THREADS"); env != nullptr && *env != '\0') {
    try {
      const unsigned long v = std::stoul(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid VARTODD_THREADS='" << env << "'\n";
  }
  return flag == 0 ? 1 : flag;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::kNoAction: return "no_action";
    case StopReason::kPatience: return "patience";
    case StopReason::kBudget: return "budget";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::size_t gf2n = 0;
  std::string modulus;
  std::vector<std::size_t> random;
  std::uint64_t seed = 1;
  std::string output;
};

int run_gen(const GenArgs& a) {
  std::ostringstream out;
  if (a.gf2n != 0) {
    MultiplicationSpec spec;
    spec.n = a.gf2n;
    try {
      spec.modulus = a.modulus.empty() ? default_modulus(a.gf2n) : parse_modulus(a.modulus);
    } catch (const std::invalid_argument& e) {
      std::cerr << "gen: " << e.what() << '\n';
      return kUsage;
    }
    Gf2nBenchmark b;
    try {
      b = gen_gf2n(spec);
    } catch (const std::invalid_argument& e) {
      std::cerr << "gen: " << e.what() << '\n';
      return kUsage;
    }
    out << "# GF(2^" << spec.n << ") multiplication, modulus " << format_modulus(spec.modulus) << '\n'
        << "# " << b.terms << " trilinear terms, " << b.raw_columns << " columns before simplification\n"
        << "# naive CCZ network: not a curated starting circuit\n";
    write_parity_matrix(out, b.matrix);
  } else {
    if (a.random.size() != 2 || a.random[0] == 0 || a.random[1] == 0) {
      std::cerr << "gen: --random needs two positive integers n m\n";
      return kUsage;
    }
    out << "# random " << a.random[0] << "x" << a.random[1] << ", seed " << a.seed << '\n';
    write_parity_matrix(out, gen_random(a.random[0], a.random[1], a.seed));
  }
  write_text(a.output, out.str());
  return kOk;
}

// ---------------------------------------------------------------------------

struct OptimizeArgs {
  std::string matrix;
  std::string policy;
  std::string greedy;
  std::uint64_t seed = 1;
  std::optional<std::size_t> iterations;
  std::optional<std::size_t> evals;
  std::optional<double> seconds;
  std::size_t patience = 0;
  bool augment_z = false;
  unsigned threads = 1;
  std::string trajectory;
  std::string final_matrix;
};

int run_optimize(const OptimizeArgs& a) {
  const ParityMatrix input = read_input(a.matrix, [&] { return load_parity_matrix(a.matrix); });
  Policy pol = default_policy();
  if (!a.greedy.empty()) {
    pol = greedy_preset(a.greedy == "max" ? GreedyKind::kMax : GreedyKind::kMin);
  }
  if (!a.policy.empty()) pol = read_input(a.policy, [&] { return load_policy(a.policy); });

  SearchBudget budget;
  budget.max_iterations = a.iterations;
  budget.max_matrix_evals = a.evals;
  budget.wall_clock_seconds = a.seconds;
  if (!budget.has_limit()) budget.max_iterations = 10000;

  SearchOptions opts;
  opts.patience = a.patience;
  opts.augment_z = a.augment_z;
  opts.threads = resolve_threads(a.threads);

  const Trajectory t = optimize_beam(input, pol, budget, a.seed, opts);
  const ParityMatrix& best = t.final_state();
  const bool equivalent = tensors_equal(signature_tensor(best), signature_tensor(input));

  if (!a.trajectory.empty()) save_trajectory(a.trajectory, t);
  if (!a.final_matrix.empty()) save_parity_matrix(a.final_matrix, best, {"optimized from " + a.matrix});

  const json summary = {
      {"input_rho", input.column_count()},
      {"start_rho", t.column_counts.front()},
      {"final_rho", t.final_rho()},
      {"final_density", density(best)},
      {"fitness", static_cast<double>(t.final_rho()) + density(best)},
      {"iterations", t.iterations},
      {"matrix_evals", t.total_matrix_evals},
      {"stop_reason", stop_reason_name(t.stop_reason)},
      {"seed", a.seed},
      {"policy_digest", t.policy_digest},
      {"equivalent", equivalent},
  };
  std::cout << summary.dump(2) << '\n';

  if (!equivalent) return kVerificationFailed;
  if (t.stop_reason == StopReason::kBudget && t.iterations == 0) {
    std::cerr << "optimize: budget exhausted before the first iteration\n";
    return kBudgetExhausted;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct TuneArgs {
  std::string matrix;
  std::string config;
  std::uint64_t seed = 1;
  std::string store;
  std::string policy_out;
  std::string leaderboard;
  unsigned threads = 1;
};

int run_tune(const TuneArgs& a) {
  const ParityMatrix input = read_input(a.matrix, [&] { return load_parity_matrix(a.matrix); });
  TunerConfig cfg = read_input(a.config, [&] { return load_tuner_config(a.config); });
  if (!a.store.empty()) cfg.store_path = a.store;
  cfg.threads = resolve_threads(a.threads != 1 ? a.threads : cfg.threads);
  cfg.search.threads = 1;

  const SignatureTensor reference = signature_tensor(input);
  PathStore store = cfg.store_path.empty()
                        ? PathStore(reference)
                        : read_input(cfg.store_path, [&] { return PathStore::load(cfg.store_path, reference); });

  const TuneResult r = tune(input, cfg, store, a.seed);
  store.save();

  const json board = leaderboard_to_json(r);
  if (!a.leaderboard.empty()) write_text(a.leaderboard, board.dump(2) + '\n');
  if (!a.policy_out.empty()) write_text(a.policy_out, to_json(r.best_policy).dump(2) + '\n');

  json summary = board;
  summary.erase("leaderboard");
  summary["policy_digest"] = policy_digest(r.best_policy);
  summary["store_paths"] = store.size();
  std::cout << summary.dump(2) << '\n';
  return r.best_report.valid ? kOk : kBudgetExhausted;
}

// ---------------------------------------------------------------------------

int run_verify(const std::string& a_path, const std::string& b_path) {
  const ParityMatrix a = load_matrix_or_final(a_path);
  const ParityMatrix b = load_matrix_or_final(b_path);
  if (a.qubits() != b.qubits()) {
    std::cout << "qubit counts differ: " << a.qubits() << " vs " << b.qubits() << '\n';
    return kVerificationFailed;
  }
  for (const auto& path : {a_path, b_path}) {
    if (!is_trajectory_file(path)) continue;
    const std::string problem = check_trajectory(load_trajectory(path));
    if (!problem.empty()) {
      std::cout << path << ": " << problem << '\n';
      return kVerificationFailed;
    }
  }
  const VerifyReport r = verify(a, b);
  const json report = {
      {"equivalent", r.equivalent}, {"rho_a", r.rho_a},           {"rho_b", r.rho_b},
      {"density_a", r.density_a},   {"density_b", r.density_b}, {"fitness_delta", r.fitness_delta},
  };
  std::cout << report.dump(2) << '\n';
  return r.equivalent ? kOk : kVerificationFailed;
}

int run_stats(const std::string& path, const std::string& output) {
  const Trajectory t = read_input(path, [&] { return load_trajectory(path); });
  std::ostringstream csv;
  csv << "iteration,matrix_evals,best_rho\n";
  std::size_t best = t.column_counts.front();
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    best = std::min(best, t.column_counts[i]);
    csv << i << ',' << (t.matrix_evals.empty() ? 0 : t.matrix_evals[i]) << ',' << best << '\n';
  }
  write_text(output, csv.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity-matrix T-count optimizer"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a benchmark or random parity matrix");
  auto* gf2n_opt = gen_cmd->add_option("--gf2n", gen.gf2n, "GF(2^n) multiplier benchmark")->check(CLI::Range(2, 16));
  gen_cmd->add_option("--modulus", gen.modulus, "Irreducible modulus, highest coefficient first")->needs(gf2n_opt);
  auto* random_opt = gen_cmd->add_option("--random", gen.random, "Random instance: n m")->expected(2);
  gen_cmd->add_option("--seed", gen.seed, "Seed for --random");
  gen_cmd->add_option("-o,--output", gen.output, "Output file (default stdout)");
  gf2n_opt->excludes(random_opt);
  random_opt->excludes(gf2n_opt);

  OptimizeArgs opt;
  auto* opt_cmd = app.add_subcommand("optimize", "Reduce the column count of a parity matrix");
  opt_cmd->add_option("matrix", opt.matrix, "Input parity matrix")->required();
  auto* policy_opt = opt_cmd->add_option("--policy", opt.policy, "Policy JSON");
  opt_cmd->add_option("--greedy", opt.greedy, "Greedy preset")
      ->check(CLI::IsMember({"max", "min"}))
      ->excludes(policy_opt);
  opt_cmd->add_option("--seed", opt.seed, "Random seed");
  opt_cmd->add_option("--iterations", opt.iterations, "Iteration budget");
  opt_cmd->add_option("--evals", opt.evals, "Matrix-evaluation budget");
  opt_cmd->add_option("--seconds", opt.seconds, "Wall-clock budget");
  opt_cmd->add_option("--patience", opt.patience, "Non-improving iterations before stopping");
  opt_cmd->add_flag("--augment-z", opt.augment_z, "Solve N_z on [P | z | z]");
  opt_cmd->add_option("--threads", opt.threads, "Worker threads");
  opt_cmd->add_option("-o,--trajectory", opt.trajectory, "Trajectory output file");
  opt_cmd->add_option("--final", opt.final_matrix, "Write the best matrix here");

  TuneArgs tn;
  auto* tune_cmd = app.add_subcommand("tune", "Tune a policy for one benchmark");
  tune_cmd->add_option("matrix", tn.matrix, "Benchmark parity matrix")->required();
  tune_cmd->add_option("--config", tn.config, "Tuner config JSON")->required();
  tune_cmd->add_option("--seed", tn.seed, "Random seed");
  tune_cmd->add_option("--store", tn.store, "Path store directory");
  tune_cmd->add_option("--policy-out", tn.policy_out, "Write the best policy here");
  tune_cmd->add_option("--leaderboard", tn.leaderboard, "Write the leaderboard JSON here");
  tune_cmd->add_option("--threads", tn.threads, "Worker threads");

  std::string verify_a, verify_b;
  auto* verify_cmd = app.add_subcommand("verify", "Compare the signature tensors of two matrices");
  verify_cmd->add_option("a", verify_a, "Matrix or trajectory")->required();
  verify_cmd->add_option("b", verify_b, "Matrix or trajectory")->required();

  std::string stats_in, stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "Best-so-far column count per iteration as CSV");
  stats_cmd->add_option("trajectory", stats_in, "Trajectory file")->required();
  stats_cmd->add_option("-o,--output", stats_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen_cmd) {
      if (gen.gf2n == 0 && gen.random.empty()) {
        std::cerr << "gen: one of --gf2n or --random is required\n";
        return kUsage;
      }
      return run_gen(gen);
    }
    if (*opt_cmd) return run_optimize(opt);
    if (*tune_cmd) return run_tune(tn);
    if (*verify_cmd) return run_verify(verify_a, verify_b);
    if (*stats_cmd) return run_stats(stats_in, stats_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMalformedInput;
  }
  return kUsage;
}
