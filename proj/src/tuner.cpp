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

#include "vartodd/tuner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>
#include <utility>

namespace vartodd {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

double affine(double theta, double lo, double hi) {
  return lo + (theta + kLatentBound) / (2.0 * kLatentBound) * (hi - lo);
}

TransformKind parse_kind(const std::string& s) {
  if (s == "affine") return TransformKind::kAffine;
  if (s == "exp-scale") return TransformKind::kExpScale;
  if (s == "logistic") return TransformKind::kLogistic;
  if (s == "round-to-int") return TransformKind::kRoundToInt;
  if (s == "gate") return TransformKind::kGate;
  throw std::invalid_argument("unknown transform '" + s + "'");
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
  }
}

// Admissible value range per control; mapped values are clamped into it.
std::pair<double, double> admissible_range(const std::string& control) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (control == "temperature") return {kTauFloor, inf};
  if (control == "pool_exponent" || control == "final_exponent") return {1e-3, inf};
  if (control == "gen_part" || control == "try_only_tohpe") return {0.0, 1.0};
  if (control.rfind("pool_centers.", 0) == 0 || control.rfind("final_centers.", 0) == 0) return {0.0, 1.0};
  if (control.rfind("pool_weights.", 0) == 0 || control.rfind("final_weights.", 0) == 0) return {-inf, inf};
  if (control == "min_reduction" || control == "max_reduction") return {-inf, inf};
  if (control == "beamsearch_width" || control == "todd_width") return {1.0, inf};
  return {0.0, inf};
}

}  // namespace

double Transform::apply(double theta) const {
  switch (kind) {
    case TransformKind::kAffine:
      return affine(theta, lo, hi);
    case TransformKind::kExpScale:
      return std::pow(10.0, affine(theta, std::log10(lo), std::log10(hi)));
    case TransformKind::kLogistic:
      return lo + (hi - lo) / (1.0 + std::exp(-theta));
    case TransformKind::kRoundToInt:
      return std::round(affine(theta, lo, hi));
    case TransformKind::kGate:
      return theta > threshold ? 1.0 : 0.0;
  }
  return 0.0;
}

MappingSpec mapping_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("mapping must be an array");
  MappingSpec spec;
  const auto& names = policy_control_names();
  for (const auto& e : j) {
    reject_unknown_keys(e, {"control", "transform", "lo", "hi", "threshold", "rank_thr"}, "mapping entry");
    MappingEntry entry;
    entry.control = e.at("control").get<std::string>();
    if (std::find(names.begin(), names.end(), entry.control) == names.end()) {
      throw std::invalid_argument("mapping: unknown control '" + entry.control + "'");
    }
    entry.transform.kind = parse_kind(e.at("transform").get<std::string>());
    entry.transform.lo = e.value("lo", 0.0);
    entry.transform.hi = e.value("hi", 1.0);
    entry.transform.threshold = e.value("threshold", 0.0);
    if (entry.transform.kind == TransformKind::kExpScale &&
        (entry.transform.lo <= 0.0 || entry.transform.hi <= 0.0)) {
      throw std::invalid_argument("exp-scale bounds must be positive");
    }
    if (e.contains("rank_thr") && !e.at("rank_thr").is_null()) {
      entry.rank_thr = e.at("rank_thr").get<std::size_t>();
    }
    spec.entries.push_back(std::move(entry));
  }
  return spec;
}

Policy policy_mapping(const MappingSpec& spec, const LatentVector& theta, const Policy& base) {
  if (static_cast<std::size_t>(theta.size()) != spec.dimension()) {
    throw std::invalid_argument("policy_mapping: latent dimension does not match the mapping");
  }
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!(std::abs(theta[i]) <= kLatentBound)) {
      throw std::invalid_argument("policy_mapping: coordinate outside [-2, 2]");
    }
  }

  // control -> (threshold or none) -> value, in first-seen control order.
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::optional<double>, std::map<std::size_t, double>>> staged;
  for (std::size_t i = 0; i < spec.entries.size(); ++i) {
    const auto& e = spec.entries[i];
    const auto [lo, hi] = admissible_range(e.control);
    const double v = std::clamp(e.transform.apply(theta[static_cast<Eigen::Index>(i)]), lo, hi);
    if (!staged.count(e.control)) order.push_back(e.control);
    auto& slot = staged[e.control];
    if (e.rank_thr) {
      if (!slot.second.emplace(*e.rank_thr, v).second) {
        throw std::invalid_argument("policy_mapping: repeated rank_thr for " + e.control);
      }
    } else {
      if (slot.first) throw std::invalid_argument("policy_mapping: repeated base value for " + e.control);
      slot.first = v;
    }
  }

  Policy pol = base;
  for (const auto& control : order) {
    const auto& [head, stages] = staged.at(control);
    double first = 0.0;
    if (head) {
      first = *head;
    } else {
      // No stage-free entry: keep the base policy's opening value.
      const json current = to_json(base);
      const auto dot = control.find('.');
      json v = dot == std::string::npos ? current.at(control)
                                        : current.at(control.substr(0, dot))[std::stoul(control.substr(dot + 1))];
      if (v.is_object()) v = v.at("values").front();
      first = v.is_boolean() ? (v.get<bool>() ? 1.0 : 0.0) : v.get<double>();
    }
    std::vector<std::size_t> thresholds;
    std::vector<double> values{first};
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
      thresholds.push_back(it->first);
      values.push_back(it->second);
    }
    set_control(pol, control, Schedule<double>(std::move(thresholds), std::move(values)));
  }

  // Keep min_reduction <= max_reduction everywhere.
  long worst_min = pol.min_reduction.values().front();
  for (long v : pol.min_reduction.values()) worst_min = std::max(worst_min, v);
  try {
    validate(pol);
  } catch (const std::invalid_argument&) {
    std::vector<long> raised;
    for (long v : pol.max_reduction.values()) raised.push_back(std::max(v, worst_min));
    pol.max_reduction = Schedule<long>(pol.max_reduction.thresholds(), std::move(raised));
    validate(pol);
  }
  return pol;
}

FitnessReport fitness(const ParityMatrix& final_state, bool started_from_store, std::size_t start_rho,
                      const SignatureTensor& reference) {
  FitnessReport r;
  r.rho = final_state.column_count();
  r.density = density(final_state);
  r.valid = final_state.qubits() == reference.dimension() &&
            tensors_equal(signature_tensor(final_state), reference);
  r.penalty = started_from_store && r.rho >= start_rho ? kStorePenalty : 0.0;
  r.fitness = r.valid ? static_cast<double>(r.rho) + r.density + r.penalty
                      : std::numeric_limits<double>::infinity();
  return r;
}

PathStore::PathStore(SignatureTensor reference, std::string directory)
    : reference_(std::move(reference)), directory_(std::move(directory)) {}

std::size_t PathStore::insert(Trajectory t) {
  if (t.states.empty()) throw std::invalid_argument("PathStore: empty trajectory");
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const auto& s = t.states[i];
    if (s.qubits() != reference_.dimension() || !tensors_equal(signature_tensor(s), reference_)) {
      throw std::invalid_argument("PathStore: state " + std::to_string(i) +
                                  " does not match the benchmark tensor");
    }
  }
  paths_.push_back(std::move(t));
  return paths_.size() - 1;
}

const Trajectory& PathStore::path(std::size_t id) const {
  if (id >= paths_.size()) throw std::out_of_range("PathStore: unknown path " + std::to_string(id));
  return paths_[id];
}

std::optional<std::size_t> PathStore::best_path() const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (!best) {
      best = i;
      continue;
    }
    const auto& a = paths_[i].final_state();
    const auto& b = paths_[*best].final_state();
    if (a.column_count() < b.column_count() ||
        (a.column_count() == b.column_count() && density(a) < density(b))) {
      best = i;
    }
  }
  return best;
}

void PathStore::save() const {
  if (directory_.empty()) return;
  std::filesystem::create_directories(directory_);
  json index = json::array();
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    const std::string file = "path_" + std::to_string(i) + ".traj";
    save_trajectory((std::filesystem::path(directory_) / file).string(), paths_[i]);
    index.push_back({{"id", i}, {"file", file}, {"rho", paths_[i].column_counts}});
  }
  std::ofstream out(std::filesystem::path(directory_) / "index.json");
  out << json{{"paths", index}}.dump(2) << '\n';
}

PathStore PathStore::load(const std::string& directory, SignatureTensor reference) {
  PathStore store(std::move(reference), directory);
  const auto index_path = std::filesystem::path(directory) / "index.json";
  if (!std::filesystem::exists(index_path)) return store;
  std::ifstream in(index_path);
  const json index = json::parse(in);
  for (const auto& entry : index.at("paths")) {
    store.insert(load_trajectory((std::filesystem::path(directory) / entry.at("file").get<std::string>()).string()));
  }
  return store;
}

std::size_t restart_index(const Trajectory& path, std::size_t rank_thr) {
  std::size_t chosen = 0;
  bool found = false;
  for (std::size_t i = 0; i < path.column_counts.size(); ++i) {
    if (path.column_counts[i] > rank_thr) {
      chosen = i;
      found = true;
    }
  }
  return found ? chosen : 0;
}

ParityMatrix set_up_new_init(const PathStore& store, std::size_t path_num, std::size_t rank_thr) {
  const Trajectory& path = store.path(path_num);
  return path.states[restart_index(path, rank_thr)];
}

PsoResult pso_optimize_batch(const BatchObjective& objective, std::size_t d, const PsoOptions& options) {
  if (d == 0) throw std::invalid_argument("pso: dimension must be positive");
  if (options.swarm < 2) throw std::invalid_argument("pso: swarm needs at least two particles");
  Rng rng(options.seed);
  const double span = 2.0 * kLatentBound;
  const auto dim = static_cast<Eigen::Index>(d);
  auto uniform_vec = [&](double lo, double hi) {
    LatentVector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v[k] = lo + (hi - lo) * uniform01(rng);
    return v;
  };
  auto clamp_box = [](const LatentVector& v) {
    return LatentVector(v.cwiseMax(-kLatentBound).cwiseMin(kLatentBound));
  };

  std::vector<LatentVector> pos, vel, best_pos;
  std::vector<double> best_val(options.swarm, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < options.swarm; ++i) {
    pos.push_back(uniform_vec(-kLatentBound, kLatentBound));
    vel.push_back(uniform_vec(-0.5 * span, 0.5 * span) * 0.25);
  }
  best_pos = pos;

  PsoResult result;
  result.best = pos.front();
  auto evaluate = [&] {
    const auto values = objective(pos);
    if (values.size() != pos.size()) throw std::logic_error("pso: objective returned wrong batch size");
    result.evaluations += values.size();
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (values[i] < best_val[i]) {
        best_val[i] = values[i];
        best_pos[i] = pos[i];
      }
      if (values[i] < result.value) {
        result.value = values[i];
        result.best = pos[i];
      }
    }
  };

  evaluate();
  for (std::size_t it = 0; it < options.iterations; ++it) {
    if (options.should_stop && options.should_stop()) break;
    for (std::size_t i = 0; i < options.swarm; ++i) {
      const LatentVector r1 = uniform_vec(0.0, 1.0);
      const LatentVector r2 = uniform_vec(0.0, 1.0);
      vel[i] = options.inertia * vel[i] +
               options.cognitive * r1.cwiseProduct(best_pos[i] - pos[i]) +
               options.social * r2.cwiseProduct(result.best - pos[i]);
      vel[i] = vel[i].cwiseMax(-span).cwiseMin(span);
      pos[i] = clamp_box(pos[i] + vel[i]);
    }
    evaluate();
    ++result.iterations;
  }
  return result;
}

PsoResult pso_optimize(const std::function<double(const LatentVector&)>& objective, std::size_t d,
                       std::size_t swarm, std::size_t iterations, std::uint64_t seed) {
  PsoOptions options;
  options.swarm = swarm;
  options.iterations = iterations;
  options.seed = seed;
  return pso_optimize_batch(
      [&](const std::vector<LatentVector>& batch) {
        std::vector<double> out;
        out.reserve(batch.size());
        for (const auto& x : batch) out.push_back(objective(x));
        return out;
      },
      d, options);
}

TunerConfig tuner_config_from_json(const json& j) {
  reject_unknown_keys(j, {"mapping", "base_policy", "pso", "repetitions", "fresh_every", "eval_budget",
                          "wall_clock_seconds", "store", "threads", "augment_z", "patience"},
                      "tuner config");
  TunerConfig cfg;
  if (j.contains("mapping")) cfg.mapping = mapping_from_json(j.at("mapping"));
  if (j.contains("base_policy")) cfg.base_policy = policy_from_json(j.at("base_policy"));
  if (j.contains("pso")) {
    const auto& p = j.at("pso");
    reject_unknown_keys(p, {"swarm", "iterations", "inertia", "cognitive", "social"}, "pso");
    cfg.pso.swarm = p.value("swarm", cfg.pso.swarm);
    cfg.pso.iterations = p.value("iterations", cfg.pso.iterations);
    cfg.pso.inertia = p.value("inertia", cfg.pso.inertia);
    cfg.pso.cognitive = p.value("cognitive", cfg.pso.cognitive);
    cfg.pso.social = p.value("social", cfg.pso.social);
  }
  cfg.repetitions = j.value("repetitions", cfg.repetitions);
  cfg.fresh_every = j.value("fresh_every", cfg.fresh_every);
  if (cfg.repetitions == 0 || cfg.fresh_every == 0) {
    throw std::invalid_argument("tuner config: repetitions and fresh_every must be positive");
  }
  if (j.contains("eval_budget")) {
    const auto& b = j.at("eval_budget");
    reject_unknown_keys(b, {"max_iterations", "max_matrix_evals", "wall_clock_seconds"}, "eval_budget");
    SearchBudget budget;
    if (b.contains("max_iterations")) budget.max_iterations = b.at("max_iterations").get<std::size_t>();
    if (b.contains("max_matrix_evals")) budget.max_matrix_evals = b.at("max_matrix_evals").get<std::size_t>();
    if (b.contains("wall_clock_seconds")) budget.wall_clock_seconds = b.at("wall_clock_seconds").get<double>();
    if (!budget.has_limit()) throw std::invalid_argument("eval_budget needs at least one limit");
    cfg.eval_budget = budget;
  }
  if (j.contains("wall_clock_seconds")) cfg.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  cfg.store_path = j.value("store", std::string{});
  cfg.threads = j.value("threads", 1U);
  cfg.search.augment_z = j.value("augment_z", false);
  cfg.search.patience = j.value("patience", std::size_t{0});
  return cfg;
}

TunerConfig load_tuner_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return tuner_config_from_json(json::parse(in));
}

namespace {

struct EvalOutcome {
  EvaluationRecord record;
  std::optional<Trajectory> best_run;       // spliced onto the source path when restarted
  std::size_t matrix_evals = 0;
};

// Lower quantile of a column-count sequence, q in (0, 1).
std::size_t rho_quantile(std::vector<std::size_t> rhos, double q) {
  std::sort(rhos.begin(), rhos.end());
  const auto k = static_cast<std::size_t>(q * static_cast<double>(rhos.size() - 1));
  return rhos[k];
}

Trajectory splice(const Trajectory& prefix, std::size_t upto, const Trajectory& suffix) {
  Trajectory t;
  t.seed = suffix.seed;
  t.policy_digest = suffix.policy_digest;
  t.stop_reason = suffix.stop_reason;
  const std::size_t base_evals = prefix.matrix_evals.empty() ? 0 : prefix.matrix_evals[upto];
  for (std::size_t i = 0; i <= upto; ++i) {
    t.states.push_back(prefix.states[i]);
    t.column_counts.push_back(prefix.column_counts[i]);
    t.matrix_evals.push_back(prefix.matrix_evals.empty() ? 0 : prefix.matrix_evals[i]);
    if (i < upto) t.actions.push_back(prefix.actions[i]);
  }
  for (std::size_t i = 1; i < suffix.states.size(); ++i) {
    t.states.push_back(suffix.states[i]);
    t.column_counts.push_back(suffix.column_counts[i]);
    t.matrix_evals.push_back(base_evals + (suffix.matrix_evals.empty() ? 0 : suffix.matrix_evals[i]));
    t.actions.push_back(suffix.actions[i - 1]);
  }
  t.iterations = t.actions.size();
  t.total_matrix_evals = t.matrix_evals.back();
  return t;
}

}  // namespace

TuneResult tune(const ParityMatrix& benchmark, const TunerConfig& config, PathStore& store,
                std::uint64_t seed) {
  if (!config.eval_budget.has_limit()) throw std::invalid_argument("tune: evaluation budget needs a limit");
  const auto started = std::chrono::steady_clock::now();
  const SignatureTensor& reference = store.reference();
  if (!tensors_equal(signature_tensor(benchmark), reference)) {
    throw std::invalid_argument("tune: benchmark does not match the store tensor");
  }
  const ParityMatrix start_fresh = simplify(benchmark);

  TuneResult result;
  result.best_policy = config.base_policy;
  result.best_theta = LatentVector::Zero(static_cast<Eigen::Index>(config.mapping.dimension()));
  std::size_t eval_counter = 0;

  auto evaluate_one = [&](const LatentVector& theta, std::size_t eval_index) {
    EvalOutcome out;
    out.record.index = eval_index;
    out.record.theta = theta;
    const Policy pol = policy_mapping(config.mapping, theta, config.base_policy);

    // Stage schedule: 1 fresh start per fresh_every evaluations once the
    // store holds a path; restarts cycle through quantiles of its rhos.
    const auto best_id = store.best_path();
    const std::size_t phase = eval_index % config.fresh_every;
    std::size_t source_index = 0;
    ParityMatrix start = start_fresh;
    if (best_id && phase != 0) {
      const Trajectory& path = store.path(*best_id);
      const double q = static_cast<double>(phase) / static_cast<double>(config.fresh_every);
      const std::size_t rank_thr = rho_quantile(path.column_counts, q);
      source_index = restart_index(path, rank_thr);
      start = path.states[source_index];
      out.record.from_store = true;
    }
    out.record.start_rho = start.column_count();

    double best_fit = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < config.repetitions; ++r) {
      const std::uint64_t run_seed = derive_seed(seed, eval_index, r);
      Trajectory run = optimize_beam(start, pol, config.eval_budget, run_seed, config.search);
      out.matrix_evals += run.total_matrix_evals;
      const FitnessReport rep = fitness(run.final_state(), out.record.from_store, out.record.start_rho, reference);
      out.record.repetition_rhos.push_back(rep.rho);
      if (rep.fitness < best_fit || r == 0) {
        best_fit = rep.fitness;
        out.record.report = rep;
        if (rep.valid) {
          out.best_run = out.record.from_store ? splice(store.path(*best_id), source_index, run) : std::move(run);
        } else {
          out.best_run.reset();
        }
      }
    }
    return out;
  };

  auto batch_objective = [&](const std::vector<LatentVector>& batch) {
    std::vector<EvalOutcome> outcomes(batch.size());
    const std::size_t first = eval_counter;
    const unsigned threads = std::max(1U, config.threads);
    if (threads <= 1 || batch.size() <= 1) {
      for (std::size_t i = 0; i < batch.size(); ++i) outcomes[i] = evaluate_one(batch[i], first + i);
    } else {
      std::vector<std::jthread> workers;
      const std::size_t count = std::min<std::size_t>(threads, batch.size());
      for (std::size_t w = 0; w < count; ++w) {
        workers.emplace_back([&, w] {
          for (std::size_t i = w; i < batch.size(); i += count) outcomes[i] = evaluate_one(batch[i], first + i);
        });
      }
    }
    eval_counter += batch.size();

    // Commit in particle order.
    std::vector<double> values;
    values.reserve(batch.size());
    for (auto& o : outcomes) {
      result.matrix_evals += o.matrix_evals;
      ++result.evaluations;
      values.push_back(o.record.report.fitness);
      if (!o.record.report.valid) continue;
      // Store inserts are re-verified against the benchmark tensor.
      if (o.best_run) {
        const auto best_id = store.best_path();
        const bool improves = !best_id || [&] {
          const auto& cur = store.path(*best_id).final_state();
          const auto& cand = o.best_run->final_state();
          return cand.column_count() < cur.column_count() ||
                 (cand.column_count() == cur.column_count() && density(cand) < density(cur));
        }();
        if (improves) store.insert(std::move(*o.best_run));
      }
      if (o.record.report.fitness < result.best_report.fitness) {
        result.best_report = o.record.report;
        result.best_theta = o.record.theta;
        result.best_policy = policy_mapping(config.mapping, o.record.theta, config.base_policy);
      }
      result.leaderboard.push_back(std::move(o.record));
    }
    return values;
  };

  if (config.mapping.dimension() == 0) {
    // Nothing to tune: evaluate the base policy once per stage slot.
    batch_objective({LatentVector()});
  } else {
    PsoOptions pso = config.pso;
    pso.seed = derive_seed(seed, 0x5053, 0);
    if (config.wall_clock_seconds) {
      const double limit = *config.wall_clock_seconds;
      pso.should_stop = [started, limit] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() >= limit;
      };
    }
    pso_optimize_batch(batch_objective, config.mapping.dimension(), pso);
  }

  std::stable_sort(result.leaderboard.begin(), result.leaderboard.end(),
                   [](const EvaluationRecord& a, const EvaluationRecord& b) {
                     if (a.report.fitness != b.report.fitness) return a.report.fitness < b.report.fitness;
                     return a.index < b.index;
                   });
  // Re-check the winner independently of the search path.
  if (result.best_report.valid) {
    const auto best_id = store.best_path();
    if (best_id) {
      const auto& final_state = store.path(*best_id).final_state();
      if (!tensors_equal(signature_tensor(final_state), reference)) {
        throw std::logic_error("tune: stored best path lost the benchmark tensor");
      }
    }
  }
  return result;
}

json leaderboard_to_json(const TuneResult& result) {
  json rows = json::array();
  for (const auto& r : result.leaderboard) {
    std::vector<double> theta(r.theta.data(), r.theta.data() + r.theta.size());
    rows.push_back({{"evaluation", r.index},
                    {"from_store", r.from_store},
                    {"start_rho", r.start_rho},
                    {"rho", r.report.rho},
                    {"density", r.report.density},
                    {"penalty", r.report.penalty},
                    {"fitness", r.report.fitness},
                    {"valid", r.report.valid},
                    {"repetition_rhos", r.repetition_rhos},
                    {"theta", theta}});
  }
  return json{{"evaluations", result.evaluations},
              {"matrix_evals", result.matrix_evals},
              {"best", {{"rho", result.best_report.rho},
                        {"density", result.best_report.density},
                        {"penalty", result.best_report.penalty},
                        {"fitness", result.best_report.fitness},
                        {"valid", result.best_report.valid}}},
              {"leaderboard", rows}};
}

}  // namespace vartodd
