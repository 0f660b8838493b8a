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

#include "vartodd/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <utility>

namespace vartodd {

namespace {

// z values are processed in fixed-size chunks so that the set of explored
// z (and every RNG draw) is the same for any thread count.
constexpr std::size_t kZChunk = 8;

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
}

std::size_t generator_count(double gen_part, std::size_t dim) {
  if (dim == 0 || gen_part <= 0.0) return 0;
  const auto g = static_cast<std::size_t>(std::ceil(gen_part * static_cast<double>(dim) - 1e-12));
  return std::clamp<std::size_t>(g, 1, dim);
}

BitVector combine(std::span<const BitVector> gens, std::uint64_t mask) {
  BitVector y(gens.front().size());
  for (std::size_t i = 0; i < gens.size() && i < 64; ++i) {
    if ((mask >> i) & 1U) y ^= gens[i];
  }
  return y;
}

// Nonzero vectors of span(gens): all of them when 2^g <= samples, otherwise
// `samples` uniform random combinations with duplicates removed.
std::vector<BitVector> sample_span(std::span<const BitVector> gens, std::size_t samples, Rng& rng) {
  std::vector<BitVector> out;
  const std::size_t g = gens.size();
  if (g == 0 || samples == 0) return out;
  if (g < 63 && (std::uint64_t{1} << g) <= samples) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g); ++mask) {
      out.push_back(combine(gens, mask));
    }
    return out;
  }
  std::set<BitVector> seen;
  for (std::size_t s = 0; s < samples; ++s) {
    BitVector y(gens.front().size());
    for (std::size_t base = 0; base < g; base += 64) {
      const std::uint64_t bits = rng();
      for (std::size_t i = base; i < std::min(g, base + 64); ++i) {
        if ((bits >> (i - base)) & 1U) y ^= gens[i];
      }
    }
    if (y.any() && seen.insert(y).second) out.push_back(std::move(y));
  }
  return out;
}

// Local search over the generators for a y with large reduction.
BitVector greedy_y(const ActionEngine& eng, const BitVector& z, std::span<const BitVector> gens,
                   bool augmented, std::size_t& evals) {
  BitVector y(gens.front().size());
  long current = 0;
  for (int pass = 0; pass < 3; ++pass) {
    bool improved = false;
    for (const auto& g : gens) {
      BitVector trial = y ^ g;
      const long r = eng.reduction(z, trial, augmented);
      ++evals;
      if (r > current) {
        current = r;
        y = std::move(trial);
        improved = true;
      }
    }
    if (!improved) break;
  }
  return y;
}

struct ZResult {
  std::vector<Action> actions;
  std::size_t dimension = 0;
  std::size_t evals = 0;
};

ZResult explore_z(ActionEngine& eng, const BitVector& z, std::size_t ns_id, double gen_part,
                  std::size_t num_samples, std::uint64_t seed) {
  ZResult res;
  const bool aug = eng.augmented();
  const auto basis = eng.nullspace(z);
  res.dimension = basis.size();
  const std::size_t g = generator_count(gen_part, basis.size());
  if (g == 0) return res;
  const std::span<const BitVector> gens(basis.data(), g);

  Rng rng(seed);
  std::vector<BitVector> ys = sample_span(gens, num_samples, rng);
  ys.push_back(greedy_y(eng, z, gens, aug, res.evals));
  for (auto& y : ys) {
    if (y.none()) continue;
    const long red = eng.reduction(z, y, aug);
    ++res.evals;
    res.actions.push_back(Action{z, std::move(y), red, Origin::kFastTodd, ns_id, aug});
  }
  return res;
}

bool better_result(const ParityMatrix& a, const ParityMatrix& b) {
  if (a.column_count() != b.column_count()) return a.column_count() < b.column_count();
  return density(a) < density(b);
}

}  // namespace

IterationResult run_iteration(const ParityMatrix& p, const Policy& pol, Rng& rng,
                              const SearchOptions& opts) {
  IterationResult result;
  auto& diag = result.diagnostics;
  const std::size_t m = p.column_count();
  const std::size_t n = p.qubits();
  if (m == 0) return result;
  const std::size_t rho = m;
  const double dm = static_cast<double>(m);

  const long min_red = pol.min_reduction(rho);
  const long max_red = pol.max_reduction(rho);
  const std::size_t num_samples = pol.num_samples(rho);
  const double gen_part = pol.gen_part(rho);
  const std::size_t min_pool = pol.min_pool_size(rho);
  auto viable = [&](long r) { return r >= min_red && r <= max_red; };

  ActionEngine eng(p, opts.augment_z);
  std::vector<Candidate> candidates;
  std::set<std::pair<BitVector, BitVector>> seen;

  auto add = [&](Action a, std::size_t ns_dim) {
    if (!seen.emplace(a.z, a.y).second) return false;
    if (a.predicted_reduction == 0 && eng.is_permutation(a.z, a.y, a.augmented)) return false;
    Candidate c;
    c.features[0] = clamp01(static_cast<double>(a.predicted_reduction) / dm);
    c.features[1] = clamp01(static_cast<double>(ns_dim) / dm);
    c.features[2] = clamp01(static_cast<double>(eng.upper_bound(a.z)) / dm);
    c.features[3] = clamp01(static_cast<double>(a.y.popcount()) / dm);
    c.features[4] = clamp01(static_cast<double>(a.z.popcount()) / static_cast<double>(n));
    c.pool_score = pool_score(c.features, pol, rho);
    c.index = candidates.size();
    c.action = std::move(a);
    candidates.push_back(std::move(c));
    return true;
  };

  // TOHPE stage: every y in the common subspace is admissible for any z,
  // so each sampled y is paired with its best z.
  const auto& tohpe = eng.tohpe_basis();
  diag.tohpe_dimension = tohpe.size();
  std::size_t viable_count = 0;
  std::vector<BitVector> tohpe_z;
  {
    const std::size_t g = generator_count(gen_part, tohpe.size());
    if (g > 0) {
      const auto ys = sample_span(std::span(tohpe.data(), g), num_samples, rng);
      for (const auto& y : ys) {
        auto best = eng.best_z_for(y);
        ++diag.matrix_evals;
        if (!best) continue;
        const long red = best->second;
        Action a{best->first, y, red, Origin::kTohpe, 0, false};
        if (opts.augment_z) {
          a.y.resize(m + 2);
          a.augmented = true;
        }
        if (add(std::move(a), tohpe.size())) {
          ++diag.tohpe_candidates;
          if (viable(red)) ++viable_count;
          tohpe_z.push_back(best->first);
        }
      }
    }
  }

  // z values forwarded from TOHPE, best upper bound first.
  std::vector<BitVector> forwarded;
  {
    std::set<BitVector> uniq;
    for (const auto& z : tohpe_z) {
      if (uniq.insert(z).second) forwarded.push_back(z);
    }
    std::stable_sort(forwarded.begin(), forwarded.end(), [&](const BitVector& a, const BitVector& b) {
      return eng.upper_bound(a) > eng.upper_bound(b);
    });
    forwarded.resize(std::min(forwarded.size(), pol.tohpe_num_best(rho)));
  }

  const bool skip_expansion = pol.try_only_tohpe(rho) && viable_count >= min_pool;
  diag.expansion_skipped = skip_expansion;
  if (!skip_expansion) {
    std::vector<BitVector> order = forwarded;
    {
      std::set<BitVector> taken(forwarded.begin(), forwarded.end());
      std::vector<BitVector> rest;
      for (const auto& z : eng.z_candidates()) {
        if (taken.count(z) != 0) continue;
        if (!opts.augment_z && static_cast<long>(eng.upper_bound(z)) < min_red) continue;
        rest.push_back(z);
      }
      std::stable_sort(rest.begin(), rest.end(), [&](const BitVector& a, const BitVector& b) {
        return eng.upper_bound(a) > eng.upper_bound(b);
      });
      order.insert(order.end(), rest.begin(), rest.end());
    }

    const std::size_t min_z = pol.min_z_to_research(rho);
    bool done = false;
    for (std::size_t start = 0; start < order.size() && !done; start += kZChunk) {
      const std::size_t count = std::min(kZChunk, order.size() - start);
      std::vector<std::uint64_t> seeds(count);
      for (auto& s : seeds) s = rng();
      std::vector<ZResult> chunk(count);
      parallel_for(count, opts.threads, [&](std::size_t k) {
        chunk[k] = explore_z(eng, order[start + k], start + k + 1, gen_part, num_samples, seeds[k]);
      });
      for (std::size_t k = 0; k < count; ++k) {
        diag.matrix_evals += chunk[k].evals;
        for (auto& a : chunk[k].actions) {
          const long red = a.predicted_reduction;
          if (add(std::move(a), chunk[k].dimension)) {
            ++diag.expansion_candidates;
            if (viable(red)) ++viable_count;
          }
        }
        ++diag.z_explored;
        if (diag.z_explored >= min_z && viable_count >= min_pool) {
          done = true;
          break;
        }
      }
    }
  }

  // Pool construction.
  std::vector<std::size_t> ranked;
  for (const auto& c : candidates) {
    if (viable(c.action.predicted_reduction)) ranked.push_back(c.index);
  }
  auto by_score = [&](auto score_of) {
    return [&, score_of](std::size_t a, std::size_t b) {
      const double sa = score_of(candidates[a]);
      const double sb = score_of(candidates[b]);
      if (sa != sb) return sa > sb;
      const long ra = candidates[a].action.predicted_reduction;
      const long rb = candidates[b].action.predicted_reduction;
      if (ra != rb) return ra > rb;
      return a < b;
    };
  };
  std::sort(ranked.begin(), ranked.end(), by_score([](const Candidate& c) { return c.pool_score; }));

  const std::size_t max_pool = pol.max_pool_size(rho);
  const std::size_t per_ns = pol.max_from_single_ns(rho);
  const std::size_t max_tohpe = pol.max_tohpe(rho);
  std::vector<std::size_t> pool;
  std::map<std::size_t, std::size_t> per_ns_count;
  std::size_t tohpe_in_pool = 0;
  for (std::size_t idx : ranked) {
    if (pool.size() >= max_pool) break;
    const auto& a = candidates[idx].action;
    if (per_ns_count[a.nullspace_id] >= per_ns) continue;
    if (a.origin == Origin::kTohpe && tohpe_in_pool >= max_tohpe) continue;
    ++per_ns_count[a.nullspace_id];
    if (a.origin == Origin::kTohpe) ++tohpe_in_pool;
    pool.push_back(idx);
  }
  diag.pool_size = pool.size();
  if (pool.empty()) return result;

  // Final rescoring; the next-step TOHPE proxy is only computed when used.
  bool wants_proxy = pol.final_weights[5](rho) != 0.0;
  for (std::size_t idx : pool) {
    auto& c = candidates[idx];
    if (wants_proxy) {
      const ParityMatrix next = apply_action(p, c.action);
      ++diag.matrix_evals;
      c.features[5] = clamp01(static_cast<double>(tohpe_subspace(next).size()) / dm);
    }
    c.final_score = final_score(c.features, pol, rho);
    diag.best_predicted_reduction =
        std::max(diag.best_predicted_reduction, c.action.predicted_reduction);
    diag.pool_nullspace_ids.push_back(c.action.nullspace_id);
  }
  std::sort(pool.begin(), pool.end(), by_score([](const Candidate& c) { return c.final_score; }));

  std::vector<double> scores;
  scores.reserve(pool.size());
  for (std::size_t idx : pool) scores.push_back(candidates[idx].final_score);
  const auto draws = softmax_select(scores, pol.temperature(rho), pol.todd_width(rho), rng);

  std::size_t best = 0;
  for (std::size_t d = 0; d < draws.size(); ++d) {
    const Action& a = candidates[pool[draws[d]]].action;
    ParityMatrix next = apply_action(p, a);
    ++diag.matrix_evals;
    if (static_cast<long>(m) - static_cast<long>(next.column_count()) != a.predicted_reduction) {
      throw std::logic_error("run_iteration: predicted reduction disagrees with the applied result");
    }
    result.children.push_back(Child{a, std::move(next)});
    if (d > 0 && better_result(result.children[d].result, result.children[best].result)) best = d;
  }
  result.action = result.children[best].action;
  result.next = result.children[best].result;
  return result;
}

namespace {

struct Node {
  ParityMatrix state;
  std::shared_ptr<const Node> parent;
  std::optional<Action> action;
  std::size_t evals = 0;
};

Trajectory run_search(const ParityMatrix& p, const Policy& pol, const SearchBudget& budget,
                      std::uint64_t seed, const SearchOptions& opts, bool beam) {
  if (!budget.has_limit()) throw std::invalid_argument("search budget needs at least one finite limit");
  validate(pol);
  const auto started = std::chrono::steady_clock::now();
  Rng rng(seed);

  auto root = std::make_shared<const Node>(Node{simplify(p), nullptr, std::nullopt, 0});
  std::vector<std::shared_ptr<const Node>> frontier{root};
  std::shared_ptr<const Node> best = root;

  std::size_t patience = opts.patience;
  if (patience == 0) patience = pol.min_reduction(root->state.column_count()) <= 0 ? 5 : 1;

  std::size_t evals = 0;
  std::size_t iterations = 0;
  std::size_t stale = 0;
  StopReason reason = StopReason::kNoAction;

  while (true) {
    if ((budget.max_iterations && iterations >= *budget.max_iterations) ||
        (budget.max_matrix_evals && evals >= *budget.max_matrix_evals) ||
        (budget.wall_clock_seconds &&
         std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count() >=
             *budget.wall_clock_seconds)) {
      reason = StopReason::kBudget;
      break;
    }
    const std::size_t width = beam ? pol.beamsearch_width(best->state.column_count()) : 1;

    struct Expanded {
      std::shared_ptr<const Node> node;
      std::size_t order;
    };
    std::vector<Expanded> children;
    for (const auto& node : frontier) {
      auto res = run_iteration(node->state, pol, rng, opts);
      evals += res.diagnostics.matrix_evals;
      for (auto& child : res.children) {
        auto next = std::make_shared<const Node>(
            Node{std::move(child.result), node, std::move(child.action), 0});
        children.push_back({std::move(next), children.size()});
      }
    }
    ++iterations;
    if (children.empty()) {
      reason = StopReason::kNoAction;
      break;
    }
    std::stable_sort(children.begin(), children.end(), [](const Expanded& a, const Expanded& b) {
      return better_result(a.node->state, b.node->state);
    });

    std::vector<std::shared_ptr<const Node>> next_frontier;
    for (const auto& c : children) {
      if (next_frontier.size() >= width) break;
      const bool duplicate = std::any_of(next_frontier.begin(), next_frontier.end(), [&](const auto& f) {
        return f->state == c.node->state;
      });
      if (duplicate) continue;
      // Stamp the cumulative evaluation count on the surviving node.
      auto stamped = std::make_shared<const Node>(Node{c.node->state, c.node->parent, c.node->action, evals});
      next_frontier.push_back(std::move(stamped));
    }
    frontier = std::move(next_frontier);

    const bool improved = frontier.front()->state.column_count() < best->state.column_count();
    if (better_result(frontier.front()->state, best->state)) best = frontier.front();
    stale = improved ? 0 : stale + 1;
    if (stale >= patience) {
      reason = StopReason::kPatience;
      break;
    }
  }

  std::vector<const Node*> chain;
  for (const Node* n = best.get(); n != nullptr; n = n->parent.get()) chain.push_back(n);
  std::reverse(chain.begin(), chain.end());

  Trajectory t;
  t.seed = seed;
  t.policy_digest = policy_digest(pol);
  t.stop_reason = reason;
  t.iterations = iterations;
  t.total_matrix_evals = evals;
  for (const Node* n : chain) {
    t.states.push_back(n->state);
    t.column_counts.push_back(n->state.column_count());
    t.matrix_evals.push_back(n->evals);
    if (n->action) t.actions.push_back(*n->action);
  }
  return t;
}

}  // namespace

Trajectory optimize(const ParityMatrix& p, const Policy& pol, const SearchBudget& budget,
                    std::uint64_t seed, const SearchOptions& opts) {
  return run_search(p, pol, budget, seed, opts, false);
}

Trajectory optimize_beam(const ParityMatrix& p, const Policy& pol, const SearchBudget& budget,
                         std::uint64_t seed, const SearchOptions& opts) {
  return run_search(p, pol, budget, seed, opts, true);
}

std::string check_trajectory(const Trajectory& t) {
  if (t.states.empty()) return "trajectory has no states";
  if (t.actions.size() + 1 != t.states.size()) return "action count does not match state count";
  if (t.column_counts.size() != t.states.size()) return "column count list has wrong length";
  const SignatureTensor reference = signature_tensor(t.states.front());
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    if (t.column_counts[i] != t.states[i].column_count()) {
      return "column count mismatch at state " + std::to_string(i);
    }
    if (!tensors_equal(signature_tensor(t.states[i]), reference)) {
      return "signature tensor changed at state " + std::to_string(i);
    }
    if (i + 1 < t.states.size() && !(apply_action(t.states[i], t.actions[i]) == t.states[i + 1])) {
      return "state " + std::to_string(i + 1) + " is not the result of its action";
    }
  }
  return {};
}

void write_trajectory(std::ostream& out, const Trajectory& t) {
  if (t.states.empty() || t.actions.size() + 1 != t.states.size()) {
    throw std::invalid_argument("write_trajectory: need one action between consecutive states");
  }
  out << "vartodd-trajectory v1\n";
  out << "policy_digest " << t.policy_digest << '\n';
  out << "seed " << t.seed << '\n';
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    if (i > 0) {
      out << "---\n";
      out << t.actions[i - 1].z.to_string() << ' ' << t.actions[i - 1].y.to_string() << '\n';
    }
    if (i < t.matrix_evals.size()) out << "# matrix_evals " << t.matrix_evals[i] << '\n';
    write_parity_matrix(out, t.states[i]);
  }
}

Trajectory read_trajectory(std::istream& in) {
  auto expect_prefix = [&](const std::string& prefix) {
    std::string line;
    if (!std::getline(in, line) || line.rfind(prefix, 0) != 0) {
      throw ParseError("trajectory: expected '" + prefix + "'");
    }
    return line.substr(prefix.size());
  };
  Trajectory t;
  if (expect_prefix("vartodd-trajectory v1") != "") throw ParseError("trajectory: bad header");
  t.policy_digest = expect_prefix("policy_digest ");
  try {
    t.seed = std::stoull(expect_prefix("seed "));
  } catch (const std::logic_error&) {
    throw ParseError("trajectory: bad seed");
  }

  // Reads "# matrix_evals N" if present, then the matrix itself.
  auto read_state = [&] {
    std::size_t evals = 0;
    bool have_evals = false;
    while (in.peek() == '#') {
      std::string line;
      std::getline(in, line);
      const std::string key = "# matrix_evals ";
      if (line.rfind(key, 0) == 0) {
        evals = std::stoull(line.substr(key.size()));
        have_evals = true;
      }
    }
    t.states.push_back(read_parity_matrix(in));
    t.column_counts.push_back(t.states.back().column_count());
    if (have_evals) t.matrix_evals.push_back(evals);
  };

  read_state();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line != "---") throw ParseError("trajectory: expected '---' separator");
    if (!std::getline(in, line)) throw ParseError("trajectory: missing action line");
    const auto space = line.find(' ');
    if (space == std::string::npos) throw ParseError("trajectory: action line needs 'z y'");
    Action a;
    try {
      a.z = BitVector::from_string(line.substr(0, space));
      a.y = BitVector::from_string(line.substr(space + 1));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("trajectory: ") + e.what());
    }
    const std::size_t m = t.states.back().column_count();
    a.augmented = a.y.size() == m + 2;
    if (!a.augmented && a.y.size() != m) throw ParseError("trajectory: action y has wrong length");
    read_state();
    a.predicted_reduction = static_cast<long>(t.column_counts[t.column_counts.size() - 2]) -
                            static_cast<long>(t.column_counts.back());
    t.actions.push_back(std::move(a));
  }
  if (t.matrix_evals.size() != t.states.size()) t.matrix_evals.clear();
  if (!t.matrix_evals.empty()) t.total_matrix_evals = t.matrix_evals.back();
  t.iterations = t.actions.size();
  return t;
}

void save_trajectory(const std::string& path, const Trajectory& t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_trajectory(out, t);
}

Trajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_trajectory(in);
}

}  // namespace vartodd
