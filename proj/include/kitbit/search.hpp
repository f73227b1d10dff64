#pragma once

#include "kitbit/predictor.hpp"

#include <algorithm>
#include <chrono>
#include <boost/functional/hash.hpp>

#include <cstring>
#include <deque>
#include <unordered_set>
#include <optional>
#include <vector>

namespace kitbit {

enum class SearchStrategy { BFS, DFS };
enum class StopMode { FirstSolution, Exhaustive };

struct SearchBudget {
  long long max_states = 200000;  // 0 = unlimited
  long long max_millis = 10000;   // 0 = unlimited
};

struct SearchConfig {
  Catalog catalog;
  ConstancyConfig constancy;
  int max_depth = 4;
  SearchStrategy strategy = SearchStrategy::BFS;
  StopMode stop_mode = StopMode::FirstSolution;
  SearchBudget budget;
  ApplyOptions apply_options;
  int prediction_cap = 64;
};

/// S1Z/S2Z stop at the first solution; N1Z/N2Z search on and rank by MDL.
/// The trailing digit is the number of constancy levels demanded.
inline SearchConfig mode_config(const std::string& mode, Catalog catalog) {
  SearchConfig cfg;
  cfg.catalog = std::move(catalog);
  if (mode == "S1Z" || mode == "S2Z")
    cfg.stop_mode = StopMode::FirstSolution;
  else if (mode == "N1Z" || mode == "N2Z")
    cfg.stop_mode = StopMode::Exhaustive;
  else
    throw std::invalid_argument("unknown mode: " + mode);
  cfg.constancy.required_levels = (mode[1] == '2') ? 2 : 1;
  return cfg;
}

enum class SolutionKind { TypeA, TypeB };

struct Solution {
  StatePtr terminal;
  std::vector<KitaInstance> kitas;  // applied kitas; empty = BAS alone
  std::vector<int> ranks;           // catalog positions of `kitas`
  std::optional<Series> full;       // the complete input series
  int n_e = 0;                      // prefix length the pattern was found on
  int holdout = 0;                  // full.size() - n_e
  SolutionKind kind = SolutionKind::TypeA;
  int max_predictable = 0;
  long long discovery = 0;

  int depth() const {
    return kitas.empty() ? 1 : static_cast<int>(kitas.size());
  }

  std::string pattern_display() const {
    if (kitas.empty()) return "BASIC (only)";
    std::string s;
    for (size_t i = 0; i < kitas.size(); ++i) {
      if (i) s += ", ";
      s += kitas[i].display();
    }
    return s;
  }
};

/// Fewest kitas, then widest sequential reach, then catalog order, then
/// discovery order.
inline bool mdl_less(const Solution& a, const Solution& b) {
  size_t sa = std::max<size_t>(1, a.kitas.size());
  size_t sb = std::max<size_t>(1, b.kitas.size());
  if (sa != sb) return sa < sb;
  if (a.max_predictable != b.max_predictable)
    return a.max_predictable > b.max_predictable;
  if (a.ranks != b.ranks) return a.ranks < b.ranks;
  return a.discovery < b.discovery;
}

inline std::optional<Solution> select_mdl(std::vector<Solution> solutions) {
  if (solutions.empty()) return std::nullopt;
  auto it = std::min_element(solutions.begin(), solutions.end(), mdl_less);
  return *it;
}

namespace detail {

inline SolutionKind classify_terminal(const SearchState* terminal) {
  for (const SearchState* s = terminal; s; s = s->parent.get()) {
    if (s->applied_rank >= 0 && s->applied.kind == KitaKind::ANA &&
        s->applied.ana_offset > 0)
      return SolutionKind::TypeB;
  }
  for (size_t i = 0; i < terminal->edks.size(); ++i) {
    const auto& d = terminal->direct[i];
    if (d && d->ssym_pivot > 0) {
      int n = static_cast<int>(terminal->edks[i]->n());
      // mirror that never reaches back to the first element
      if (2 * d->ssym_pivot - n > 1) return SolutionKind::TypeB;
    }
  }
  return SolutionKind::TypeA;
}

}  // namespace detail

// Shared across every prefix attempt of one series. Individual attempts can
// be sliced so a single deep sweep cannot starve the later prefixes.
class BudgetTracker {
 public:
  explicit BudgetTracker(const SearchBudget& b)
      : budget_(b), start_(std::chrono::steady_clock::now()) {}

  void begin_attempt(long long cap) {
    attempt_start_ = states_;
    attempt_cap_ = cap;
  }

  bool charge_state() {
    ++states_;
    if (budget_.max_states > 0 && states_ > budget_.max_states) {
      exhausted_ = true;
      return false;
    }
    if (attempt_cap_ > 0 && states_ - attempt_start_ > attempt_cap_) {
      attempt_truncated_ = true;
      return false;
    }
    if (budget_.max_millis > 0 && (states_ & 0x7f) == 0) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - start_)
                    .count();
      if (ms > budget_.max_millis) {
        exhausted_ = true;
        return false;
      }
    }
    return true;
  }

  bool exhausted() const { return exhausted_; }
  bool any_attempt_truncated() const { return attempt_truncated_; }
  long long states() const { return states_; }

 private:
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  long long states_ = 0;
  long long attempt_start_ = 0;
  long long attempt_cap_ = 0;
  bool exhausted_ = false;
  bool attempt_truncated_ = false;
};

// Uninformed search over the kita state tree. next_batch() returns candidate
// terminal states: the first hit alone (FirstSolution) or every solution on
// the shallowest level that has one (Exhaustive), resumable level by level.
class Searcher {
 public:
  Searcher(const Series& series, const SearchConfig& cfg,
           BudgetTracker& budget)
      : cfg_(cfg), budget_(budget) {
    auto root = make_root_state(series, cfg_.constancy);
    budget_.charge_state();
    if (root->all_solved())
      found_.push_back(root);
    else
      queue_.push_back(root);
  }

  std::vector<StatePtr> next_batch() {
    if (cfg_.strategy == SearchStrategy::DFS) return next_batch_dfs();
    return next_batch_bfs();
  }

  bool exhausted_budget() const { return budget_.exhausted(); }

 private:
  std::vector<StatePtr> take_found() {
    std::vector<StatePtr> out;
    out.swap(found_);
    found_level_ = -1;
    return out;
  }

  // Different kita chains often meet in identical states (two reductions
  // compose into one, an extra DIV round-trips); only the first is kept.
  // Two independent 64-bit streams keep the collision odds negligible.
  static std::pair<uint64_t, uint64_t> state_signature(const SearchState& st) {
    uint64_t h1 = 1469598103934665603ULL;
    uint64_t h2 = 0x9e3779b97f4a7c15ULL;
    auto mix = [&](uint64_t x) {
      h1 = (h1 ^ x) * 1099511628211ULL;
      h2 ^= x + 0x9e3779b97f4a7c15ULL + (h2 << 6) + (h2 >> 2);
    };
    for (size_t i = 0; i < st.edks.size(); ++i) {
      mix(st.edks[i]->mode() == EdkMode::Ratios ? 2 : 3);
      if (st.direct[i]) {
        if (st.direct[i]->ssym_pivot > 0)
          mix(5);
        else if (st.direct[i]->periodic)
          mix(7);
        else
          mix(11);
      }
      for (const Value& v : st.edks[i]->base().elements()) mix(v.hash64());
      mix(0xfeedULL);
    }
    return {h1, h2};
  }

  std::vector<StatePtr> next_batch_bfs() {
    if (!found_.empty()) return take_found();
    while (!queue_.empty()) {
      // all states able to produce solutions at found_level_ are done once
      // the queue front reaches that level
      if (!found_.empty() && queue_.front()->applied_count >= found_level_)
        return take_found();
      StatePtr st = queue_.front();
      queue_.pop_front();
      if (st->applied_count >= cfg_.max_depth) continue;
      bool hit_here = false;
      for (size_t r = 0; r < cfg_.catalog.kitas.size(); ++r) {
        const KitaInstance& kita = cfg_.catalog.kitas[r];
        if (kita.kind == KitaKind::BAS) continue;
        StatePtr child = expand_state(st, kita, static_cast<int>(r),
                                      cfg_.constancy, cfg_.apply_options);
        if (!child) continue;
        if (!seen_.insert(state_signature(*child)).second) continue;
        if (!budget_.charge_state()) {
          queue_.clear();
          return take_found();
        }
        if (child->all_solved()) {
          found_.push_back(child);
          found_level_ = child->applied_count;
          hit_here = true;
        } else {
          queue_.push_back(child);
        }
      }
      if (hit_here && cfg_.stop_mode == StopMode::FirstSolution)
        return take_found();
    }
    return take_found();
  }

  std::vector<StatePtr> next_batch_dfs() {
    if (!dfs_started_) {
      dfs_started_ = true;
      dfs_stack_.assign(queue_.begin(), queue_.end());
      queue_.clear();
    }
    while (!dfs_stack_.empty()) {
      StatePtr st = dfs_stack_.back();
      dfs_stack_.pop_back();
      if (st->applied_count >= cfg_.max_depth) continue;
      for (size_t ri = cfg_.catalog.kitas.size(); ri-- > 0;) {
        const KitaInstance& kita = cfg_.catalog.kitas[ri];
        if (kita.kind == KitaKind::BAS) continue;
        StatePtr child = expand_state(st, kita, static_cast<int>(ri),
                                      cfg_.constancy, cfg_.apply_options);
        if (!child) continue;
        if (!seen_.insert(state_signature(*child)).second) continue;
        if (!budget_.charge_state()) {
          dfs_stack_.clear();
          return take_found();
        }
        if (child->all_solved()) {
          found_.push_back(child);
          if (cfg_.stop_mode == StopMode::FirstSolution) return take_found();
        } else {
          dfs_stack_.push_back(child);
        }
      }
      if (cfg_.stop_mode == StopMode::FirstSolution && !found_.empty())
        return take_found();
    }
    return take_found();
  }

  SearchConfig cfg_;
  BudgetTracker& budget_;
  std::deque<StatePtr> queue_;
  std::vector<StatePtr> dfs_stack_;
  bool dfs_started_ = false;
  std::vector<StatePtr> found_;
  struct SigHash {
    size_t operator()(const std::pair<uint64_t, uint64_t>& p) const {
      return static_cast<size_t>(p.first ^ (p.second * 0x9e3779b97f4a7c15ULL));
    }
  };
  std::unordered_set<std::pair<uint64_t, uint64_t>, SigHash> seen_;
  int found_level_ = -1;
};

namespace detail {

/// Builds a Solution from a terminal state, computing its predictive reach
/// and verifying the held-out suffix. nullopt when verification fails or an
/// inverse step cannot run.
inline std::optional<Solution> finalize_solution(
    const StatePtr& terminal, const Series& full, int n_e,
    const SearchConfig& cfg, long long discovery) {
  Solution sol{.terminal = terminal, .full = full};
  for (const SearchState* s = terminal.get(); s && s->applied_rank >= 0;
       s = s->parent.get()) {
    sol.kitas.push_back(s->applied);
    sol.ranks.push_back(s->applied_rank);
  }
  std::reverse(sol.kitas.begin(), sol.kitas.end());
  std::reverse(sol.ranks.begin(), sol.ranks.end());
  sol.n_e = n_e;
  sol.holdout = static_cast<int>(full.size()) - n_e;
  sol.discovery = discovery;

  size_t want = std::max<size_t>(static_cast<size_t>(sol.holdout),
                                 static_cast<size_t>(cfg.prediction_cap));
  std::vector<Value> ext;
  try {
    ext = extend_root(terminal.get(), cfg.constancy, want);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  if (ext.size() < static_cast<size_t>(sol.holdout)) return std::nullopt;
  double eps = cfg.constancy.epsilon();
  for (int i = 0; i < sol.holdout; ++i) {
    if (!approx_equal(ext[static_cast<size_t>(i)],
                      full.at(static_cast<size_t>(n_e + i)), eps))
      return std::nullopt;
  }
  sol.max_predictable = static_cast<int>(
      std::min<size_t>(ext.size(), static_cast<size_t>(cfg.prediction_cap)));
  sol.kind = classify_terminal(terminal.get());
  return sol;
}

}  // namespace detail

struct SolveOutcome {
  std::vector<Solution> solutions;  // MDL-ordered
  bool budget_exhausted = false;
  long long states = 0;
};

/// Full-series search (no held-out verification). FirstSolution returns the
/// first hit; Exhaustive returns every solution on the shallowest solving
/// level, MDL-ordered.
inline SolveOutcome solve(const Series& series, const SearchConfig& cfg) {
  SolveOutcome out;
  BudgetTracker budget(cfg.budget);
  try {
    Searcher searcher(series, cfg, budget);
    long long discovery = 0;
    while (true) {
      auto batch = searcher.next_batch();
      if (batch.empty()) break;
      for (const StatePtr& st : batch) {
        auto sol = detail::finalize_solution(
            st, series, static_cast<int>(series.size()), cfg, discovery++);
        if (sol) out.solutions.push_back(std::move(*sol));
      }
      if (!out.solutions.empty()) break;
      if (cfg.stop_mode == StopMode::FirstSolution) continue;
    }
  } catch (const DomainError&) {
    // root construction failed; leave no solutions
  }
  std::sort(out.solutions.begin(), out.solutions.end(), mdl_less);
  out.budget_exhausted = budget.exhausted();
  out.states = budget.states();
  return out;
}

struct PrefixSolveOutcome {
  std::optional<Solution> solution;
  bool budget_exhausted = false;
  long long states = 0;
};

/// Solves the shortest prefix whose pattern reproduces the rest of the
/// series, then falls back to the full series (structural solution, nothing
/// held out) when no prefix verifies. Depth is staged: all prefixes are
/// tried at depth 2 before anything explores deeper, which keeps the budget
/// on shallow patterns first.
inline PrefixSolveOutcome minimal_prefix_solve(const Series& series,
                                               const SearchConfig& cfg) {
  PrefixSolveOutcome out;
  int n = static_cast<int>(series.size());
  BudgetTracker budget(cfg.budget);
  long long discovery = 0;

  auto attempt = [&](int n_e, int depth_cap) -> std::optional<Solution> {
    SearchConfig staged = cfg;
    staged.max_depth = depth_cap;
    Series prefix = n_e == n ? series : series.prefix(static_cast<size_t>(n_e));
    Searcher searcher(prefix, staged, budget);
    while (true) {
      auto batch = searcher.next_batch();
      if (batch.empty()) return std::nullopt;
      std::vector<Solution> cands;
      for (const StatePtr& st : batch) {
        auto sol =
            detail::finalize_solution(st, series, n_e, cfg, discovery++);
        if (sol) cands.push_back(std::move(*sol));
      }
      std::sort(cands.begin(), cands.end(), mdl_less);
      if (!cands.empty()) return cands.front();
      if (cfg.stop_mode == StopMode::FirstSolution) return std::nullopt;
      // exhaustive mode: go one level deeper
    }
  };

  std::vector<int> stages;
  for (int d = std::min(2, cfg.max_depth); d <= cfg.max_depth; ++d)
    stages.push_back(d);
  auto slice_for = [&](int depth_cap) -> long long {
    if (cfg.budget.max_states <= 0) return 0;
    long long s = depth_cap >= 4 ? cfg.budget.max_states / 4
                                 : cfg.budget.max_states / 16;
    return std::max<long long>(s, 1000);
  };

  // every prefix at one depth before anything explores deeper; the
  // unverified full-length attempt closes each stage
  for (int depth_cap : stages) {
    for (int n_e = 3; n_e < n && !out.solution; ++n_e) {
      if (budget.exhausted()) break;
      budget.begin_attempt(slice_for(depth_cap));
      try {
        out.solution = attempt(n_e, depth_cap);
      } catch (const DomainError&) {
        // prefix root failed to build; try the next prefix
      }
    }
    if (!out.solution && !budget.exhausted() && n >= 3) {
      budget.begin_attempt(slice_for(depth_cap));
      try {
        out.solution = attempt(n, depth_cap);
      } catch (const DomainError&) {
      }
    }
    if (out.solution || budget.exhausted()) break;
  }
  out.budget_exhausted =
      !out.solution && (budget.exhausted() || budget.any_attempt_truncated());
  out.states = budget.states();
  return out;
}

struct PredictionResult {
  std::vector<Value> terms;
  bool truncated = false;  // the pattern's reach ended before `count`
};

/// Continuation of the full series. The pattern is re-anchored on all known
/// terms when it still solves there; otherwise the prefix-state extension is
/// used with the verified holdout terms skipped.
inline PredictionResult predict(const Solution& sol, const SearchConfig& cfg,
                                size_t count) {
  PredictionResult res;
  if (sol.holdout > 0) {
    StatePtr re = replay_pattern(*sol.full, sol.kitas, sol.ranks, cfg.constancy,
                                 cfg.apply_options);
    if (re) {
      try {
        res.terms = extend_root(re.get(), cfg.constancy, count);
        res.truncated = res.terms.size() < count;
        return res;
      } catch (const DomainError&) {
        // fall through to the prefix state
      }
    }
  }
  size_t h = static_cast<size_t>(sol.holdout);
  auto ext = extend_root(sol.terminal.get(), cfg.constancy, count + h);
  if (ext.size() > h) res.terms.assign(ext.begin() + h, ext.end());
  res.truncated = res.terms.size() < count;
  return res;
}

/// Replay-based classification of a verified solution.
inline SolutionKind classify(const Solution& sol) { return sol.kind; }

}  // namespace kitbit
