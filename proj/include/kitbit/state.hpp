#pragma once

#include "kitbit/apply.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace kitbit {

// One vertex of the search tree: an ordered list of edks, the kita that
// produced them, per-edk solved flags and parent positions.
struct SearchState {
  std::shared_ptr<const SearchState> parent;
  KitaInstance applied;   // undefined at the root
  int applied_rank = -1;  // catalog index; -1 at the root
  int applied_count = 0;  // kitas on the path from the root

  std::vector<std::shared_ptr<const Edk>> edks;
  std::vector<int> parent_index;      // position in parent->edks
  std::vector<int> child_ordinal;     // among siblings from the same parent
  std::vector<int> remainder_prefix;  // FOC: leading R_m elements per child
  std::vector<char> solved;
  std::vector<std::optional<DirectPrediction>> direct;

  bool all_solved() const {
    for (char c : solved)
      if (!c) return false;
    return true;
  }
};

using StatePtr = std::shared_ptr<const SearchState>;

inline StatePtr make_root_state(const Series& series,
                                const ConstancyConfig& cfg) {
  auto st = std::make_shared<SearchState>();
  st->edks.push_back(
      std::make_shared<Edk>(Edk::build(series, EdkMode::Differences, cfg)));
  st->parent_index.push_back(-1);
  st->child_ordinal.push_back(0);
  st->remainder_prefix.push_back(0);
  st->solved.push_back(st->edks[0]->is_solution(cfg) ? 1 : 0);
  st->direct.emplace_back();
  return st;
}

/// Applies one kita to every unsolved edk of a state; solved edks are carried
/// forward untouched. nullopt when the kita fails anywhere or the transition
/// changes nothing.
inline StatePtr expand_state(const StatePtr& st, const KitaInstance& kita,
                             int rank, const ConstancyConfig& cfg,
                             const ApplyOptions& opts) {
  auto next = std::make_shared<SearchState>();
  next->parent = st;
  next->applied = kita;
  next->applied_rank = rank;
  next->applied_count = st->applied_count + 1;

  bool changed = false;
  for (size_t i = 0; i < st->edks.size(); ++i) {
    if (st->solved[i]) {
      next->edks.push_back(st->edks[i]);
      next->parent_index.push_back(static_cast<int>(i));
      next->child_ordinal.push_back(0);
      next->remainder_prefix.push_back(0);
      next->solved.push_back(1);
      next->direct.push_back(st->direct[i]);
      continue;
    }
    std::optional<KitaApplication> app;
    try {
      app = apply(kita, *st->edks[i], cfg, opts);
    } catch (const DomainError&) {
      // overflowing arithmetic means the transform cannot follow this series
      return nullptr;
    }
    if (!app) return nullptr;
    if (app->direct) {
      next->edks.push_back(st->edks[i]);
      next->parent_index.push_back(static_cast<int>(i));
      next->child_ordinal.push_back(0);
      next->remainder_prefix.push_back(0);
      next->solved.push_back(1);
      next->direct.push_back(std::move(app->direct));
      changed = true;
      continue;
    }
    for (size_t c = 0; c < app->children.size(); ++c) {
      bool same_as_parent =
          app->children.size() == 1 &&
          app->children[c].mode() == st->edks[i]->mode() &&
          app->children[c].base().elements() ==
              st->edks[i]->base().elements();
      if (!same_as_parent) changed = true;
      next->edks.push_back(
          std::make_shared<Edk>(std::move(app->children[c])));
      next->parent_index.push_back(static_cast<int>(i));
      next->child_ordinal.push_back(static_cast<int>(c));
      next->remainder_prefix.push_back(
          c < app->child_remainder.size() ? app->child_remainder[c] : 0);
      next->solved.push_back(next->edks.back()->is_solution(cfg) ? 1 : 0);
      next->direct.emplace_back();
    }
  }
  if (!changed) return nullptr;  // pure copy, e.g. ML(0,1) on itself
  return next;
}

/// Chain of states from the root to (and including) the given state.
inline std::vector<const SearchState*> state_chain(const SearchState* s) {
  std::vector<const SearchState*> chain;
  for (const SearchState* p = s; p; p = p->parent.get()) chain.push_back(p);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

/// Replays an ordered kita list from a fresh root over the given series.
/// Returns the terminal state when every edk ends up solved.
inline StatePtr replay_pattern(const Series& series,
                               const std::vector<KitaInstance>& kitas,
                               const std::vector<int>& ranks,
                               const ConstancyConfig& cfg,
                               const ApplyOptions& opts) {
  StatePtr st;
  try {
    st = make_root_state(series, cfg);
  } catch (const DomainError&) {
    return nullptr;
  }
  for (size_t k = 0; k < kitas.size(); ++k) {
    if (st->all_solved()) return nullptr;  // pattern longer than needed
    st = expand_state(st, kitas[k],
                      k < ranks.size() ? ranks[k] : static_cast<int>(k), cfg,
                      opts);
    if (!st) return nullptr;
  }
  return st->all_solved() ? st : nullptr;
}

}  // namespace kitbit
