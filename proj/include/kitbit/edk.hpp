#pragma once

#include "kitbit/series.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace kitbit {

enum class EdkMode { Differences, Ratios };

struct ConstancyConfig {
  double epsilon_exponent = -18.0;  // eps = e^r, r < 0
  int required_levels = 1;          // k

  double epsilon() const { return std::exp(epsilon_exponent); }
};

class ZeroInRatioBase : public DomainError {
 public:
  ZeroInRatioBase() : DomainError("zero divisor in ratio table") {}
};

// Triangular difference/ratio table over a base series. Row j (1-based) has
// n-j elements; construction is lazy and stops as soon as the requested
// number of qualifying top rows is seen, the apex is reached, or max_rows.
class Edk {
 public:
  static std::optional<Edk> try_build(Series base, EdkMode mode,
                                      const ConstancyConfig& cfg,
                                      std::optional<int> max_rows = {}) {
    Edk e(std::move(base), mode);
    if (!e.extend_rows(cfg, max_rows)) return std::nullopt;
    return e;
  }

  static Edk build(Series base, EdkMode mode, const ConstancyConfig& cfg,
                   std::optional<int> max_rows = {}) {
    auto e = try_build(std::move(base), mode, cfg, max_rows);
    if (!e) throw ZeroInRatioBase();
    return *e;
  }

  /// Full triangle down to the single-element apex.
  static std::optional<Edk> try_build_full(Series base, EdkMode mode) {
    ConstancyConfig never;
    never.required_levels = static_cast<int>(base.size());  // unreachable
    return try_build(std::move(base), mode, never);
  }

  const Series& base() const { return base_; }
  EdkMode mode() const { return mode_; }
  size_t n() const { return base_.size(); }

  int built_rows() const { return static_cast<int>(rows_.size()); }
  bool fully_built() const {
    return rows_.size() + 1 == base_.size();
  }

  /// Row j, 1-based; row 0 is the base itself.
  const std::vector<Value>& row(int j) const {
    return rows_.at(static_cast<size_t>(j - 1));
  }
  const Value& cell(int row_idx, int col) const {  // row 0 = base, col 1-based
    if (row_idx == 0) return base_.at(static_cast<size_t>(col - 1));
    return rows_.at(static_cast<size_t>(row_idx - 1))
        .at(static_cast<size_t>(col - 1));
  }
  int row_length(int row_idx) const {
    return static_cast<int>(n()) - row_idx;
  }

  bool row_qualifies(const std::vector<Value>& r, double eps) const {
    for (const Value& v : r) {
      bool ok = mode_ == EdkMode::Differences ? within_eps(v, eps)
                                              : within_eps_of_one(v, eps);
      if (!ok) return false;
    }
    return true;
  }

  /// Smallest k0 such that rows k0..built are all (near-)zeros/ones and the
  /// streak is at least cfg.required_levels.
  std::optional<int> constancy(const ConstancyConfig& cfg) const {
    if (rows_.empty()) return std::nullopt;
    double eps = cfg.epsilon();
    int streak = 0;
    for (size_t j = rows_.size(); j >= 1; --j) {
      if (row_qualifies(rows_[j - 1], eps))
        ++streak;
      else
        break;
    }
    if (streak >= cfg.required_levels)
      return static_cast<int>(rows_.size()) - streak + 1;
    return std::nullopt;
  }

  bool is_solution(const ConstancyConfig& cfg) const {
    return constancy(cfg).has_value();
  }

 private:
  Edk(Series base, EdkMode mode) : base_(std::move(base)), mode_(mode) {}

  // Ratio rows square coefficient sizes level by level; rows stop once
  // entries outgrow anything a series could plausibly contain.
  static constexpr unsigned kMaxCellBits = 512;

  // Returns false only when a ratio row hits a zero divisor.
  bool extend_rows(const ConstancyConfig& cfg, std::optional<int> max_rows) {
    double eps = cfg.epsilon();
    int streak = 0;
    const std::vector<Value>* cur = &base_.elements();
    while (cur->size() > 1) {
      if (max_rows && built_rows() >= *max_rows) break;
      std::vector<Value> next;
      next.reserve(cur->size() - 1);
      bool oversized = false;
      for (size_t i = 0; i + 1 < cur->size(); ++i) {
        if (mode_ == EdkMode::Differences) {
          next.push_back((*cur)[i + 1] - (*cur)[i]);
        } else {
          if ((*cur)[i].is_zero()) return false;
          next.push_back((*cur)[i + 1] / (*cur)[i]);
        }
        if (value_bits(next.back()) > kMaxCellBits) oversized = true;
      }
      if (oversized) break;
      bool q = row_qualifies(next, eps);
      rows_.push_back(std::move(next));
      streak = q ? streak + 1 : 0;
      cur = &rows_.back();
      if (streak >= cfg.required_levels) break;
    }
    return true;
  }

  Series base_;
  EdkMode mode_;
  std::vector<std::vector<Value>> rows_;
};

inline Edk build_edk(const Series& s, EdkMode mode, const ConstancyConfig& cfg,
                     std::optional<int> max_rows = {}) {
  return Edk::build(s, mode, cfg, max_rows);
}

}  // namespace kitbit
