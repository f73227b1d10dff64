#pragma once

#include "kitbit/state.hpp"

#include <map>
#include <utility>
#include <vector>

namespace kitbit {

class InverseDomain : public DomainError {
 public:
  explicit InverseDomain(const std::string& what) : DomainError(what) {}
};

namespace detail {

// Values past this size cannot plausibly continue a series; extension stops
// there instead of grinding through ever-squaring products.
constexpr unsigned kMaxExtensionBits = 1u << 16;

/// Appends `ext` to row `row_idx` of the edk and propagates the warp down,
/// returning the induced base extension (same length as ext or shorter when
/// values blow past the size cutoff).
inline std::vector<Value> extend_down(const Edk& e, int row_idx,
                                      const std::vector<Value>& ext) {
  bool ratios = e.mode() == EdkMode::Ratios;
  std::vector<Value> edge(static_cast<size_t>(row_idx));
  for (int j = 0; j < row_idx; ++j) {
    int len = e.row_length(j);
    edge[static_cast<size_t>(j)] = e.cell(j, len);
  }
  std::vector<Value> out;
  out.reserve(ext.size());
  for (const Value& v : ext) {
    Value acc = v;
    bool oversized = false;
    for (int j = row_idx - 1; j >= 0; --j) {
      if (value_bits(edge[static_cast<size_t>(j)]) > kMaxExtensionBits ||
          value_bits(acc) > kMaxExtensionBits) {
        oversized = true;
        break;
      }
      acc = ratios ? edge[static_cast<size_t>(j)] * acc
                   : edge[static_cast<size_t>(j)] + acc;
      edge[static_cast<size_t>(j)] = acc;
    }
    if (oversized) break;
    out.push_back(acc);
  }
  return out;
}

/// Extends a constancy-solved edk by n_beta terms: zeros (ones for ratio
/// tables) go on the constancy row, the warp recurrence fills the rest.
inline std::vector<Value> warp_extension(const Edk& e, size_t n_beta,
                                         const ConstancyConfig& cfg) {
  auto k0 = e.constancy(cfg);
  if (!k0) throw InverseDomain("warp on unsolved edk");
  Value fill = e.mode() == EdkMode::Ratios ? Value::exact(1) : Value::exact(0);
  std::vector<Value> ext(n_beta, fill);
  return extend_down(e, *k0, ext);
}

inline Value pow_value_v(const Value& base, const Value& expo) {
  if (expo.is_exact()) {
    auto r = pow_value(base, expo.rat());
    if (!r) throw InverseDomain("power out of domain");
    return *r;
  }
  double b = base.to_double();
  if (b < 0) throw InverseDomain("fractional power of a negative");
  double d = std::pow(b, expo.to_double());
  if (!std::isfinite(d)) throw InverseDomain("non-finite power");
  return Value::approx(d);
}

inline ArithOp opposite(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return ArithOp::Sub;
    case ArithOp::Sub: return ArithOp::Add;
    case ArithOp::Mul: return ArithOp::Div;
    case ArithOp::Div: return ArithOp::Mul;
  }
  return ArithOp::Add;
}

inline long long small_positive_int(const Value& v, long long cap,
                                    const char* what) {
  if (!v.is_integer()) throw InverseDomain(std::string(what) + " not integer");
  BigInt n = v.integer();
  if (n < 1 || n > cap) throw InverseDomain(std::string(what) + " out of range");
  return static_cast<long long>(n);
}

}  // namespace detail

// Walks a solved state chain top-down and extends the root base. Children are
// extended recursively, then each kita's insertion rule maps the child terms
// back into its parent edk.
class Extender {
 public:
  Extender(std::vector<const SearchState*> chain, ConstancyConfig cfg)
      : chain_(std::move(chain)), cfg_(cfg) {}

  /// Up to `count` new base terms for the root series (fewer when the
  /// pattern's reach is bounded). Throws InverseDomain on inverse failures.
  std::vector<Value> root_extension(size_t count) {
    return extend(0, 0, count);
  }

 private:
  // Look-ahead through multiplicative inverses can square sizes per term;
  // extensions are cut off once values stop being plausibly series-sized.
  static constexpr unsigned kMaxValueBits = 1u << 16;

  std::vector<Value> extend(size_t level, size_t idx, size_t count) {
    auto out = extend_impl(level, idx, count);
    for (size_t i = 0; i < out.size(); ++i) {
      if (value_bits(out[i]) > kMaxValueBits) {
        out.resize(i);
        break;
      }
    }
    return out;
  }

  std::vector<Value> extend_impl(size_t level, size_t idx, size_t count) {
    if (count == 0) return {};
    const SearchState* st = chain_[level];
    if (st->solved[idx]) {
      if (st->direct[idx]) return st->direct[idx]->take(count);
      return detail::warp_extension(*st->edks[idx], count, cfg_);
    }
    if (level + 1 >= chain_.size())
      throw InverseDomain("chain ends on unsolved edk");
    const SearchState* next = chain_[level + 1];
    std::vector<size_t> kids;
    for (size_t j = 0; j < next->edks.size(); ++j)
      if (next->parent_index[j] == static_cast<int>(idx)) kids.push_back(j);
    if (kids.empty()) throw InverseDomain("no children for unsolved edk");

    const Edk& parent = *st->edks[idx];
    const KitaInstance& kita = next->applied;
    switch (kita.kind) {
      case KitaKind::DIV:
        return extend(level + 1, kids[0], count);
      case KitaKind::RED: {
        auto ext = extend(level + 1, kids[0], count);
        return detail::extend_down(parent, kita.red_levels, ext);
      }
      case KitaKind::EXP: {
        auto ext = extend(level + 1, kids[0], count);
        std::vector<Value> out;
        BigRat inv = 1 / kita.exp_exponent;
        for (const Value& v : ext) {
          auto r = pow_value(v, inv);
          if (!r) throw InverseDomain("inverse exponent out of domain");
          out.push_back(*r);
        }
        return out;
      }
      case KitaKind::LOG: {
        auto ext = extend(level + 1, kids[0], count);
        std::vector<Value> out;
        Value prev = parent.base().at(parent.n() - 1);
        for (const Value& expo : ext) {
          if (value_bits(prev) > kMaxValueBits) break;
          prev = detail::pow_value_v(prev, expo);
          out.push_back(prev);
        }
        return out;
      }
      case KitaKind::DOP: {
        auto ext = extend(level + 1, kids[0], count);
        std::vector<Value> out;
        Value prev = parent.base().at(parent.n() - 1);
        long long n = static_cast<long long>(parent.n());
        for (size_t i = 1; i <= ext.size(); ++i) {
          if (value_bits(prev) > kMaxValueBits) break;
          bool g = ((i % 2 != 0) && (n % 2 != 0)) ||
                   ((i % 2 == 0) && (n % 2 == 0));
          ArithOp op = detail::opposite(g ? kita.dop_first : kita.dop_second);
          auto v = detail::apply_op(op, ext[i - 1], prev);
          if (!v) throw InverseDomain("opposite operator hit zero divisor");
          prev = *v;
          out.push_back(prev);
        }
        return out;
      }
      case KitaKind::SSYM:
      case KitaKind::RSYM:
      case KitaKind::ANA:
        // the edk itself was marked solved with a direct prediction
        return extend(level + 1, kids[0], count);
      case KitaKind::ML:
        return invert_ml(level, idx, kids, count);
      case KitaKind::FOC:
        return invert_foc(level, idx, kids, count);
      case KitaKind::DGE: {
        auto vals = extend(level + 1, kids[0], count);
        auto lens = extend(level + 1, kids[1], count);
        std::vector<Value> out;
        size_t pairs = std::min(vals.size(), lens.size());
        for (size_t k = 0; k < pairs && out.size() < count; ++k) {
          long long len = detail::small_positive_int(lens[k], 1000000,
                                                     "run length");
          for (long long r = 0; r < len && out.size() < count; ++r)
            out.push_back(vals[k]);
        }
        return out;
      }
      case KitaKind::DGD: {
        auto lens = extend(level + 1, kids[1], count);
        const auto& known = next->edks[kids[0]]->base().elements();
        long long max_len = 0;
        std::vector<long long> ls;
        for (const Value& lv : lens) {
          long long len =
              detail::small_positive_int(lv, 1000000, "group length");
          ls.push_back(len);
          max_len = std::max(max_len, len);
        }
        std::vector<Value> pool = known;
        if (max_len > static_cast<long long>(known.size())) {
          auto more = extend(level + 1, kids[0],
                             static_cast<size_t>(max_len - known.size()));
          pool.insert(pool.end(), more.begin(), more.end());
        }
        std::vector<Value> out;
        for (long long len : ls) {
          if (len > static_cast<long long>(pool.size())) break;
          for (long long r = 0; r < len && out.size() < count; ++r)
            out.push_back(pool[static_cast<size_t>(r)]);
          if (out.size() >= count) break;
        }
        return out;
      }
      case KitaKind::SOE: {
        auto digits = extend(level + 1, kids[0], count);
        auto counts = extend(level + 1, kids[1], count);
        std::vector<Value> out;
        size_t pairs = std::min(digits.size(), counts.size());
        for (size_t k = 0; k < pairs && out.size() < count; ++k) {
          if (!digits[k].is_integer())
            throw InverseDomain("repdigit digit not integer");
          BigInt d = digits[k].integer();
          if (d < 0 || d > 9) throw InverseDomain("repdigit digit range");
          long long c =
              detail::small_positive_int(counts[k], 9000, "digit count");
          BigInt rep =
              d * (int_pow(BigInt(10), static_cast<unsigned>(c)) - 1) / 9;
          out.push_back(Value::exact(rep));
        }
        return out;
      }
      default:
        throw InverseDomain("kita has no inverse step");
    }
  }

  std::vector<Value> invert_ml(size_t level, size_t idx,
                               const std::vector<size_t>& kids, size_t count) {
    const SearchState* st = chain_[level];
    const SearchState* next = chain_[level + 1];
    const KitaInstance& kita = next->applied;
    int dy = kita.ml_dy, dx = kita.ml_dx;
    const Edk* full = st->edks[idx].get();
    std::optional<Edk> rebuilt;
    if (!full->fully_built()) {
      rebuilt = Edk::try_build_full(full->base(), full->mode());
      if (!rebuilt) throw InverseDomain("ml triangle rebuild failed");
      full = &*rebuilt;
    }
    int n = static_cast<int>(full->n());
    bool ratios = full->mode() == EdkMode::Ratios;

    std::map<std::pair<int, int>, Value> cells;
    for (size_t c = 0; c < kids.size(); ++c) {
      auto ext = extend(level + 1, kids[c], count);
      int picked = static_cast<int>(next->edks[kids[c]]->n());
      for (size_t t = 0; t < ext.size(); ++t) {
        int alpha = picked + static_cast<int>(t);
        int y = static_cast<int>(c) + alpha * dy;
        int x = 1 + alpha * dx;
        cells[{y, x}] = ext[t];
      }
    }
    int max_row = full->built_rows();
    auto lookup = [&](int y, int x) -> const Value* {
      if (y >= 0 && y <= max_row && x >= 1 && x <= n - y)
        return &full->cell(y, x);
      auto it = cells.find({y, x});
      return it == cells.end() ? nullptr : &it->second;
    };

    std::vector<Value> out;
    for (int s = n + 1; out.size() < count; ++s) {
      for (int j = s - 1; j >= 0; --j) {
        int x = s - j;
        if (lookup(j, x)) continue;
        const Value* a = lookup(j, x - 1);
        const Value* b = lookup(j + 1, x - 1);
        if (a && b) {
          if (value_bits(*a) > kMaxValueBits || value_bits(*b) > kMaxValueBits)
            return out;
          cells[{j, x}] = ratios ? (*a) * (*b) : (*a) + (*b);
        }
      }
      const Value* base_cell = lookup(0, s);
      if (!base_cell) break;
      out.push_back(*base_cell);
    }
    return out;
  }

  std::vector<Value> invert_foc(size_t level, size_t idx,
                                const std::vector<size_t>& kids, size_t count) {
    const SearchState* st = chain_[level];
    const SearchState* next = chain_[level + 1];
    const KitaInstance& kita = next->applied;
    int n = static_cast<int>(st->edks[idx]->n());
    int extended = n + static_cast<int>(count);

    std::map<int, Value> newcells;
    for (size_t m = 0; m < kids.size(); ++m) {
      auto coords = detail::foc_coords(kita.foc_offset, kita.foc_sizes,
                                       static_cast<int>(m), extended);
      int known_s =
          static_cast<int>(next->edks[kids[m]]->n()) -
          next->remainder_prefix[kids[m]];
      int need = static_cast<int>(coords.size()) - known_s;
      if (need <= 0) continue;
      auto ext = extend(level + 1, kids[m], static_cast<size_t>(need));
      for (size_t t = 0; t < ext.size(); ++t)
        newcells[coords[static_cast<size_t>(known_s) + t]] = ext[t];
    }
    std::vector<Value> out;
    for (int pos = n + 1; pos <= extended; ++pos) {
      auto it = newcells.find(pos);
      if (it == newcells.end()) break;
      out.push_back(it->second);
    }
    return out;
  }

  std::vector<const SearchState*> chain_;
  ConstancyConfig cfg_;
};

/// Extension of the root series of a solved terminal state.
inline std::vector<Value> extend_root(const SearchState* terminal,
                                      const ConstancyConfig& cfg,
                                      size_t count) {
  Extender ex(state_chain(terminal), cfg);
  return ex.root_extension(count);
}

}  // namespace kitbit
