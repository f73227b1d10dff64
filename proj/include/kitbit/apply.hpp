#pragma once

#include "kitbit/edk.hpp"
#include "kitbit/kita.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace kitbit {

struct ApplyOptions {
  bool ana_per_group_fallback = true;
};

// Prediction emitted directly by SSYM/RSYM/ANA instead of child edks.
struct DirectPrediction {
  std::vector<Value> terms;   // bounded continuation beyond the base
  bool periodic = false;      // RSYM: cycle extends indefinitely
  std::vector<Value> cycle;   // aligned so cycle[(t-1) % j] is term n+t
  int ssym_pivot = 0;         // 1-based pivot when SSYM produced this
  int rsym_period = 0;

  std::vector<Value> take(size_t count) const {
    if (!periodic) {
      std::vector<Value> out(terms.begin(),
                             terms.begin() +
                                 std::min(count, terms.size()));
      return out;
    }
    std::vector<Value> out;
    out.reserve(count);
    for (size_t t = 0; t < count; ++t) out.push_back(cycle[t % cycle.size()]);
    return out;
  }
};

struct KitaApplication {
  std::vector<Edk> children;
  std::optional<DirectPrediction> direct;
  std::vector<int> child_remainder;  // FOC: per-child remainder prefix length
};

namespace detail {

inline Edk diff_child(std::vector<Value> base, const ConstancyConfig& cfg) {
  return Edk::build(Series(std::move(base)), EdkMode::Differences, cfg);
}

inline std::optional<KitaApplication> apply_div(const Edk& edk,
                                                const ConstancyConfig& cfg) {
  if (edk.mode() != EdkMode::Differences) return std::nullopt;
  auto child = Edk::try_build(edk.base(), EdkMode::Ratios, cfg);
  if (!child) return std::nullopt;
  KitaApplication app;
  app.children.push_back(std::move(*child));
  return app;
}

inline std::optional<KitaApplication> apply_red(int r, const Edk& edk,
                                                const ConstancyConfig& cfg) {
  int n = static_cast<int>(edk.n());
  if (r < 1 || r > n - 2 || r > edk.built_rows()) return std::nullopt;
  KitaApplication app;
  app.children.push_back(diff_child(edk.row(r), cfg));
  return app;
}

inline std::optional<KitaApplication> apply_ml(int dy, int dx, const Edk& edk,
                                               const ConstancyConfig& cfg) {
  if (dy < 0 || dx < 1) return std::nullopt;
  const Edk* tri = &edk;
  std::optional<Edk> rebuilt;
  if (!edk.fully_built()) {
    rebuilt = Edk::try_build_full(edk.base(), edk.mode());
    if (!rebuilt) return std::nullopt;
    tri = &*rebuilt;
  }
  int n = static_cast<int>(tri->n());
  int max_row = tri->built_rows();
  KitaApplication app;
  for (int c = 1; c <= dy + dx; ++c) {
    std::vector<Value> picked;
    int y = c - 1, x = 1;
    while (y <= max_row && x <= n - y) {
      picked.push_back(tri->cell(y, x));
      y += dy;
      x += dx;
    }
    if (picked.size() < 2) return std::nullopt;
    app.children.push_back(diff_child(std::move(picked), cfg));
  }
  return app;
}

/// Element coordinates of subseries S_m (1-based positions into the base),
/// for a base of length n.
inline std::vector<int> foc_coords(int s, const std::vector<int>& d, int m,
                                   int n) {
  int sd = 0;
  for (int v : d) sd += v;
  int f = 0;
  for (int r = 0; r < m; ++r) f += d[r];
  int blocks = (n - s + sd - 1) / sd;  // ceil((n-s)/sd)
  std::vector<int> coords;
  for (int p = 0; p < blocks; ++p)
    for (int q = 1; q <= d[m]; ++q) {
      int c = s + f + q + p * sd;
      if (c <= n) coords.push_back(c);
    }
  return coords;
}

inline std::optional<KitaApplication> apply_foc(int s,
                                                const std::vector<int>& d,
                                                const Edk& edk,
                                                const ConstancyConfig& cfg) {
  int n = static_cast<int>(edk.n());
  int l = static_cast<int>(d.size());
  int sd = 0;
  for (int v : d) sd += v;
  if (n < 4 || s < 0 || s > sd || s + sd > n || l < 1) return std::nullopt;

  const auto& base = edk.base().elements();
  std::vector<std::vector<Value>> sub(l);
  for (int m = 0; m < l; ++m)
    for (int c : foc_coords(s, d, m, n)) sub[m].push_back(base[c - 1]);

  // remainders are peeled from the end of R, last subseries first
  std::vector<Value> rem(base.begin(), base.begin() + s);
  std::vector<std::vector<Value>> rpart(l);
  for (int m = l - 1; m >= 0; --m) {
    int take = std::min<int>(d[m], static_cast<int>(rem.size()));
    rpart[m].assign(rem.end() - take, rem.end());
    rem.resize(rem.size() - take);
  }

  KitaApplication app;
  for (int m = 0; m < l; ++m) {
    std::vector<Value> x = rpart[m];
    x.insert(x.end(), sub[m].begin(), sub[m].end());
    if (x.size() < 2) return std::nullopt;
    app.child_remainder.push_back(static_cast<int>(rpart[m].size()));
    app.children.push_back(diff_child(std::move(x), cfg));
  }
  return app;
}

inline bool row_constant(const std::vector<Value>& row, double eps) {
  for (size_t i = 1; i < row.size(); ++i)
    if (!approx_equal(row[i], row[0], eps)) return false;
  return !row.empty();
}

inline std::optional<KitaApplication> apply_ana(int s, int e, const Edk& edk,
                                                const ConstancyConfig& cfg,
                                                const ApplyOptions& opts) {
  int n = static_cast<int>(edk.n());
  if (s < 0 || s > n - 4 || e <= 1 || e > n - s - 1 || (n - s) % e == 0)
    return std::nullopt;
  double eps = cfg.epsilon();
  const auto& base = edk.base().elements();
  int t = (n - s + e - 1) / e;
  int g = (n - s) % e;  // size of the last, strictly smaller group

  std::vector<std::vector<std::vector<Value>>> rows(t - 1);
  for (int k = 0; k < t - 1; ++k) {
    std::vector<Value> grp(base.begin() + s + k * e,
                           base.begin() + s + (k + 1) * e);
    std::vector<Value> cur = grp;
    while (cur.size() > 1) {
      std::vector<Value> next;
      for (size_t i = 0; i + 1 < cur.size(); ++i)
        next.push_back(cur[i + 1] - cur[i]);
      rows[k].push_back(next);
      cur = rows[k].back();
    }
  }
  std::vector<Value> tail(base.begin() + s + (t - 1) * e, base.end());
  std::vector<std::vector<Value>> tail_rows;
  {
    std::vector<Value> cur = tail;
    while (cur.size() > 1) {
      std::vector<Value> next;
      for (size_t i = 0; i + 1 < cur.size(); ++i)
        next.push_back(cur[i + 1] - cur[i]);
      tail_rows.push_back(next);
      cur = tail_rows.back();
    }
  }

  auto tail_row_matches = [&](int r, const Value& v) {
    if (g > r) {
      const auto& row = tail_rows[static_cast<size_t>(r - 1)];
      for (const Value& x : row)
        if (!approx_equal(x, v, eps)) return false;
    }
    return true;
  };

  std::optional<int> found_r;
  std::optional<Value> found_v;
  // shared constancy: same row, same value across every full group
  for (int r = 1; r <= e - 1 && !found_r; ++r) {
    if ((t - 1) * (e - r) < 2) break;  // too little supporting evidence
    if (g < r) break;                  // cannot anchor the last group
    bool ok = true;
    Value v = rows[0][static_cast<size_t>(r - 1)][0];
    for (int k = 0; k < t - 1 && ok; ++k) {
      const auto& row = rows[k][static_cast<size_t>(r - 1)];
      ok = row_constant(row, eps) && approx_equal(row[0], v, eps);
    }
    if (ok && tail_row_matches(r, v)) {
      found_r = r;
      found_v = v;
    }
  }
  if (!found_r && opts.ana_per_group_fallback) {
    // each group constant in its own right; the last group supplies its own
    // row value, so it needs one extra element
    for (int r = 1; r <= e - 1 && !found_r; ++r) {
      if (g < r + 1) break;
      bool ok = true;
      for (int k = 0; k < t - 1 && ok; ++k)
        ok = row_constant(rows[k][static_cast<size_t>(r - 1)], eps);
      if (!ok) continue;
      const auto& trow = tail_rows[static_cast<size_t>(r - 1)];
      if (!row_constant(trow, eps)) continue;
      found_r = r;
      found_v = trow[0];
    }
  }
  if (!found_r) return std::nullopt;

  // complete the last group by extending its row r with the constant
  int r = *found_r;
  int missing = e - g;
  std::vector<Value> edge(static_cast<size_t>(r), Value::exact(0));
  edge[0] = tail.back();
  for (int j = 1; j < r; ++j)
    edge[static_cast<size_t>(j)] = tail_rows[static_cast<size_t>(j - 1)].back();
  std::vector<Value> out;
  for (int m = 0; m < missing; ++m) {
    Value acc = *found_v;
    for (int j = r - 1; j >= 0; --j) {
      acc = edge[static_cast<size_t>(j)] + acc;
      edge[static_cast<size_t>(j)] = acc;
    }
    out.push_back(edge[0]);
  }

  KitaApplication app;
  DirectPrediction dp;
  dp.terms = std::move(out);
  app.direct = std::move(dp);
  return app;
}

inline std::optional<KitaApplication> apply_exp(const BigRat& e,
                                                const Edk& edk,
                                                const ConstancyConfig& cfg) {
  using boost::multiprecision::denominator;
  if (e == 0) return std::nullopt;
  bool fractional = denominator(e) != 1;
  std::vector<Value> out;
  for (const Value& x : edk.base().elements()) {
    if (fractional && (x.is_zero() || x.is_negative())) return std::nullopt;
    if (e < 0 && x.is_zero()) return std::nullopt;
    auto p = pow_value(x, e);
    if (!p) return std::nullopt;
    out.push_back(*p);
  }
  KitaApplication app;
  app.children.push_back(diff_child(std::move(out), cfg));
  return app;
}

inline std::optional<KitaApplication> apply_log(const Edk& edk,
                                                const ConstancyConfig& cfg) {
  int n = static_cast<int>(edk.n());
  if (n < 3) return std::nullopt;
  const auto& base = edk.base().elements();
  std::vector<Value> out;
  for (int i = 0; i + 1 < n; ++i) {
    Value b = base[static_cast<size_t>(i)].abs();
    if (b.is_zero() || b.is_one()) return std::nullopt;
    if (base[static_cast<size_t>(i + 1)].is_zero()) return std::nullopt;
    auto v = log_value(base[static_cast<size_t>(i)],
                       base[static_cast<size_t>(i + 1)]);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  KitaApplication app;
  app.children.push_back(diff_child(std::move(out), cfg));
  return app;
}

inline std::optional<Value> apply_op(ArithOp op, const Value& lhs,
                                     const Value& rhs) {
  switch (op) {
    case ArithOp::Add: return lhs + rhs;
    case ArithOp::Sub: return lhs - rhs;
    case ArithOp::Mul: return lhs * rhs;
    case ArithOp::Div:
      if (rhs.is_zero()) return std::nullopt;
      return lhs / rhs;
  }
  return std::nullopt;
}

inline std::optional<KitaApplication> apply_dop(ArithOp o1, ArithOp o2,
                                                const Edk& edk,
                                                const ConstancyConfig& cfg) {
  int n = static_cast<int>(edk.n());
  if (n < 3) return std::nullopt;
  const auto& base = edk.base().elements();
  std::vector<Value> out;
  for (int i = 1; i <= n - 1; ++i) {
    ArithOp op = (i % 2 != 0) ? o1 : o2;
    auto v = apply_op(op, base[static_cast<size_t>(i)],
                      base[static_cast<size_t>(i - 1)]);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  KitaApplication app;
  app.children.push_back(diff_child(std::move(out), cfg));
  return app;
}

inline std::optional<KitaApplication> apply_ssym(const Edk& edk,
                                                 const ConstancyConfig& cfg) {
  int n = static_cast<int>(edk.n());
  if (n < 3) return std::nullopt;
  double eps = cfg.epsilon();
  const auto& base = edk.base().elements();
  // largest pivot wins: it carries the longest forward continuation
  for (int j = n - 1; j >= (n + 1) / 2; --j) {
    bool ok = true;
    for (int m = 1; j + m <= n && ok; ++m) {
      if (j - m < 1) {
        ok = false;
        break;
      }
      ok = approx_equal(base[static_cast<size_t>(j + m - 1)],
                        base[static_cast<size_t>(j - m - 1)], eps);
    }
    if (!ok) continue;
    DirectPrediction dp;
    dp.ssym_pivot = j;
    for (int m = n - j + 1; j - m >= 1; ++m)
      dp.terms.push_back(base[static_cast<size_t>(j - m - 1)]);
    KitaApplication app;
    app.direct = std::move(dp);
    return app;
  }
  return std::nullopt;
}

inline std::optional<KitaApplication> apply_rsym(const Edk& edk,
                                                 const ConstancyConfig& cfg) {
  int n = static_cast<int>(edk.n());
  if (n < 3) return std::nullopt;
  double eps = cfg.epsilon();
  const auto& base = edk.base().elements();
  for (int j = 2; j <= n - 1; ++j) {
    bool ok = true;
    for (int i = 1; i + j <= n && ok; ++i)
      ok = approx_equal(base[static_cast<size_t>(i + j - 1)],
                        base[static_cast<size_t>(i - 1)], eps);
    if (!ok) continue;
    DirectPrediction dp;
    dp.periodic = true;
    dp.rsym_period = j;
    for (int k = 0; k < j; ++k)
      dp.cycle.push_back(base[static_cast<size_t>((n + k) % j)]);
    KitaApplication app;
    app.direct = std::move(dp);
    return app;
  }
  return std::nullopt;
}

inline std::optional<KitaApplication> apply_dge(const Edk& edk,
                                                const ConstancyConfig& cfg) {
  int n = static_cast<int>(edk.n());
  double eps = cfg.epsilon();
  const auto& base = edk.base().elements();
  std::vector<Value> values;
  std::vector<Value> lengths;
  size_t i = 0;
  while (i < base.size()) {
    size_t j = i + 1;
    while (j < base.size() && approx_equal(base[j], base[i], eps)) ++j;
    values.push_back(base[i]);
    lengths.push_back(Value::exact(static_cast<long long>(j - i)));
    i = j;
  }
  int t = static_cast<int>(values.size());
  if (t < 2 || t >= n) return std::nullopt;
  KitaApplication app;
  app.children.push_back(diff_child(std::move(values), cfg));
  app.children.push_back(diff_child(std::move(lengths), cfg));
  return app;
}

inline std::optional<KitaApplication> apply_dgd(const Edk& edk,
                                                const ConstancyConfig& cfg) {
  double eps = cfg.epsilon();
  const auto& base = edk.base().elements();
  std::vector<Value> distinct;
  for (const Value& v : base) {
    bool seen = false;
    for (const Value& d : distinct)
      if (approx_equal(v, d, eps)) {
        seen = true;
        break;
      }
    if (!seen) distinct.push_back(v);
  }
  if (distinct.size() < 2) return std::nullopt;

  // greedy split: each group is the longest prefix of the distinct sequence
  std::vector<Value> lengths;
  size_t pos = 0;
  while (pos < base.size()) {
    size_t k = 0;
    while (pos + k < base.size() && k < distinct.size() &&
           approx_equal(base[pos + k], distinct[k], eps))
      ++k;
    if (k == 0) return std::nullopt;
    lengths.push_back(Value::exact(static_cast<long long>(k)));
    pos += k;
  }
  if (lengths.size() < 2) return std::nullopt;
  KitaApplication app;
  app.children.push_back(diff_child(std::move(distinct), cfg));
  app.children.push_back(diff_child(std::move(lengths), cfg));
  return app;
}

inline std::optional<KitaApplication> apply_soe(const Edk& edk,
                                                const ConstancyConfig& cfg) {
  std::vector<Value> digits;
  std::vector<Value> counts;
  for (const Value& v : edk.base().elements()) {
    if (!v.is_integer() || v.is_negative()) return std::nullopt;
    std::string s = v.integer().str();
    for (char c : s)
      if (c != s[0]) return std::nullopt;
    digits.push_back(Value::exact(static_cast<long long>(s[0] - '0')));
    counts.push_back(Value::exact(static_cast<long long>(s.size())));
  }
  KitaApplication app;
  app.children.push_back(diff_child(std::move(digits), cfg));
  app.children.push_back(diff_child(std::move(counts), cfg));
  return app;
}

}  // namespace detail

/// Forward application of one kita to one edk. nullopt means the kita does
/// not apply here; the search treats that as a pruned branch.
inline std::optional<KitaApplication> apply(const KitaInstance& kita,
                                            const Edk& edk,
                                            const ConstancyConfig& cfg,
                                            const ApplyOptions& opts = {}) {
  using namespace detail;
  // Base-reading kitas are suppressed on ratio edks: the same base is always
  // reachable one step earlier as a differences edk, so those branches only
  // duplicate work under a longer kita list.
  bool ratio = edk.mode() == EdkMode::Ratios;
  switch (kita.kind) {
    case KitaKind::BAS: return std::nullopt;  // root construction only
    case KitaKind::DIV: return apply_div(edk, cfg);
    case KitaKind::RED: return apply_red(kita.red_levels, edk, cfg);
    case KitaKind::ML: return apply_ml(kita.ml_dy, kita.ml_dx, edk, cfg);
    case KitaKind::FOC:
      return ratio ? std::nullopt
                   : apply_foc(kita.foc_offset, kita.foc_sizes, edk, cfg);
    case KitaKind::ANA:
      return ratio ? std::nullopt
                   : apply_ana(kita.ana_offset, kita.ana_group, edk, cfg, opts);
    case KitaKind::EXP:
      return ratio ? std::nullopt : apply_exp(kita.exp_exponent, edk, cfg);
    case KitaKind::LOG: return ratio ? std::nullopt : apply_log(edk, cfg);
    case KitaKind::DOP:
      return ratio ? std::nullopt
                   : apply_dop(kita.dop_first, kita.dop_second, edk, cfg);
    case KitaKind::SSYM: return ratio ? std::nullopt : apply_ssym(edk, cfg);
    case KitaKind::RSYM: return ratio ? std::nullopt : apply_rsym(edk, cfg);
    case KitaKind::DGE: return ratio ? std::nullopt : apply_dge(edk, cfg);
    case KitaKind::DGD: return ratio ? std::nullopt : apply_dgd(edk, cfg);
    case KitaKind::SOE: return ratio ? std::nullopt : apply_soe(edk, cfg);
  }
  return std::nullopt;
}

}  // namespace kitbit
