#pragma once

#include "kitbit/datasets.hpp"
#include "kitbit/search.hpp"

#include "json.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <thread>

namespace kitbit {

struct SeriesOutcome {
  std::string id;
  bool solved = false;
  bool budget_exhausted = false;
  std::string error;
  std::string kind;  // "A" or "B" when solved
  int n_e = 0;
  int depth = 0;
  std::vector<std::string> kitas;
  std::vector<std::string> predicted;
  bool prediction_truncated = false;
  double elapsed_ms = 0.0;
};

struct Aggregates {
  int total = 0;
  int solved = 0;
  int type_a = 0;
  int type_b = 0;
  int unsolved = 0;
  int budget_exhausted = 0;
  int errors = 0;
  double solve_rate = 0.0;  // undefined-marked as -1 on empty corpora
  std::map<int, double> depth_pct;           // 1..4, over solved
  std::map<std::string, double> ne_pct;      // "3".."9", "10+", over solved
  std::map<std::string, double> kita_usage;  // per kita type, over solved
  std::vector<std::pair<std::string, int>> top_patterns;
  double median_ms = 0.0;
};

struct RunReport {
  std::vector<SeriesOutcome> outcomes;
  Aggregates aggregates;
  std::string mode;
  std::string catalog_name;
};

inline const char* kita_kind_name(KitaKind k) {
  switch (k) {
    case KitaKind::BAS: return "BASIC";
    case KitaKind::DIV: return "DIV";
    case KitaKind::RED: return "RED";
    case KitaKind::ML: return "ML";
    case KitaKind::FOC: return "FOC";
    case KitaKind::ANA: return "ANA";
    case KitaKind::EXP: return "EXP";
    case KitaKind::LOG: return "LOG";
    case KitaKind::DOP: return "DOP";
    case KitaKind::SSYM: return "SSYM";
    case KitaKind::RSYM: return "RSYM";
    case KitaKind::DGE: return "DGE";
    case KitaKind::DGD: return "DGD";
    case KitaKind::SOE: return "SOE";
  }
  return "?";
}

inline Aggregates aggregate(const std::vector<SeriesOutcome>& outcomes) {
  Aggregates agg;
  agg.total = static_cast<int>(outcomes.size());
  std::map<std::string, int> kind_hits;
  std::map<std::string, int> patterns;
  std::map<int, int> depth_counts;
  std::map<std::string, int> ne_counts;
  std::vector<double> times;
  for (const auto& o : outcomes) {
    times.push_back(o.elapsed_ms);
    if (!o.error.empty()) ++agg.errors;
    if (o.budget_exhausted) ++agg.budget_exhausted;
    if (!o.solved) {
      ++agg.unsolved;
      continue;
    }
    ++agg.solved;
    if (o.kind == "A")
      ++agg.type_a;
    else
      ++agg.type_b;
    ++depth_counts[std::min(o.depth, 4)];
    ++ne_counts[o.n_e >= 10 ? "10+" : std::to_string(o.n_e)];
    std::string pat;
    std::set<std::string> kinds_in_solution{"BASIC"};  // the root build
    for (const auto& k : o.kitas) {
      if (!pat.empty()) pat += ", ";
      pat += k;
      kinds_in_solution.insert(k.substr(0, k.find('(')));
    }
    if (pat.empty()) pat = "BASIC (only)";
    ++patterns[pat];
    for (const auto& name : kinds_in_solution) ++kind_hits[name];
  }
  if (agg.total == 0) {
    agg.solve_rate = -1.0;
    return agg;
  }
  agg.solve_rate = static_cast<double>(agg.solved) / agg.total;
  auto pct_of_solved = [&](int c) {
    return agg.solved ? 100.0 * c / agg.solved : 0.0;
  };
  for (auto& [d, c] : depth_counts) agg.depth_pct[d] = pct_of_solved(c);
  for (auto& [b, c] : ne_counts) agg.ne_pct[b] = pct_of_solved(c);
  static const char* kAllKinds[] = {"ANA", "BASIC", "DGD", "DGE", "DIV",
                                    "DOP", "EXP",   "FOC", "LOG", "ML",
                                    "RED", "RSYM",  "SOE", "SSYM"};
  for (const char* name : kAllKinds)
    agg.kita_usage[name] = pct_of_solved(kind_hits[name]);
  agg.top_patterns.assign(patterns.begin(), patterns.end());
  std::sort(agg.top_patterns.begin(), agg.top_patterns.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  std::sort(times.begin(), times.end());
  if (!times.empty()) {
    size_t m = times.size() / 2;
    agg.median_ms = times.size() % 2 ? times[m]
                                     : 0.5 * (times[m - 1] + times[m]);
  }
  return agg;
}

inline SeriesOutcome evaluate_series(const SeriesRecord& rec,
                                     const SearchConfig& cfg,
                                     int prediction_terms = 6) {
  SeriesOutcome o;
  o.id = rec.id;
  auto t0 = std::chrono::steady_clock::now();
  try {
    auto res = minimal_prefix_solve(rec.series, cfg);
    if (res.solution) {
      const Solution& sol = *res.solution;
      o.solved = true;
      o.kind = sol.kind == SolutionKind::TypeA ? "A" : "B";
      o.n_e = sol.n_e;
      o.depth = sol.depth();
      for (const auto& k : sol.kitas) o.kitas.push_back(k.display());
      try {
        auto pred = predict(sol, cfg, static_cast<size_t>(prediction_terms));
        for (const auto& v : pred.terms) o.predicted.push_back(v.str());
        o.prediction_truncated = pred.truncated;
      } catch (const InverseDomain&) {
        o.prediction_truncated = true;
      }
    } else {
      o.budget_exhausted = res.budget_exhausted;
    }
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  o.elapsed_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  return o;
}

/// Parallel batch solve; the report is independent of worker count and
/// scheduling (each series owns a fixed output slot, and only the state
/// budget limits a series -- a wall-clock cutoff would make reports depend
/// on machine load).
inline RunReport run_batch(const Corpus& corpus, SearchConfig cfg,
                           int workers = 1, const std::string& mode = "",
                           int prediction_terms = 6) {
  cfg.budget.max_millis = 0;
  RunReport report;
  report.mode = mode;
  report.catalog_name = cfg.catalog.name;
  report.outcomes.resize(corpus.records.size());
  if (workers < 1) workers = 1;
  std::atomic<size_t> cursor{0};
  auto work = [&]() {
    while (true) {
      size_t i = cursor.fetch_add(1);
      if (i >= corpus.records.size()) break;
      report.outcomes[i] =
          evaluate_series(corpus.records[i], cfg, prediction_terms);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  report.aggregates = aggregate(report.outcomes);
  return report;
}

inline nlohmann::ordered_json outcome_json(const SeriesOutcome& o,
                                           bool include_timing) {
  nlohmann::ordered_json j;
  j["series_id"] = o.id;
  j["solved"] = o.solved;
  if (o.solved) {
    j["n_e"] = o.n_e;
    j["kitas"] = o.kitas;
    j["kind"] = o.kind;
    j["predicted"] = o.predicted;
    j["depth"] = o.depth;
  }
  if (o.budget_exhausted) j["budget_exhausted"] = true;
  if (!o.error.empty()) j["error"] = o.error;
  j["elapsed_ms"] =
      include_timing ? static_cast<long long>(o.elapsed_ms * 1000) / 1000.0
                     : 0.0;
  return j;
}

inline nlohmann::ordered_json report_json(const RunReport& r,
                                          bool include_timing = true) {
  nlohmann::ordered_json j;
  j["mode"] = r.mode;
  j["catalog"] = r.catalog_name;
  const Aggregates& a = r.aggregates;
  nlohmann::ordered_json ja;
  ja["total"] = a.total;
  ja["solved"] = a.solved;
  ja["type_a"] = a.type_a;
  ja["type_b"] = a.type_b;
  ja["unsolved"] = a.unsolved;
  ja["budget_exhausted"] = a.budget_exhausted;
  ja["errors"] = a.errors;
  if (a.solve_rate < 0)
    ja["solve_rate"] = "undefined";
  else
    ja["solve_rate"] = a.solve_rate;
  ja["depth_pct"] = nlohmann::ordered_json::object();
  for (auto& [d, p] : a.depth_pct) ja["depth_pct"][std::to_string(d)] = p;
  ja["ne_pct"] = nlohmann::ordered_json::object();
  for (auto& [b, p] : a.ne_pct) ja["ne_pct"][b] = p;
  ja["kita_usage_pct"] = nlohmann::ordered_json::object();
  for (auto& [k, p] : a.kita_usage) ja["kita_usage_pct"][k] = p;
  ja["top_patterns"] = nlohmann::ordered_json::array();
  for (auto& [pat, cnt] : a.top_patterns) {
    if (ja["top_patterns"].size() >= 25) break;
    ja["top_patterns"].push_back({{"pattern", pat}, {"count", cnt}});
  }
  ja["median_ms"] = include_timing ? a.median_ms : 0.0;
  j["aggregates"] = ja;
  j["series"] = nlohmann::ordered_json::array();
  for (const auto& o : r.outcomes)
    j["series"].push_back(outcome_json(o, include_timing));
  return j;
}

/// Human-readable aggregate table mirroring the benchmark layout.
inline std::string report_text(const RunReport& r) {
  const Aggregates& a = r.aggregates;
  std::ostringstream os;
  os << "mode " << r.mode << "  catalog " << r.catalog_name << "\n";
  os << "series " << a.total << "  solved " << a.solved;
  if (a.solve_rate >= 0) {
    os.setf(std::ios::fixed);
    os.precision(1);
    os << " (" << 100.0 * a.solve_rate << "%)";
  }
  os << "  typeA " << a.type_a << "  typeB " << a.type_b;
  os << "  budget " << a.budget_exhausted << "  errors " << a.errors << "\n";
  os.setf(std::ios::fixed);
  os.precision(1);
  os << "depth%";
  for (int d = 1; d <= 4; ++d) {
    double p = a.depth_pct.count(d) ? a.depth_pct.at(d) : 0.0;
    os << "  " << d << ": " << p;
  }
  os << "\nn_e%  ";
  for (const char* b : {"3", "4", "5", "6", "7", "8", "9", "10+"}) {
    double p = a.ne_pct.count(b) ? a.ne_pct.at(b) : 0.0;
    os << "  " << b << ": " << p;
  }
  os << "\nt_med " << a.median_ms << " ms\n";
  os << "kita usage%:";
  for (auto& [k, p] : a.kita_usage)
    if (p > 0) os << "  " << k << " " << p;
  os << "\ntop patterns:\n";
  size_t shown = 0;
  for (auto& [pat, cnt] : a.top_patterns) {
    if (++shown > 12) break;
    os << "  " << cnt << "  " << pat << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Planted-pattern generator: synthesizes series guaranteed solvable by a
// known kita list, used as the oracle for search and predictor tests.

struct PlantedCase {
  std::vector<KitaInstance> pattern;
  std::string note;
  Series series;
  std::vector<Value> expected;  // continuation implied by the construction
};

namespace planted {

inline long long uniform(std::mt19937_64& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng() % static_cast<unsigned long long>(
                                         hi - lo + 1));
}

/// Integrates a table upward: given the constant value of row k and the left
/// edge of rows 0..k-1, returns `len` base terms.
inline std::vector<Value> poly_series(const std::vector<long long>& edge,
                                      long long constant, size_t len) {
  size_t k = edge.size();
  std::vector<Value> state;  // state[j] = current last of row j
  for (long long e : edge) state.push_back(Value::exact(e));
  state.push_back(Value::exact(constant));
  std::vector<Value> out{state[0]};
  while (out.size() < len) {
    for (size_t j = k; j-- > 0;) state[j] = state[j] + state[j + 1];
    out.push_back(state[0]);
  }
  return out;
}

inline std::vector<Value> geometric(long long a, long long q, size_t len) {
  std::vector<Value> out;
  Value v = Value::exact(a);
  for (size_t i = 0; i < len; ++i) {
    out.push_back(v);
    v = v * Value::exact(q);
  }
  return out;
}

}  // namespace planted

/// One deterministic planted case per (family, seed). Families cover the
/// catalog kinds that admit direct synthesis; depth grows with the family.
inline PlantedCase generate_planted(std::mt19937_64& rng, int max_depth = 3) {
  using planted::geometric;
  using planted::poly_series;
  using planted::uniform;

  int family = static_cast<int>(uniform(rng, 0, max_depth >= 2 ? 11 : 7));
  size_t len = static_cast<size_t>(uniform(rng, 8, 12));
  size_t extra = 3;
  auto take = [&](std::vector<Value> all) {
    std::vector<Value> head(all.begin(), all.begin() + len);
    std::vector<Value> tail(all.begin() + len, all.end());
    return std::pair{Series(std::move(head)), std::move(tail)};
  };

  switch (family) {
    case 0: {  // polynomial-style table, depth 1
      size_t k = static_cast<size_t>(uniform(rng, 1, 3));
      std::vector<long long> edge;
      for (size_t j = 0; j < k; ++j) edge.push_back(uniform(rng, -9, 9));
      long long c = uniform(rng, 1, 9);
      auto [s, tail] = take(poly_series(edge, c, len + extra));
      return {{}, "table constant at row " + std::to_string(k), s, tail};
    }
    case 1: {  // geometric, solved by the ratio table
      auto [s, tail] =
          take(geometric(uniform(rng, 1, 5), uniform(rng, 2, 4), len + extra));
      return {{KitaInstance::div()}, "geometric", s, tail};
    }
    case 2: {  // arithmetic strand interleaved with a constant strand
      long long a0 = uniform(rng, -5, 5);
      long long c = a0 + 7;
      long long d = uniform(rng, 2, 3);
      auto a = poly_series({a0}, d, len + extra);
      std::vector<Value> mixed;
      for (size_t i = 0; i < len + extra; ++i)
        mixed.push_back(i % 2 == 0 ? a[i / 2] : Value::exact(c));
      auto [s, tail] = take(std::move(mixed));
      return {{KitaInstance::foc(0, {1, 1})}, "odd/even split", s, tail};
    }
    case 3: {  // alternating subtract/divide steps
      long long c = uniform(rng, 2, 3);
      std::vector<Value> all;
      Value v = Value::exact(uniform(rng, 2, 6));
      for (size_t i = 0; i < len + extra; ++i) {
        all.push_back(v);
        v = (i % 2 == 0) ? v + Value::exact(c) : v * Value::exact(c);
      }
      auto [s, tail] = take(std::move(all));
      return {{KitaInstance::dop(ArithOp::Sub, ArithOp::Div)},
              "alternating +c,*c",
              s,
              tail};
    }
    case 4: {  // runs of equal values
      long long a = uniform(rng, -5, 5), d = uniform(rng, 1, 4);
      std::vector<Value> all;
      for (int g = 0; static_cast<long long>(all.size()) <
                      static_cast<long long>(len + extra) + 8;
           ++g)
        for (int r = 0; r <= g; ++r)
          all.push_back(Value::exact(a + d * g));
      auto [s, tail] = take(std::move(all));
      return {{KitaInstance::dge()}, "growing runs", s, tail};
    }
    case 5: {  // growing prefixes of a distinct sequence
      long long a = uniform(rng, 1, 5), d = uniform(rng, 1, 4);
      std::vector<Value> all;
      for (int g = 1; all.size() < len + extra + 8; ++g)
        for (int r = 0; r < g; ++r) all.push_back(Value::exact(a + d * r));
      auto [s, tail] = take(std::move(all));
      return {{KitaInstance::dgd()}, "prefix groups", s, tail};
    }
    case 6: {  // repeating group
      size_t period = static_cast<size_t>(uniform(rng, 3, 4));
      std::vector<Value> group;
      for (size_t i = 0; i < period; ++i)
        group.push_back(Value::exact(uniform(rng, -9, 9)));
      group[1] = group[0] + Value::exact(1);  // guarantee non-constant
      std::vector<Value> all;
      for (size_t i = 0; i < len + extra; ++i)
        all.push_back(group[i % period]);
      auto [s, tail] = take(std::move(all));
      return {{KitaInstance::rsym()}, "period " + std::to_string(period), s,
              tail};
    }
    case 7: {  // repdigits
      long long digit = uniform(rng, 1, 9);
      std::vector<Value> all;
      for (size_t i = 1; i <= len + extra; ++i) {
        BigInt rep = digit * (int_pow(BigInt(10), static_cast<unsigned>(i)) - 1) / 9;
        all.push_back(Value::exact(rep));
      }
      auto [s, tail] = take(std::move(all));
      return {{KitaInstance::soe()}, "repdigits", s, tail};
    }
    case 8: {  // ratio row follows an arithmetic law, depth 2
      long long b = uniform(rng, 2, 4), d = uniform(rng, 1, 3);
      std::vector<Value> all;
      Value v = Value::exact(uniform(rng, 1, 4));
      for (size_t i = 0; i < len + extra; ++i) {
        all.push_back(v);
        v = v * Value::exact(b + d * static_cast<long long>(i));
      }
      auto [s, tail] = take(std::move(all));
      return {{KitaInstance::div(), KitaInstance::red(1)},
              "ratios grow linearly",
              s,
              tail};
    }
    case 9: {  // difference row is geometric, depth 2
      long long g = uniform(rng, 1, 3), q = uniform(rng, 2, 3);
      std::vector<Value> all;
      Value v = Value::exact(uniform(rng, -5, 5));
      Value step = Value::exact(g);
      for (size_t i = 0; i < len + extra; ++i) {
        all.push_back(v);
        v = v + step;
        step = step * Value::exact(q);
      }
      auto [s, tail] = take(std::move(all));
      return {{KitaInstance::red(1), KitaInstance::div()},
              "differences are geometric",
              s,
              tail};
    }
    case 10: {  // mirrored tail
      size_t pivot = len - static_cast<size_t>(uniform(rng, 2, 3));
      std::vector<Value> head;
      for (size_t i = 0; i < pivot; ++i)
        head.push_back(Value::exact(uniform(rng, -20, 20)));
      std::vector<Value> all = head;
      for (size_t m = 1; all.size() < len + 2 && m < pivot; ++m)
        all.push_back(head[pivot - 1 - m]);
      size_t keep = std::min(len, all.size() - 1);
      std::vector<Value> ser(all.begin(), all.begin() + keep);
      std::vector<Value> tail(all.begin() + keep, all.end());
      return {{KitaInstance::ssym()}, "mirrored tail", Series(ser), tail};
    }
    default: {  // two interleaved geometric-step difference rows, depth 3
      std::vector<Value> ca, cb;
      Value va = Value::exact(uniform(rng, 0, 4));
      Value vb = Value::exact(uniform(rng, 0, 4));
      Value sa = Value::exact(uniform(rng, 1, 3));
      Value sb = Value::exact(uniform(rng, 1, 3));
      long long qa = uniform(rng, 2, 3), qb = uniform(rng, 2, 3);
      for (size_t i = 0; i < len + extra; ++i) {
        ca.push_back(va);
        cb.push_back(vb);
        va = va + sa;
        sa = sa * Value::exact(qa);
        vb = vb + sb;
        sb = sb * Value::exact(qb);
      }
      std::vector<Value> mixed;
      for (size_t i = 0; i < len + extra; ++i)
        mixed.push_back(i % 2 == 0 ? ca[i / 2] : cb[i / 2]);
      auto [s, tail] = take(std::move(mixed));
      return {{KitaInstance::foc(0, {1, 1}), KitaInstance::red(1),
               KitaInstance::div()},
              "split, then geometric differences",
              s,
              tail};
    }
  }
}

}  // namespace kitbit
