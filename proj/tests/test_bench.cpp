#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kitbit/bench.hpp"

using namespace kitbit;

namespace {

SearchConfig iq_cfg(const std::string& mode = "S1Z") {
  return mode_config(mode, default_catalog(CatalogProfile::Iq));
}

Corpus small_corpus() {
  Corpus c;
  c.records.push_back({"s1", Series::of({1, 3, 5, 7, 9, 11}),
                       SeriesSource::User});
  c.records.push_back({"s2", Series::of({3, 3, 6, 18, 72, 360, 2160}),
                       SeriesSource::User});
  c.records.push_back({"s3", Series::of({1, 0, 2, 1, 0, 2, 1}),
                       SeriesSource::User});
  c.records.push_back(
      {"hard", Series::of({4, 13, 29, 93, 54, 208, 141, 2}),
       SeriesSource::User});
  return c;
}

}  // namespace

TEST_CASE("batch evaluation aggregates outcomes") {
  RunReport r = run_batch(small_corpus(), iq_cfg(), 1, "S1Z");
  REQUIRE(r.outcomes.size() == 4);
  CHECK(r.outcomes[0].solved);
  CHECK(r.outcomes[1].solved);
  CHECK(r.outcomes[2].solved);
  CHECK(r.aggregates.solved == r.aggregates.type_a + r.aggregates.type_b);
  CHECK(r.aggregates.total == 4);
  CHECK(r.aggregates.kita_usage.at("BASIC") == 100.0);
}

TEST_CASE("reports are identical across worker counts") {
  auto strip = [](RunReport r) { return report_json(r, false).dump(2); };
  std::string w1 = strip(run_batch(small_corpus(), iq_cfg(), 1, "S1Z"));
  std::string w4 = strip(run_batch(small_corpus(), iq_cfg(), 4, "S1Z"));
  std::string w16 = strip(run_batch(small_corpus(), iq_cfg(), 16, "S1Z"));
  CHECK(w1 == w4);
  CHECK(w1 == w16);
}

TEST_CASE("empty corpus yields an undefined-marked report") {
  Corpus empty;
  RunReport r = run_batch(empty, iq_cfg(), 2, "S1Z");
  CHECK(r.aggregates.total == 0);
  CHECK(r.aggregates.solve_rate == -1.0);
  auto j = report_json(r);
  CHECK(j["aggregates"]["solve_rate"] == "undefined");
}

TEST_CASE("aggregate computes the table shapes") {
  std::vector<SeriesOutcome> outs(2);
  outs[0].id = "a";
  outs[0].solved = true;
  outs[0].kind = "A";
  outs[0].n_e = 4;
  outs[0].depth = 2;
  outs[0].kitas = {"DIV", "RED(1)"};
  outs[1].id = "b";
  outs[1].solved = true;
  outs[1].kind = "A";
  outs[1].n_e = 3;
  outs[1].depth = 1;
  Aggregates a = aggregate(outs);
  CHECK(a.kita_usage.at("DIV") == 50.0);
  CHECK(a.kita_usage.at("BASIC") == 100.0);
  CHECK(a.depth_pct.at(1) == 50.0);
  CHECK(a.depth_pct.at(2) == 50.0);
  CHECK(a.top_patterns.size() == 2);
}

TEST_CASE("all-depth-one corpus concentrates the histogram") {
  std::vector<SeriesOutcome> outs(3);
  for (auto& o : outs) {
    o.solved = true;
    o.kind = "A";
    o.n_e = 3;
    o.depth = 1;
  }
  Aggregates a = aggregate(outs);
  CHECK(a.depth_pct.at(1) == 100.0);
  CHECK(a.ne_pct.at("3") == 100.0);
}

TEST_CASE("planted generator produces its own continuation") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    PlantedCase pc = generate_planted(rng);
    REQUIRE(pc.series.size() >= 4);
    // the series plus its expected continuation still parses as one series
    std::vector<Value> all = pc.series.elements();
    all.insert(all.end(), pc.expected.begin(), pc.expected.end());
    CHECK(all.size() >= pc.series.size());
  }
}

TEST_CASE("planted sample cases match their hand values") {
  // arithmetic table: start 1, constant 3
  auto s = planted::poly_series({1}, 3, 5);
  std::vector<long long> got;
  for (auto& v : s) got.push_back(static_cast<long long>(v.integer()));
  CHECK(got == std::vector<long long>{1, 4, 7, 10, 13});

  auto g = planted::geometric(2, 3, 4);
  got.clear();
  for (auto& v : g) got.push_back(static_cast<long long>(v.integer()));
  CHECK(got == std::vector<long long>{2, 6, 18, 54});
}

TEST_CASE("planted cases are solved within the planted cost") {
  std::mt19937_64 rng(20240819);
  SearchConfig cfg = iq_cfg("N1Z");
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    PlantedCase pc = generate_planted(rng);
    auto out = minimal_prefix_solve(pc.series, cfg);
    REQUIRE_MESSAGE(out.solution.has_value(),
                    "unsolved planted case: " << pc.note << " "
                                              << pc.series.str());
    size_t cost = std::max<size_t>(1, out.solution->kitas.size());
    size_t planted_cost = std::max<size_t>(1, pc.pattern.size());
    CHECK_MESSAGE(cost <= planted_cost, pc.note);
    ++checked;
  }
  CHECK(checked == 60);
}
