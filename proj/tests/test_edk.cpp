#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kitbit/edk.hpp"

#include <random>

using namespace kitbit;

namespace {
ConstancyConfig cfg1() { return {}; }
ConstancyConfig cfg2() {
  ConstancyConfig c;
  c.required_levels = 2;
  return c;
}

std::vector<long long> row_ll(const std::vector<Value>& row) {
  std::vector<long long> out;
  for (const auto& v : row)
    out.push_back(static_cast<long long>(v.integer()));
  return out;
}
}  // namespace

TEST_CASE("difference rows follow the derivation rule") {
  Edk e = build_edk(Series::of({3, 3, 6, 18, 72}), EdkMode::Differences,
                    cfg1());
  CHECK(row_ll(e.row(1)) == std::vector<long long>{0, 3, 12, 54});
}

TEST_CASE("ratio table of the doubling-step series") {
  Edk e = build_edk(Series::of({3, 3, 6, 18, 72}), EdkMode::Ratios, cfg1());
  CHECK(row_ll(e.row(1)) == std::vector<long long>{1, 2, 3, 4});
  CHECK_FALSE(e.is_solution(cfg1()));
}

TEST_CASE("minimal two-element series") {
  Edk e = build_edk(Series::of({1, 1}), EdkMode::Differences, cfg1());
  CHECK(row_ll(e.row(1)) == std::vector<long long>{0});
  CHECK(e.constancy(cfg1()) == 1);
}

TEST_CASE("constancy of an arithmetic progression") {
  Edk e = build_edk(Series::of({1, 3, 5, 7}), EdkMode::Differences, cfg1());
  CHECK(e.constancy(cfg1()) == 2);
  CHECK(e.is_solution(cfg1()));
}

TEST_CASE("ratios of an increasing series never reach ones") {
  Edk e = build_edk(Series::of({1, 2, 3, 4}), EdkMode::Ratios, cfg1());
  CHECK_FALSE(e.constancy(cfg1()).has_value());
}

TEST_CASE("all-ones series is constant at the first ratio row") {
  Edk e = build_edk(Series::of({1, 1, 1, 1, 1}), EdkMode::Ratios, cfg2());
  CHECK(e.constancy(cfg2()) == 1);
}

TEST_CASE("fibonacci has no constant row before exhaustion") {
  Edk e = build_edk(Series::of({2, 3, 5, 8, 13, 21}), EdkMode::Differences,
                    cfg1());
  CHECK_FALSE(e.is_solution(cfg1()));
  CHECK(e.fully_built());
}

TEST_CASE("ratio mode rejects zero divisors") {
  CHECK_THROWS_AS(
      build_edk(Series::of({0, 1, 2}), EdkMode::Ratios, cfg1()),
      ZeroInRatioBase);
  CHECK_FALSE(
      Edk::try_build(Series::of({1, 0, 2}), EdkMode::Ratios, cfg1()).has_value());
}

TEST_CASE("constancy is monotone in the required level count") {
  Series s = Series::of({1, 3, 5, 7, 9});
  Edk e2 = build_edk(s, EdkMode::Differences, cfg2());
  REQUIRE(e2.constancy(cfg2()).has_value());
  CHECK(e2.constancy(cfg1()).has_value());
}

TEST_CASE("rebuild and telescoping invariants on random exact series") {
  std::mt19937_64 rng(20240817);
  for (int iter = 0; iter < 500; ++iter) {
    size_t n = 2 + rng() % 9;
    std::vector<Value> vals;
    for (size_t i = 0; i < n; ++i)
      vals.push_back(Value::exact(static_cast<long long>(rng() % 41) - 20));
    Series s{vals};
    Edk e = build_edk(s, EdkMode::Differences, cfg1());

    // recomputing each row from the one below reproduces it bit-exactly
    const std::vector<Value>* prev = &s.elements();
    for (int j = 1; j <= e.built_rows(); ++j) {
      const auto& row = e.row(j);
      REQUIRE(row.size() == prev->size() - 1);
      for (size_t i = 0; i + 1 < prev->size(); ++i)
        CHECK(row[i] == (*prev)[i + 1] - (*prev)[i]);
      prev = &row;
    }

    // sum of the first difference row telescopes to x_n - x_1
    Value sum = Value::exact(0);
    for (const auto& v : e.row(1)) sum = sum + v;
    CHECK(sum == s.at(n - 1) - s.at(0));
  }
}

TEST_CASE("ratio telescoping on random nonzero series") {
  std::mt19937_64 rng(424242);
  for (int iter = 0; iter < 300; ++iter) {
    size_t n = 2 + rng() % 7;
    std::vector<Value> vals;
    for (size_t i = 0; i < n; ++i) {
      long long v = static_cast<long long>(rng() % 19) - 9;
      if (v == 0) v = 7;
      vals.push_back(Value::exact(v));
    }
    Series s{vals};
    auto e = Edk::try_build(s, EdkMode::Ratios, cfg1());
    REQUIRE(e.has_value());
    Value prod = Value::exact(1);
    for (const auto& v : e->row(1)) prod = prod * v;
    CHECK(prod == s.at(n - 1) / s.at(0));
  }
}

TEST_CASE("epsilon only affects approximate values") {
  std::vector<Value> vals = {Value::approx(1.0), Value::approx(2.0),
                             Value::approx(3.0 + 1e-12)};
  Edk e = build_edk(Series(vals), EdkMode::Differences, cfg1());
  // second difference is ~1e-12 < e^-18 ~ 1.5e-8
  CHECK(e.constancy(cfg1()) == 2);

  Edk exact_e = build_edk(Series::of({1, 2, 3}), EdkMode::Differences, cfg1());
  CHECK(exact_e.constancy(cfg1()) == 2);
}
