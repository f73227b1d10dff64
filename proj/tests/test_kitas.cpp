#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kitbit/apply.hpp"

#include <set>
#include <sstream>

using namespace kitbit;

namespace {

const ConstancyConfig kCfg{};

Edk diff_edk(std::initializer_list<long long> xs) {
  return build_edk(Series::of(xs), EdkMode::Differences, kCfg);
}

std::vector<long long> lls(const std::vector<Value>& vs) {
  std::vector<long long> out;
  for (const auto& v : vs) out.push_back(static_cast<long long>(v.integer()));
  return out;
}

std::vector<long long> child_base(const KitaApplication& app, size_t i) {
  return lls(app.children.at(i).base().elements());
}

// brute-force triangle for oracle walks, rows[0] = base
std::vector<std::vector<long long>> oracle_triangle(
    std::vector<long long> base) {
  std::vector<std::vector<long long>> rows{base};
  while (rows.back().size() > 1) {
    std::vector<long long> next;
    for (size_t i = 0; i + 1 < rows.back().size(); ++i)
      next.push_back(rows.back()[i + 1] - rows.back()[i]);
    rows.push_back(next);
  }
  return rows;
}

}  // namespace

TEST_CASE("DIV rebuilds the base as a ratio table") {
  auto app = apply(KitaInstance::div(), diff_edk({3, 6, 18, 72}), kCfg);
  REQUIRE(app);
  REQUIRE(app->children.size() == 1);
  CHECK(app->children[0].mode() == EdkMode::Ratios);
  CHECK(lls(app->children[0].row(1)) == std::vector<long long>{2, 3, 4});
}

TEST_CASE("DIV does not re-apply to a ratio edk") {
  Edk r = build_edk(Series::of({1, 2, 4, 8}), EdkMode::Ratios, kCfg);
  CHECK_FALSE(apply(KitaInstance::div(), r, kCfg).has_value());
}

TEST_CASE("RED focuses on an upper row") {
  Edk ratios = build_edk(Series::of({3, 3, 6, 18, 72}), EdkMode::Ratios, kCfg);
  auto app = apply(KitaInstance::red(1), ratios, kCfg);
  REQUIRE(app);
  CHECK(child_base(*app, 0) == std::vector<long long>{1, 2, 3, 4});
  CHECK(app->children[0].is_solution(kCfg));

  auto small = apply(KitaInstance::red(1), diff_edk({1, 2, 3}), kCfg);
  REQUIRE(small);
  CHECK(child_base(*small, 0) == std::vector<long long>{1, 1});

  // oracle: row 2 of the difference triangle of {0,1,3,7,15}
  auto tri = oracle_triangle({0, 1, 3, 7, 15});
  auto red2 = apply(KitaInstance::red(2), diff_edk({0, 1, 3, 7, 15}), kCfg);
  REQUIRE(red2);
  CHECK(child_base(*red2, 0) == tri[2]);
  CHECK(tri[2] == std::vector<long long>{1, 2, 4});

  CHECK_FALSE(apply(KitaInstance::red(3), diff_edk({1, 2, 3}), kCfg));
}

TEST_CASE("ML extracts slope children") {
  auto app =
      apply(KitaInstance::ml(1, 1), diff_edk({3, 5, 8, 13, 21, 34}), kCfg);
  REQUIRE(app);
  REQUIRE(app->children.size() == 2);
  CHECK(child_base(*app, 0) == std::vector<long long>{3, 3, 3});
  CHECK(child_base(*app, 1) == std::vector<long long>{2, 2, 2});
  CHECK(app->children[0].is_solution(kCfg));
  CHECK(app->children[1].is_solution(kCfg));
}

TEST_CASE("ML(0,1) copies the base row") {
  auto app = apply(KitaInstance::ml(0, 1), diff_edk({5, 5, 5}), kCfg);
  REQUIRE(app);
  REQUIRE(app->children.size() == 1);
  CHECK(child_base(*app, 0) == std::vector<long long>{5, 5, 5});
}

TEST_CASE("ML(2,1) walks a steeper slope from three origins") {
  // oracle: brute-force triangle walk with origins (0,1),(1,1),(2,1)
  std::vector<long long> base{1, 2, 4, 8, 16, 32};
  auto tri = oracle_triangle(base);
  auto walk = [&](int origin_row, int dy, int dx) {
    std::vector<long long> got;
    int y = origin_row, x = 1;
    while (y < static_cast<int>(tri.size()) &&
           x <= static_cast<int>(tri[y].size())) {
      got.push_back(tri[y][x - 1]);
      y += dy;
      x += dx;
    }
    return got;
  };
  auto app = apply(KitaInstance::ml(2, 1), diff_edk({1, 2, 4, 8, 16, 32}),
                   kCfg);
  REQUIRE(app);
  REQUIRE(app->children.size() == 3);
  for (int c = 0; c < 3; ++c)
    CHECK(child_base(*app, static_cast<size_t>(c)) == walk(c, 2, 1));
}

TEST_CASE("FOC splits interleaved series") {
  auto app = apply(KitaInstance::foc(0, {1, 1}),
                   diff_edk({-6, -4, 0, 2, 6, 8}), kCfg);
  REQUIRE(app);
  REQUIRE(app->children.size() == 2);
  CHECK(child_base(*app, 0) == std::vector<long long>{-6, 0, 6});
  CHECK(child_base(*app, 1) == std::vector<long long>{-4, 2, 8});
  CHECK(lls(app->children[0].row(1)) == std::vector<long long>{6, 6});

  auto ones = apply(KitaInstance::foc(0, {1, 1}), diff_edk({1, 1, 1, 1}),
                    kCfg);
  REQUIRE(ones);
  CHECK(child_base(*ones, 0) == std::vector<long long>{1, 1});
  CHECK(child_base(*ones, 1) == std::vector<long long>{1, 1});
}

TEST_CASE("FOC with an offset feeds remainders back, last series first") {
  // independent index simulation of the coordinate equation
  std::vector<long long> base{9, -6, -4, 0, 2, 6, 8};
  int n = 7, s = 1;
  std::vector<int> d{1, 1};
  int sd = 2;
  std::vector<std::vector<int>> coords(2);
  for (int m = 0; m < 2; ++m) {
    int f = m == 0 ? 0 : d[0];
    for (int p = 0; p <= (n - s + sd - 1) / sd - 1; ++p)
      for (int q = 1; q <= d[m]; ++q) {
        int c = s + f + q + p * sd;
        if (c <= n) coords[m].push_back(c);
      }
  }
  CHECK(coords[0] == std::vector<int>{2, 4, 6});
  CHECK(coords[1] == std::vector<int>{3, 5, 7});

  auto app = apply(KitaInstance::foc(1, {1, 1}),
                   diff_edk({9, -6, -4, 0, 2, 6, 8}), kCfg);
  REQUIRE(app);
  CHECK(child_base(*app, 0) == std::vector<long long>{-6, 0, 6});
  CHECK(child_base(*app, 1) == std::vector<long long>{9, -4, 2, 8});
  CHECK(app->child_remainder == std::vector<int>{0, 1});
}

TEST_CASE("FOC partition keeps every element exactly once") {
  std::vector<long long> base{4, 8, 15, 16, 23, 42, 7, 9};
  auto app = apply(KitaInstance::foc(1, {1, 1, 1}),
                   diff_edk({4, 8, 15, 16, 23, 42, 7, 9}), kCfg);
  REQUIRE(app);
  std::multiset<long long> seen;
  for (size_t c = 0; c < app->children.size(); ++c)
    for (long long v : child_base(*app, c)) seen.insert(v);
  CHECK(seen == std::multiset<long long>(base.begin(), base.end()));
}

TEST_CASE("ANA completes the last group from the previous ones") {
  auto app =
      apply(KitaInstance::ana(0, 4), diff_edk({1, 3, 5, 7, 2, 4}), kCfg);
  REQUIRE(app);
  REQUIRE(app->direct);
  CHECK(lls(app->direct->terms) == std::vector<long long>{6, 8});

  auto fives = apply(KitaInstance::ana(0, 2), diff_edk({5, 5, 5, 5, 5}), kCfg);
  REQUIRE(fives);
  CHECK(lls(fives->direct->terms) == std::vector<long long>{5});

  // oracle: per-group triangles of {1,2,3},{10,11,12} share constant row 1
  auto g1 = oracle_triangle({1, 2, 3});
  auto g2 = oracle_triangle({10, 11, 12});
  CHECK(g1[1] == std::vector<long long>{1, 1});
  CHECK(g2[1] == std::vector<long long>{1, 1});
  auto groups = apply(KitaInstance::ana(0, 3),
                      diff_edk({1, 2, 3, 10, 11, 12, 20, 21}), kCfg);
  REQUIRE(groups);
  CHECK(lls(groups->direct->terms) == std::vector<long long>{22});
}

TEST_CASE("ANA refuses groups without shared structure") {
  CHECK_FALSE(apply(KitaInstance::ana(0, 4),
                    diff_edk({1, 3, 5, 7, 2, 4, 9, 9, 9, 1}), kCfg));
}

TEST_CASE("EXP raises the base elementwise") {
  auto quarter = apply(KitaInstance::exp(BigRat(1, 4)),
                       diff_edk({1, 16, 81, 256}), kCfg);
  REQUIRE(quarter);
  CHECK(child_base(*quarter, 0) == std::vector<long long>{1, 2, 3, 4});
  CHECK(quarter->children[0].is_solution(kCfg));

  auto ident = apply(KitaInstance::exp(BigRat(1)), diff_edk({4, 7, 9}), kCfg);
  REQUIRE(ident);
  CHECK(child_base(*ident, 0) == std::vector<long long>{4, 7, 9});

  auto square = apply(KitaInstance::exp(BigRat(2)), diff_edk({1, 2, 3}), kCfg);
  REQUIRE(square);
  CHECK(child_base(*square, 0) == std::vector<long long>{1, 4, 9});

  CHECK_FALSE(apply(KitaInstance::exp(BigRat(1, 2)),
                    diff_edk({0, 1, 4, 9}), kCfg));
  CHECK(apply(KitaInstance::exp(BigRat(2)), diff_edk({-1, -2, -3}), kCfg)
            .has_value());
}

TEST_CASE("LOG builds the exponent chain") {
  auto app = apply(KitaInstance::log(), diff_edk({65536, 256, 16, 4}), kCfg);
  REQUIRE(app);
  const auto& b = app->children[0].base().elements();
  REQUIRE(b.size() == 3);
  for (const auto& v : b) {
    CHECK(v.is_exact());
    CHECK(v.str() == "1/2");
  }
  CHECK(app->children[0].is_solution(kCfg));

  auto sq = apply(KitaInstance::log(), diff_edk({2, 4, 16, 256}), kCfg);
  REQUIRE(sq);
  CHECK(lls(sq->children[0].base().elements()) ==
        std::vector<long long>{2, 2, 2});

  // oracle: 9 = 3^2, 81 = 9^2 via integer power testing
  auto p = apply(KitaInstance::log(), diff_edk({3, 9, 81}), kCfg);
  REQUIRE(p);
  CHECK(lls(p->children[0].base().elements()) ==
        std::vector<long long>{2, 2});

  CHECK_FALSE(apply(KitaInstance::log(), diff_edk({1, 2, 4}), kCfg));
  CHECK_FALSE(apply(KitaInstance::log(), diff_edk({2, 0, 4}), kCfg));
}

TEST_CASE("DOP alternates the two operators") {
  auto app = apply(KitaInstance::dop(ArithOp::Sub, ArithOp::Div),
                   diff_edk({3, 5, 10, 12, 24}), kCfg);
  REQUIRE(app);
  CHECK(child_base(*app, 0) == std::vector<long long>{2, 2, 2, 2});
  CHECK(app->children[0].is_solution(kCfg));

  auto zeros = apply(KitaInstance::dop(ArithOp::Add, ArithOp::Add),
                     diff_edk({0, 0, 0}), kCfg);
  REQUIRE(zeros);
  CHECK(child_base(*zeros, 0) == std::vector<long long>{0, 0});

  // first operator acts on odd positions: x2*x1, x3-x2, x4*x3
  auto mixed = apply(KitaInstance::dop(ArithOp::Mul, ArithOp::Sub),
                     diff_edk({1, 2, 3, 1}), kCfg);
  REQUIRE(mixed);
  CHECK(child_base(*mixed, 0) == std::vector<long long>{2, 1, 3});

  CHECK_FALSE(apply(KitaInstance::dop(ArithOp::Sub, ArithOp::Div),
                    diff_edk({3, 0, 10}), kCfg));
}

TEST_CASE("SSYM mirrors around the strongest pivot") {
  auto app = apply(KitaInstance::ssym(), diff_edk({1, 2, 4, 8, 4}), kCfg);
  REQUIRE(app);
  REQUIRE(app->direct);
  CHECK(app->direct->ssym_pivot == 4);
  CHECK(lls(app->direct->terms) == std::vector<long long>{2, 1});

  // complete palindrome: nothing left to mirror
  auto done = apply(KitaInstance::ssym(), diff_edk({1, 2, 1}), kCfg);
  REQUIRE(done);
  CHECK(done->direct->terms.empty());

  // oracle: scan all pivots by hand for {5,7,9,7} -> only j=3 works
  std::vector<long long> base{5, 7, 9, 7};
  int valid = 0;
  for (int j = 2; j <= 3; ++j) {
    bool ok = true;
    for (int m = 1; j + m <= 4; ++m)
      ok = ok && j - m >= 1 && base[j + m - 1] == base[j - m - 1];
    if (ok) valid = j;
  }
  CHECK(valid == 3);
  auto sp = apply(KitaInstance::ssym(), diff_edk({5, 7, 9, 7}), kCfg);
  REQUIRE(sp);
  CHECK(sp->direct->ssym_pivot == 3);
  CHECK(lls(sp->direct->terms) == std::vector<long long>{5});

  CHECK_FALSE(apply(KitaInstance::ssym(), diff_edk({1, 2, 3, 4}), kCfg));
}

TEST_CASE("RSYM finds the smallest repeating group") {
  auto app = apply(KitaInstance::rsym(), diff_edk({1, 0, 2, 1, 0}), kCfg);
  REQUIRE(app);
  REQUIRE(app->direct);
  CHECK(app->direct->rsym_period == 3);
  CHECK(lls(app->direct->take(2)) == std::vector<long long>{2, 1});

  auto twos = apply(KitaInstance::rsym(), diff_edk({4, 4, 4, 4}), kCfg);
  REQUIRE(twos);
  CHECK(twos->direct->rsym_period == 2);
  CHECK(lls(twos->direct->take(3)) == std::vector<long long>{4, 4, 4});

  auto alt = apply(KitaInstance::rsym(), diff_edk({1, 2, 1, 2, 1}), kCfg);
  REQUIRE(alt);
  CHECK(alt->direct->rsym_period == 2);
  CHECK(lls(alt->direct->take(3)) == std::vector<long long>{2, 1, 2});

  CHECK_FALSE(apply(KitaInstance::rsym(), diff_edk({1, 2, 3}), kCfg));
}

TEST_CASE("DGE groups equal runs into values and lengths") {
  auto app = apply(KitaInstance::dge(), diff_edk({1, 3, 3, 5, 5, 5}), kCfg);
  REQUIRE(app);
  CHECK(child_base(*app, 0) == std::vector<long long>{1, 3, 5});
  CHECK(child_base(*app, 1) == std::vector<long long>{1, 2, 3});

  CHECK_FALSE(apply(KitaInstance::dge(), diff_edk({7, 7, 7, 7}), kCfg));
  // all runs of length one leave nothing to compress
  CHECK_FALSE(apply(KitaInstance::dge(), diff_edk({1, 2, 3}), kCfg));

  // oracle: run-length encoding of {2,2,9,9,9,4}
  auto rle = apply(KitaInstance::dge(), diff_edk({2, 2, 9, 9, 9, 4}), kCfg);
  REQUIRE(rle);
  CHECK(child_base(*rle, 0) == std::vector<long long>{2, 9, 4});
  CHECK(child_base(*rle, 1) == std::vector<long long>{2, 3, 1});
}

TEST_CASE("DGD splits growing prefixes of the distinct sequence") {
  auto app = apply(KitaInstance::dgd(), diff_edk({2, 2, 4, 2, 4, 6}), kCfg);
  REQUIRE(app);
  CHECK(child_base(*app, 0) == std::vector<long long>{2, 4, 6});
  CHECK(child_base(*app, 1) == std::vector<long long>{1, 2, 3});

  auto rep = apply(KitaInstance::dgd(), diff_edk({1, 2, 1, 2, 1, 2}), kCfg);
  REQUIRE(rep);
  CHECK(child_base(*rep, 0) == std::vector<long long>{1, 2});
  CHECK(child_base(*rep, 1) == std::vector<long long>{2, 2, 2});

  CHECK_FALSE(apply(KitaInstance::dgd(), diff_edk({3, 3, 3}), kCfg));
  CHECK_FALSE(apply(KitaInstance::dgd(), diff_edk({1, 2, 1, 3}), kCfg));
}

TEST_CASE("SOE splits repdigits into digit and count") {
  auto app = apply(KitaInstance::soe(), diff_edk({1, 11, 111}), kCfg);
  REQUIRE(app);
  CHECK(child_base(*app, 0) == std::vector<long long>{1, 1, 1});
  CHECK(child_base(*app, 1) == std::vector<long long>{1, 2, 3});

  auto tw = apply(KitaInstance::soe(), diff_edk({22, 222, 2222}), kCfg);
  REQUIRE(tw);
  CHECK(child_base(*tw, 0) == std::vector<long long>{2, 2, 2});
  CHECK(child_base(*tw, 1) == std::vector<long long>{2, 3, 4});

  auto pair = apply(KitaInstance::soe(), diff_edk({5, 55}), kCfg);
  REQUIRE(pair);
  CHECK(child_base(*pair, 0) == std::vector<long long>{5, 5});
  CHECK(child_base(*pair, 1) == std::vector<long long>{1, 2});

  CHECK_FALSE(apply(KitaInstance::soe(), diff_edk({12, 111}), kCfg));
  CHECK_FALSE(apply(KitaInstance::soe(), diff_edk({-1, 11}), kCfg));
}

TEST_CASE("forward application is deterministic") {
  Edk e = diff_edk({3, 5, 8, 13, 21, 34});
  auto a = apply(KitaInstance::ml(1, 1), e, kCfg);
  auto b = apply(KitaInstance::ml(1, 1), e, kCfg);
  REQUIRE(a);
  REQUIRE(b);
  REQUIRE(a->children.size() == b->children.size());
  for (size_t i = 0; i < a->children.size(); ++i)
    CHECK(a->children[i].base().elements() ==
          b->children[i].base().elements());
}

TEST_CASE("catalog profiles") {
  Catalog iq = default_catalog(CatalogProfile::Iq);
  CHECK(iq.kitas.front() == KitaInstance::bas());
  bool has_red1 = false, has_foc11 = false;
  for (const auto& k : iq.kitas) {
    if (k == KitaInstance::red(1)) has_red1 = true;
    if (k == KitaInstance::foc(0, {1, 1})) has_foc11 = true;
  }
  CHECK(has_red1);
  CHECK(has_foc11);

  Catalog deep = default_catalog(CatalogProfile::OeisDeep);
  CHECK(deep.kitas.size() <= 34);
  CHECK(deep.kitas.front() == KitaInstance::bas());
}

TEST_CASE("catalog serialization round-trips") {
  Catalog iq = default_catalog(CatalogProfile::Iq);
  std::istringstream in(iq.serialize());
  auto back = Catalog::parse(in, "iq");
  REQUIRE(back);
  REQUIRE(back->kitas.size() == iq.kitas.size());
  for (size_t i = 0; i < iq.kitas.size(); ++i)
    CHECK(back->kitas[i] == iq.kitas[i]);
}

TEST_CASE("kita display names") {
  CHECK(KitaInstance::bas().display() == "BASIC");
  CHECK(KitaInstance::red(1).display() == "RED(1)");
  CHECK(KitaInstance::foc(0, {1, 1}).display() == "FOC(0,{1,1})");
  CHECK(KitaInstance::exp(BigRat(1, 2)).display() == "EXP(1/2)");
  CHECK(KitaInstance::dop(ArithOp::Sub, ArithOp::Div).display() ==
        "DOP(-,/)");
  CHECK(KitaInstance::red(1).serialize() == "RED 1");
  CHECK(KitaInstance::foc(0, {1, 1}).serialize() == "FOC 0 1,1");
}
