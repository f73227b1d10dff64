#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kitbit/value.hpp"

using namespace kitbit;

TEST_CASE("exact rationals stay canonical") {
  Value a = Value::exact(BigRat(6, 4));
  CHECK(a.str() == "3/2");
  Value b = Value::exact(BigRat(-6, 4));
  CHECK(b.str() == "-3/2");
  CHECK((a + b).is_zero());
  CHECK((a * Value::exact(2)).str() == "3");
}

TEST_CASE("exactness is preserved and approx contaminates") {
  Value e = Value::exact(1) / Value::exact(3);
  CHECK(e.is_exact());
  Value ap = Value::approx(0.5);
  CHECK_FALSE((e + ap).is_exact());
  CHECK_THROWS_AS(Value::approx(1.0 / 0.0), DomainError);
  CHECK_THROWS_AS(Value::exact(1) / Value::exact(0), DomainError);
}

TEST_CASE("integer kth root") {
  auto [r1, ok1] = int_kth_root(BigInt(4294967296LL), 2);
  CHECK(ok1);
  CHECK(r1 == 65536);
  auto [r2, ok2] = int_kth_root(BigInt(81), 4);
  CHECK(ok2);
  CHECK(r2 == 3);
  auto [r3, ok3] = int_kth_root(BigInt(80), 4);
  CHECK_FALSE(ok3);
  CHECK(r3 == 2);
}

TEST_CASE("pow_value exact and approximate paths") {
  auto v = pow_value(Value::exact(16), BigRat(1, 4));
  REQUIRE(v);
  CHECK(v->is_exact());
  CHECK(v->str() == "2");

  auto w = pow_value(Value::exact(2), BigRat(1, 2));
  REQUIRE(w);
  CHECK_FALSE(w->is_exact());
  CHECK(w->to_double() == doctest::Approx(std::sqrt(2.0)));

  CHECK_FALSE(pow_value(Value::exact(-4), BigRat(1, 2)).has_value());
  auto neg = pow_value(Value::exact(-8), BigRat(1, 3));
  REQUIRE(neg);
  CHECK(neg->str() == "-2");

  auto inv = pow_value(Value::exact(BigRat(1, 4)), BigRat(-1));
  REQUIRE(inv);
  CHECK(inv->str() == "4");
}

TEST_CASE("log_value probes exact exponents") {
  auto v = log_value(Value::exact(65536), Value::exact(256));
  REQUIRE(v);
  CHECK(v->is_exact());
  CHECK(v->str() == "1/2");

  auto w = log_value(Value::exact(3), Value::exact(81));
  REQUIRE(w);
  CHECK(w->str() == "4");

  auto neg = log_value(Value::exact(4), Value::exact(BigRat(1, 2)));
  REQUIRE(neg);
  CHECK(neg->str() == "-1/2");

  auto ap = log_value(Value::exact(5), Value::exact(9));
  REQUIRE(ap);
  CHECK_FALSE(ap->is_exact());
  CHECK(ap->to_double() == doctest::Approx(std::log(9.0) / std::log(5.0)));
}

TEST_CASE("parse_value handles integers, fractions and decimals") {
  CHECK(parse_value("42")->str() == "42");
  CHECK(parse_value("-7")->str() == "-7");
  CHECK(parse_value("1/3")->str() == "1/3");
  CHECK(parse_value("0.5")->str() == "1/2");
  CHECK(parse_value("-11.59375")->str() == "-371/32");
  CHECK(parse_value("3.6180")->str() == "1809/500");
  CHECK_FALSE(parse_value("abc").has_value());
  CHECK_FALSE(parse_value("1/0").has_value());
  CHECK_FALSE(parse_value("").has_value());
}

TEST_CASE("approx rendering uses 12 significant digits") {
  Value v = Value::approx(std::sqrt(2.0));
  CHECK(v.str() == "1.41421356237");
}
