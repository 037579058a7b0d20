#include <catch_amalgamated.hpp>

#include <random>

#include "ubg/rational.hpp"

using namespace ubg;

TEST_CASE("rational normalizes sign and lowest terms") {
  Rational r(6, -8);
  CHECK(r.num() == -3);
  CHECK(r.den() == 4);
  CHECK(Rational(0, -5) == Rational(0));
  CHECK(Rational(0, -5).den() == 1);
  CHECK(Rational(1, 2).str() == "1/2");
  CHECK(Rational(-7).str() == "-7");
}

TEST_CASE("rational field operations agree with cross multiplication") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> num(-1000, 1000), den(1, 1000);
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    const Rational x(a, b), y(c, d);
    CHECK(x + y == Rational(a * d + c * b, b * d));
    CHECK(x - y == Rational(a * d - c * b, b * d));
    CHECK(x * y == Rational(a * c, b * d));
    if (c != 0) CHECK(x / y == Rational(a * d, b * c));
    CHECK((x < y) == (a * d < c * b));
  }
}

TEST_CASE("rational overflow is reported, never wrapped") {
  const Rational big(INT64_MAX);
  CHECK_THROWS_AS(big + Rational(1), Error);
  CHECK_THROWS_AS(big * Rational(2), Error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
  try {
    (void)(big * big);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOverflow);
  }
  // Large intermediates that reduce back into range are fine.
  CHECK(Rational(INT64_MAX, 3) * Rational(3, INT64_MAX) == Rational(1));
}

TEST_CASE("dyadic normal form and arithmetic") {
  CHECK(Dyadic(4, 3) == Dyadic(1, 1));
  CHECK(Dyadic(4, 3).log2den() == 1);
  CHECK(Dyadic(0, 5).log2den() == 0);
  CHECK(Dyadic(1, 1) + Dyadic(1, 1) == Dyadic(1));
  CHECK(Dyadic(3, 2) * Dyadic(-1, 1) == Dyadic(-3, 3));
  CHECK(Dyadic(-1, 1).to_rational() == Rational(-1, 2));
  CHECK(Dyadic::from_rational(Rational(3, 8)) == Dyadic(3, 3));
  CHECK_THROWS_AS(Dyadic::from_rational(Rational(1, 3)), Error);
  CHECK(Dyadic(-1, 1) < Dyadic(0));
  CHECK(abs(Dyadic(-5, 2)) == Dyadic(5, 2));

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(-5000, 5000);
  std::uniform_int_distribution<int> k(0, 12);
  for (int i = 0; i < 2000; ++i) {
    const Dyadic a(num(rng), k(rng)), b(num(rng), k(rng));
    CHECK((a + b).to_rational() == a.to_rational() + b.to_rational());
    CHECK((a * b).to_rational() == a.to_rational() * b.to_rational());
    CHECK((a < b) == (a.to_rational() < b.to_rational()));
  }
}

TEST_CASE("bounds treat nullopt as infinity") {
  const Bound inf, one = Rational(1);
  CHECK(bound_less(one, inf));
  CHECK_FALSE(bound_less(inf, one));
  CHECK_FALSE(bound_less(inf, inf));
  CHECK(bound_min(inf, one) == one);
  CHECK(bound_str(inf) == "inf");
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational(" -3/6 ") == Rational(-1, 2));
  CHECK(parse_rational("+4") == Rational(4));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
}
