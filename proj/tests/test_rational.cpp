#include <catch2/catch.hpp>

#include "support.hpp"

using namespace qbel;
using support::Rng;

TEST_CASE("rationals reduce to canonical form") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(6, 4).numerator() == 3);
    CHECK(Rational(6, 4).denominator() == 2);
}

TEST_CASE("exact arithmetic") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
    CHECK(Rational(1, 2) / Rational(3, 2) == Rational(1, 3));
    CHECK(-Rational(3, 7) == Rational(-3, 7));
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("ordering is exact") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(-1, 3));
    CHECK(Rational(2, 6) <= Rational(1, 3));
    CHECK(Rational(7, 10) > Rational(2, 3));
}

TEST_CASE("rounding half away from zero") {
    CHECK(Rational(3, 2).round_half_away() == 2);
    CHECK(Rational(-3, 2).round_half_away() == -2);
    CHECK(Rational(5, 2).round_half_away() == 3);
    CHECK(Rational(1, 3).round_half_away() == 0);
    CHECK(Rational(5, 3).round_half_away() == 2);
    CHECK(Rational(4, 9).round_half_away() == 0);
    CHECK(Rational(8, 9).round_half_away() == 1);
    CHECK(Rational(16, 6).round_half_away() == 3);
    CHECK(Rational(10, 6).round_half_away() == 2);
    CHECK(Rational(-4, 9).round_half_away() == 0);
    CHECK(Rational(7).round_half_away() == 7);
}

TEST_CASE("parse and render") {
    CHECK(Rational::parse("3/10") == Rational(3, 10));
    CHECK(Rational::parse("0.3") == Rational(3, 10));
    CHECK(Rational::parse("1.1") == Rational(11, 10));
    CHECK(Rational::parse("-0.25") == Rational(-1, 4));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational(8, 3).str() == "8/3");
    CHECK(Rational(-5).str() == "-5");
    CHECK(Rational(3, 10).decimal_str() == "0.3");
    CHECK(Rational(11, 10).decimal_str() == "1.1");
    CHECK(Rational(1, 4).decimal_str() == "0.25");
    CHECK(Rational(-1, 8).decimal_str() == "-0.125");
    CHECK(Rational(1, 3).decimal_str() == "1/3");
    CHECK(Rational(1).decimal_str() == "1");
    CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
    CHECK_THROWS_AS(Rational::parse("x"), ParseError);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), ParseError);
}

TEST_CASE("overflow is detected, not wrapped") {
    Rational huge(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(huge * huge, std::overflow_error);
}

TEST_CASE("field identities on random values") {
    Rng rng(20260808);
    for (int i = 0; i < 500; ++i) {
        Rational a = support::rand_rational(rng), b = support::rand_rational(rng);
        CHECK((a + b) - b == a);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        if (!b.is_zero()) CHECK(a * b / b == a);
        CHECK(Rational::parse(a.decimal_str()) == a);
    }
}
