#include "cfaudit/rational.hpp"

#include "cfaudit/errors.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using cfaudit::ParseError;
using cfaudit::Rat;

TEST_CASE("rationals normalize on construction") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-2, 4) == Rat(-1, 2));
    CHECK(Rat(2, -4) == Rat(-1, 2));
    CHECK(Rat(-2, -4) == Rat(1, 2));
    CHECK(Rat(0, 7) == Rat(0));
    CHECK(Rat(0, -7).den() == 1);
    CHECK(Rat(6, 3).str() == "2");
    CHECK_THROWS_AS(Rat(1, 0), std::domain_error);
}

TEST_CASE("field identities hold exactly on a value grid") {
    std::vector<Rat> grid;
    for (int num = -4; num <= 4; ++num) {
        for (int den = 1; den <= 4; ++den) grid.emplace_back(num, den);
    }
    for (const auto& a : grid) {
        for (const auto& b : grid) {
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            CHECK(a - b == -(b - a));
            if (!b.is_zero()) CHECK((a / b) * b == a);
            for (const auto& c : grid) {
                CHECK((a + b) + c == a + (b + c));
                CHECK(a * (b + c) == a * b + a * c);
            }
        }
    }
}

TEST_CASE("ordering is exact and matches cross multiplication") {
    CHECK(Rat(1, 3) < Rat(2, 5));
    CHECK(Rat(-1, 2) < Rat(-1, 3));
    CHECK(Rat(7, 10) > Rat(2, 3));
    CHECK(Rat(2, 4) <= Rat(1, 2));
    CHECK(Rat(1'000'000'007, 1'000'000'009) < Rat(1));
}

TEST_CASE("parse accepts p/q, integers, and exact decimals") {
    CHECK(Rat::parse("1/2") == Rat(1, 2));
    CHECK(Rat::parse("-3/4") == Rat(-3, 4));
    CHECK(Rat::parse("9/-12") == Rat(-3, 4));
    CHECK(Rat::parse("+2/6") == Rat(1, 3));
    CHECK(Rat::parse("7") == Rat(7));
    CHECK(Rat::parse("-7") == Rat(-7));
    CHECK(Rat::parse("0.45") == Rat(9, 20));
    CHECK(Rat::parse("0.9") == Rat(9, 10));
    CHECK(Rat::parse("-0.2") == Rat(-1, 5));
    CHECK(Rat::parse("1.0") == Rat(1));
    CHECK(Rat::parse("0.125") == Rat(1, 8));
}

TEST_CASE("parse rejects malformed literals") {
    for (const char* bad : {"", "abc", "1/", "/2", "1.2.3", "1.", ".5", "1 / 2", "1/2x", "--1",
                            "1/0", "0x10"}) {
        CHECK_THROWS_AS(Rat::parse(bad), ParseError);
    }
}

TEST_CASE("str round-trips through parse") {
    for (int num = -7; num <= 7; ++num) {
        for (int den = 1; den <= 9; ++den) {
            const Rat value(num, den);
            CHECK(Rat::parse(value.str()) == value);
        }
    }
    CHECK(Rat(9, 10).str() == "9/10");
    CHECK(Rat(-1, 5).str() == "-1/5");
}

TEST_CASE("overflow throws instead of wrapping") {
    const std::int64_t big = INT64_C(5'000'000'000'000'000'000);
    CHECK_THROWS_AS(Rat(big) + Rat(big), std::overflow_error);
    CHECK_THROWS_AS(Rat(big) * Rat(3), std::overflow_error);
    // Near misses still work because intermediates are 128-bit.
    CHECK(Rat(big) + Rat(-big) == Rat(0));
    CHECK(Rat(big, 3) * Rat(3, big) == Rat(1));
}

TEST_CASE("probability-style accumulation stays exact") {
    Rat sum(0);
    for (int i = 0; i < 10; ++i) sum += Rat(1, 10);
    CHECK(sum == Rat(1));
    CHECK(Rat(9, 10).to_double() == doctest::Approx(0.9));
}
