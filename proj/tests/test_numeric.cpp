#include "powerarith/numeric.hpp"

#include <doctest.h>

#include <random>

using namespace powerarith;

namespace {

// lo < log_k l < hi  <=>  k^{lo} < l < k^{hi}, checked with exact powers.
bool brackets(const Int& k, const Int& l, const Rat& lo, const Rat& hi) {
    auto below = [&](const Rat& r) {  // k^r < l  <=>  k^{num} < l^{den}
        return ipow(k, r.get_num().get_ui()) < ipow(l, r.get_den().get_ui());
    };
    auto above = [&](const Rat& r) { return ipow(k, r.get_num().get_ui()) > ipow(l, r.get_den().get_ui()); };
    return below(lo) && above(hi);
}

}  // namespace

TEST_SUITE("numeric") {

TEST_CASE("parse and print rationals") {
    CHECK(parse_rat("-3/4") == make_rat(-3, 4));
    CHECK(parse_rat("0.125") == make_rat(1, 8));
    CHECK(parse_rat("-2.5") == make_rat(-5, 2));
    CHECK(parse_int("12345678901234567890") == Int("12345678901234567890"));
    CHECK(to_string(make_rat(6, 4)) == "3/2");
    CHECK_THROWS(parse_rat("1/0"));
    CHECK_THROWS(parse_int("x"));
}

TEST_CASE("floor_log against repeated multiplication") {
    for (unsigned long b = 2; b <= 12; ++b) {
        for (unsigned long v = 1; v <= 5000; v += 7) {
            std::uint64_t n = 0;
            Int p = b;
            while (p <= v) {
                p *= b;
                ++n;
            }
            CHECK(floor_log(Int(b), Int(v)) == n);
        }
    }
}

TEST_CASE("multiplicative independence") {
    CHECK(mult_independent(2, 3));
    CHECK_FALSE(mult_independent(4, 8));
    CHECK_FALSE(mult_independent(2, 2));
    auto d = dependence(4, 8);
    REQUIRE(d);
    CHECK(ipow(4, d->m) == ipow(8, d->n));
    // Oracle: k^m == l^n for some m, n <= 12.
    for (unsigned long k = 2; k <= 40; ++k) {
        for (unsigned long l = 2; l <= 40; ++l) {
            bool dep = false;
            for (std::uint64_t m = 1; m <= 12 && !dep; ++m) {
                for (std::uint64_t n = 1; n <= 12 && !dep; ++n) dep = ipow(Int(k), m) == ipow(Int(l), n);
            }
            CHECK_MESSAGE(mult_independent(Int(k), Int(l)) == !dep, k << " " << l);
        }
    }
}

TEST_CASE("log enclosures") {
    auto e = log_enclosure(2, 3, 4);
    CHECK(e.width() <= make_rat(1, 16));
    CHECK(brackets(2, 3, e.lo, e.hi));
    CHECK(log_enclosure(2, 2, 30).exact());
    CHECK(log_enclosure(2, 2, 30).lo == 1);
    CHECK(log_enclosure(2, 4, 30).lo == 2);
    CHECK(log_enclosure(8, 4, 30).lo == make_rat(2, 3));
    for (unsigned bits : {8u, 20u, 40u}) {
        auto f = log_enclosure(3, 10, bits);
        CHECK(f.width() <= make_rat(1, Int(1) << bits));
        // Rounded outward to 2^-16 so the exact powers stay small.
        CHECK(brackets(3, 10, make_rat(floor_of(f.lo * 65536), 65536), make_rat(ceil_of(f.hi * 65536), 65536)));
    }
}

TEST_CASE("log enclosures beyond the exact expansion stay certified") {
    // Far past the exact expansion; a 12-bit rounding of the bounds is still
    // checkable with exact powers.
    auto e = log_enclosure(2, 3, 200);
    CHECK(e.width() <= make_rat(1, Int(1) << 200));
    Rat lo = make_rat(floor_of(e.lo * 4096), 4096);
    Rat hi = make_rat(ceil_of(e.hi * 4096), 4096);
    CHECK(brackets(2, 3, lo, hi));
    CHECK(hi - lo == make_rat(1, 4096));
}

TEST_CASE("continued fraction of log_2 3") {
    LogExpansion ex(2, 3);
    while (ex.depth() < 6) ex.extend();
    std::vector<Int> expect{1, 1, 1, 2, 2, 3};
    CHECK(ex.partial_quotients() == expect);
    auto [p, q] = ex.convergent(5);
    CHECK(p == 65);
    CHECK(q == 41);
}

TEST_CASE("fractional parts") {
    auto a = frac_part(1, 2, 3, 20);
    CHECK(a.integer_part == 1);
    CHECK(a.lo < make_rat(58497, 100000));
    CHECK(a.hi > make_rat(58496, 100000));
    auto z = frac_part(0, 2, 3, 20);
    CHECK(z.exact());
    CHECK(z.lo == 0);
    auto b = frac_part(2, 2, 3, 20);
    CHECK(b.integer_part == 3);
    CHECK(b.lo < make_rat(16993, 100000));
    CHECK(b.hi > make_rat(16992, 100000));
    CHECK(b.hi - b.lo <= make_rat(1, 1 << 20));
}

TEST_CASE("compare_frac property: agrees with enclosures") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t t = rng() % 60 + 1;
        Rat r(static_cast<long>(rng() % 97), 97);
        auto f = frac_part(Int(static_cast<unsigned long>(t)), 2, 3, 80);
        int c = compare_frac(t, 2, 3, r);
        if (f.hi < r) CHECK(c < 0);
        if (f.lo > r) CHECK(c > 0);
    }
}

TEST_CASE("power_exponent") {
    CHECK(power_exponent(1024, 2) == 10u);
    CHECK(power_exponent(1, 7) == 0u);
    CHECK_FALSE(power_exponent(12, 2));
    CHECK_FALSE(power_exponent(0, 2));
    CHECK_FALSE(power_exponent(-8, 2));
}

}
