#include "powerarith/kronecker.hpp"

#include <doctest.h>

#include <chrono>
#include <random>

using namespace powerarith;

namespace {

// Smallest t whose fractional part lands in (lo, hi), by exact comparison.
std::uint64_t brute_frac_hit(const Int& k, const Int& l, const Rat& lo, const Rat& hi) {
    for (std::uint64_t t = 0;; ++t) {
        if (compare_frac(t, k, l, lo) > 0 && compare_frac(t, k, l, hi) < 0) return t;
    }
}

}  // namespace

TEST_SUITE("kronecker") {

TEST_CASE("documented fractional hits") {
    CHECK(find_frac_hit(2, 3, make_rat(1, 2), make_rat(3, 5)) == 1);
    CHECK(find_frac_hit(2, 3, make_rat(16, 100), make_rat(18, 100)) == 2);
    CHECK(find_frac_hit(2, 3, Rat(0), Rat(1)) == 1);
    CHECK_THROWS(find_frac_hit(2, 4, Rat(0), make_rat(1, 2)));
    CHECK_THROWS(find_frac_hit(2, 3, make_rat(1, 2), make_rat(1, 2)));
}

TEST_CASE("property: fractional hits are minimal") {
    std::mt19937_64 rng(17);
    const std::pair<long, long> pairs[] = {{2, 3}, {3, 5}, {2, 10}, {6, 7}};
    for (int i = 0; i < 60; ++i) {
        auto [k, l] = pairs[i % 4];
        long a = static_cast<long>(rng() % 190);
        Rat lo(a, 200), hi(a + 2 + static_cast<long>(rng() % 8), 200);
        CHECK(find_frac_hit(k, l, lo, hi) == brute_frac_hit(k, l, lo, hi));
    }
}

TEST_CASE("fine intervals need the high-precision path") {
    Rat lo(123456, 1000000), hi(1234567, 10000000);
    std::uint64_t t = find_frac_hit(2, 3, lo, hi);
    CHECK(t == 112710);
    auto f = frac_part(Int(static_cast<unsigned long>(t)), 2, 3, 64);
    CHECK(f.lo > lo);
    CHECK(f.hi < hi);
}

TEST_CASE("documented ratio witnesses") {
    auto a = find_ratio_in(2, 3, OpenInterval(Rat(1), Rat(2)));
    CHECK(a.s == 2);
    CHECK(a.t == 1);
    auto b = find_ratio_in(2, 3, OpenInterval(make_rat(7, 10), make_rat(8, 10)));
    CHECK(b.s == 6);
    CHECK(b.t == 4);
    auto c = find_ratio_in(2, 3, OpenInterval(Rat(1), Rat(3)));
    CHECK(c.s == 1);
    CHECK(c.t == 0);
    auto d = find_ratio_in(2, 3, OpenInterval(Rat(1000), std::nullopt));
    CHECK(ratio_in(2, 3, d, OpenInterval(Rat(1000), std::nullopt)));
}

TEST_CASE("property: ratio witnesses certify and take the least t") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 80; ++i) {
        Rat lo(1 + static_cast<long>(rng() % 9999), 100);
        Rat hi = lo * make_rat(101 + static_cast<long>(rng() % 20), 100);
        OpenInterval iv(lo, hi);
        auto t0 = std::chrono::steady_clock::now();
        auto w = find_ratio_in(2, 3, iv);
        CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(1));
        REQUIRE(ratio_in(2, 3, w, iv));
        for (std::uint64_t t = 0; t < w.t; ++t) {
            for (std::uint64_t s = 0; s < w.s + 40; ++s) CHECK_FALSE(ratio_in(2, 3, RatioWitness{s, t}, iv));
        }
    }
}

TEST_CASE("shifted images") {
    auto id = shifted_image(make_rat(1, 10), make_rat(2, 10), 0, 2, 3);
    REQUIRE(id.size() == 1);
    CHECK(*id[0].lo == make_rat(1, 10));
    CHECK(*id[0].hi == make_rat(2, 10));
    auto one = shifted_image(make_rat(1, 2), make_rat(6, 10), 1, 2, 3);
    REQUIRE(one.size() == 1);
    CHECK(*one[0].lo < make_rat(85, 1000));
    CHECK(*one[0].hi > make_rat(184, 1000));
    CHECK(*one[0].hi < make_rat(186, 1000));
    auto wrap = shifted_image(make_rat(3, 10), make_rat(5, 10), 1, 2, 3);
    CHECK(wrap.size() == 2);  // (0.885, 1.085) wraps past 1
}

TEST_CASE("property: shifted image encloses every shifted point") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        long a = static_cast<long>(rng() % 90);
        Rat lo(a, 100), hi(a + 1 + static_cast<long>(rng() % 9), 100);
        std::uint64_t w = rng() % 50;
        auto img = shifted_image(lo, hi, w, 2, 3);
        for (int j = 1; j < 10; ++j) {
            Rat x = lo + (hi - lo) * make_rat(j, 10);
            // fr(x + w log_2 3) from an independent enclosure.
            auto f = frac_part(Int(static_cast<unsigned long>(w)), 2, 3, 90);
            Rat y = x + f.lo;
            if (y >= 1) y -= 1;
            bool inside = false;
            for (const auto& iv : img) inside = inside || (*iv.lo <= y && y < *iv.hi);
            CHECK(inside);
        }
    }
}

TEST_CASE("two-variable systems") {
    // 3y < x < 4y
    auto r = solve_two_var(2, 3, {{Rat(1), Rat(-3)}, {Rat(-1), Rat(4)}});
    REQUIRE(r.sat);
    Int x = ipow(2, r.first.s), y = ipow(3, r.first.t);
    CHECK(3 * y < x);
    CHECK(x < 4 * y);
    CHECK_FALSE(solve_two_var(2, 3, {{Rat(1), Rat(-1)}, {Rat(-1), Rat(1)}}).sat);
    CHECK(solve_two_var(2, 3, {{Rat(1), Rat(0)}}).sat);
    TwoVarStream s(2, 3, OpenInterval(Rat(3), Rat(4)));
    std::uint64_t last = 0;
    for (int i = 0; i < 5; ++i) {
        auto w = s.next();
        CHECK(ratio_in(2, 3, w, OpenInterval(Rat(3), Rat(4))));
        if (i) CHECK(w.t > last);
        last = w.t;
    }
}

}
