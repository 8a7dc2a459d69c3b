#include "powerarith/congruence.hpp"
#include "powerarith/eval.hpp"

#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

using namespace powerarith;

namespace {

std::uint64_t brute_lambda(std::uint64_t n) {
    for (std::uint64_t m = 1;; ++m) {
        bool ok = true;
        for (std::uint64_t a = 1; a < n && ok; ++a) {
            if (std::gcd(a, n) != 1) continue;
            Int r;
            mpz_powm_ui(r.get_mpz_t(), Int(static_cast<unsigned long>(a)).get_mpz_t(), m,
                        Int(static_cast<unsigned long>(n)).get_mpz_t());
            ok = r == 1;
        }
        if (ok) return m;
    }
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t n) {
    std::uint64_t r = 1 % n;
    for (std::uint64_t i = 0; i < e; ++i) r = r * b % n;
    return r;
}

}  // namespace

TEST_SUITE("congruence") {

TEST_CASE("carmichael lambda: values and brute force") {
    CHECK(carmichael_lambda(8) == 2);
    CHECK(carmichael_lambda(1) == 1);
    CHECK(carmichael_lambda(15) == 4);
    CHECK(carmichael_lambda(561) == 80);
    for (std::uint64_t n = 1; n <= 300; ++n) CHECK_MESSAGE(carmichael_lambda(n) == brute_lambda(n), n);
}

TEST_CASE("power residue cycles") {
    auto a = power_residues(2, 7);
    CHECK(a.preperiod == 0);
    CHECK(a.period == 3);
    CHECK(a.residues == std::vector<std::uint64_t>{1, 2, 4});
    auto b = power_residues(2, 8);
    CHECK(b.preperiod == 3);
    CHECK(b.period == 1);
    CHECK(b.residues == std::vector<std::uint64_t>{1, 2, 4, 0});
    auto c = power_residues(5, 1);
    CHECK(c.period == 1);
    CHECK(c.residues == std::vector<std::uint64_t>{0});
    for (std::uint64_t base = 2; base <= 12; ++base) {
        for (std::uint64_t n = 1; n <= 60; ++n) {
            auto cyc = power_residues(Int(static_cast<unsigned long>(base)), n);
            for (std::uint64_t e = 0; e < 80; ++e) CHECK(cyc.residue_at(e) == pow_mod(base, e, n));
        }
    }
}

TEST_CASE("excluded residues") {
    CHECK(excluded_residues(2, 7) == std::vector<std::uint64_t>{3, 5, 6, 7});
    CHECK(excluded_residues(2, 3) == std::vector<std::uint64_t>{3});
    CHECK(excluded_residues(2, 1).empty());
}

TEST_CASE("crt") {
    auto r = crt_combine({make_congruence("x", 3, 1), make_congruence("x", 5, 2)});
    REQUIRE(r.satisfiable);
    CHECK(r.combined.modulus == 15);
    CHECK(r.combined.residue == 7);
    CHECK_FALSE(crt_combine({make_congruence("x", 3, 1), make_congruence("x", 3, 2)}).satisfiable);
    auto e = crt_combine({});
    CHECK(e.combined.modulus == 1);
    CHECK(e.combined.residue == 0);
    CHECK(make_congruence("x", 5, -1).residue == 4);
}

TEST_CASE("crt property: combined constraint matches brute force") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        CongruenceSystem sys;
        int n = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < n; ++i) {
            long m = 2 + static_cast<long>(rng() % 11);
            sys.push_back(make_congruence("x", m, static_cast<long>(rng() % 13)));
        }
        auto r = crt_combine(sys);
        for (long v = 0; v < 2000; ++v) {
            bool all = true;
            for (const auto& c : sys) all = all && c.satisfied_by(v);
            bool comb = r.satisfiable && r.combined.satisfied_by(v);
            if (all != comb) {
                FAIL("mismatch at " << v);
                break;
            }
        }
    }
}

TEST_CASE("exponent sets") {
    auto a = exponents_satisfying(2, {make_congruence("x", 7, 1)});
    auto p = a.progression();
    REQUIRE(p);
    CHECK(a.first(4) == std::vector<std::uint64_t>{0, 3, 6, 9});
    CHECK(exponents_satisfying(2, {make_congruence("x", 7, 3)}).empty());
    auto all = exponents_satisfying(3, {});
    CHECK(all.first(3) == std::vector<std::uint64_t>{0, 1, 2});
    // x = 0 mod 8 forces e >= 3; x = 2 mod 8 only e = 1.
    CHECK(exponents_satisfying(2, {make_congruence("x", 8, 0)}).first(2) == std::vector<std::uint64_t>{3, 4});
    auto one = exponents_satisfying(2, {make_congruence("x", 8, 2)});
    CHECK_FALSE(one.infinite());
    CHECK(one.first(5) == std::vector<std::uint64_t>{1});
}

TEST_CASE("exponent sets property: membership matches enumeration") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        std::uint64_t base = 2 + rng() % 9;
        CongruenceSystem sys;
        int n = static_cast<int>(rng() % 3);
        for (int i = 0; i < n; ++i) {
            long m = 2 + static_cast<long>(rng() % 30);
            sys.push_back(make_congruence("x", m, static_cast<long>(rng() % 30)));
        }
        auto set = exponents_satisfying(Int(static_cast<unsigned long>(base)), sys);
        for (std::uint64_t e = 0; e < 120; ++e) {
            Int v = ipow(Int(static_cast<unsigned long>(base)), e);
            bool ok = true;
            for (const auto& c : sys) ok = ok && c.satisfied_by(v);
            CHECK_MESSAGE(set.contains(e) == ok, "base " << base << " e " << e);
        }
        if (auto pr = set.progression()) {
            for (std::uint64_t i = 0; i < 5; ++i) {
                std::uint64_t e = pr->offset + pr->period * i;
                if (e >= pr->minimum) CHECK(set.contains(e));
            }
        }
    }
}

TEST_CASE("carmichael axioms") {
    auto c2 = car2_axiom(2, 3);
    CHECK(c2.formula == parse_formula("(forall x (-> (U 2 x) (not (D 3 (- x 3)))))"));
    auto c1 = car1_axiom(2, 1);
    CHECK(c1.formula == parse_formula("(forall x (-> (U 2 x) (or (= x 1) (not (D 2 (- x 1))))))"));
    EvalWindow w;
    CHECK(eval_window(c2.formula, w).kind == EvalResult::Kind::Pass);
    CHECK(eval_window(car1_axiom(2, 3).formula, w).kind == EvalResult::Kind::Pass);
    CHECK(eval_window(car1_axiom(3, 0).formula, w).kind == EvalResult::Kind::Pass);
    for (std::uint64_t n = 2; n <= 20; ++n) {
        if (n % 3 == 0) continue;
        CHECK(eval_window(car2_axiom(3, n).formula, w).kind == EvalResult::Kind::Pass);
    }
}

}
