#include "powerarith/sat.hpp"

#include <doctest.h>

#include <random>

using namespace powerarith;

namespace {

SatProblem problem(const char* text) { return SatProblem::from_json(nlohmann::json::parse(text)); }

bool literal_holds(const Formula& f, const std::map<std::string, Int>& env) {
    if (f.op == Op::Not) return !literal_holds(f.args[0], env);
    switch (f.op) {
        case Op::Eq: return f.lhs.evaluate(env) == f.rhs.evaluate(env);
        case Op::Lt: return f.lhs.evaluate(env) < f.rhs.evaluate(env);
        case Op::D: return mpz_divisible_p(f.lhs.evaluate(env).get_mpz_t(), f.param.get_mpz_t()) != 0;
        default: return false;
    }
}

// Any assignment with exponents <= emax.
bool brute(const SatProblem& p, std::uint64_t emax) {
    std::vector<std::uint64_t> e(p.vars.size(), 0);
    while (true) {
        std::map<std::string, Int> env;
        for (std::size_t i = 0; i < e.size(); ++i) env[p.vars[i].id] = ipow(p.vars[i].base, e[i]);
        bool ok = true;
        for (const auto& l : p.literals) ok = ok && literal_holds(l, env);
        if (ok) return true;
        std::size_t i = e.size();
        while (i > 0 && e[i - 1] == emax) e[--i] = 0;
        if (i == 0) return false;
        ++e[i - 1];
    }
}

}  // namespace

TEST_SUITE("sat") {

TEST_CASE("documented problems") {
    auto a = problem(R"J({"vars":[{"id":"x","base":3},{"id":"y","base":2}],
                        "literals":["(= (- x y) 1)","(< x 5)"]})J");
    auto ra = sat_conjunction(a);
    REQUIRE(ra.kind == SatResult::Kind::Sat);
    CHECK(ra.exponents.at("x") == 1);
    CHECK(ra.exponents.at("y") == 1);
    auto js = ra.to_json(a);
    CHECK(js.at("values").at("x") == 3);

    auto b = problem(R"J({"vars":[{"id":"x","base":2},{"id":"y","base":2},{"id":"z","base":2}],
                        "literals":["(= (+ x y) z)","(not (= x y))"]})J");
    CHECK(sat_conjunction(b).kind == SatResult::Kind::Unsat);

    auto c = problem(R"J({"vars":[],"literals":[]})J");
    CHECK(sat_conjunction(c).kind == SatResult::Kind::Sat);
}

TEST_CASE("congruences and order") {
    auto a = problem(R"J({"vars":[{"id":"x","base":2},{"id":"y","base":2}],
                        "literals":["(< x y)","(< y (scale 4 x))","(D 3 (- x 1))","(D 3 (- y 1))"]})J");
    CHECK(sat_conjunction(a).kind == SatResult::Kind::Unsat);
    auto b = problem(R"J({"vars":[{"id":"x","base":2},{"id":"y","base":3}],
                        "literals":["(< (scale 1000 x) y)","(not (D 5 (- x 1)))","(D 7 (- y 2))"]})J");
    auto rb = sat_conjunction(b);
    REQUIRE(rb.kind == SatResult::Kind::Sat);
    Int x = ipow(2, rb.exponents.at("x")), y = ipow(3, rb.exponents.at("y"));
    CHECK(1000 * x < y);
    CHECK((x - 1) % 5 != 0);
    CHECK((y - 2) % 7 == 0);
}

TEST_CASE("property: verdicts agree with brute force") {
    std::mt19937_64 rng(31);
    int decided = 0;
    for (int i = 0; i < 150; ++i) {
        SatProblem p;
        std::size_t n = 1 + rng() % 3;
        for (std::size_t v = 0; v < n; ++v) {
            p.vars.push_back({std::string(1, static_cast<char>('x' + v)), Int(rng() % 2 ? 2 : 3)});
        }
        auto term = [&] {
            Term t(static_cast<long>(rng() % 7) - 3);
            for (const auto& v : p.vars) {
                if (rng() % 2) t += Term::var(v.id, static_cast<long>(rng() % 5) - 2);
            }
            return t;
        };
        std::size_t lits = 1 + rng() % 3;
        for (std::size_t l = 0; l < lits; ++l) {
            Formula f;
            switch (rng() % 4) {
                case 0: f = fm::eq(term(), Term(0L)); break;
                case 1: f = fm::lt(term(), Term(0L)); break;
                case 2: f = fm::D(static_cast<long>(2 + rng() % 4), term()); break;
                default: f = fm::neg(fm::eq(term(), Term(0L))); break;
            }
            p.literals.push_back(f);
        }
        auto r = sat_conjunction(p);
        if (r.kind == SatResult::Kind::Unknown) continue;
        ++decided;
        if (r.kind == SatResult::Kind::Sat) {
            std::map<std::string, Int> env;
            for (const auto& v : p.vars) env[v.id] = ipow(v.base, r.exponents.at(v.id));
            for (const auto& l : p.literals) CHECK_MESSAGE(literal_holds(l, env), render(l));
        } else {
            CHECK_MESSAGE(!brute(p, n == 3 ? 12 : 24), nlohmann::json(p.literals.size()).dump());
        }
    }
    CHECK(decided >= 120);
}

}
