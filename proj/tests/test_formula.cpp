#include "powerarith/formula.hpp"

#include <doctest.h>

#include <random>

using namespace powerarith;

namespace {

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    long small(long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

    Term term() {
        Term t(small(-5, 5));
        for (const char* v : {"x", "y", "z"}) {
            if (rng() % 2) t += Term::var(v, small(-3, 3));
        }
        return t;
    }

    Formula formula(int depth) {
        int pick = static_cast<int>(rng() % (depth > 0 ? 10 : 4));
        switch (pick) {
            case 0: return fm::eq(term(), term());
            case 1: return fm::lt(term(), term());
            case 2: return fm::U(small(2, 5), term());
            case 3: return fm::D(small(2, 9), term());
            case 4: return fm::neg(formula(depth - 1));
            case 5: return fm::conj({formula(depth - 1), formula(depth - 1)});
            case 6: return fm::disj({formula(depth - 1), formula(depth - 1), formula(depth - 1)});
            case 7: return fm::implies(formula(depth - 1), formula(depth - 1));
            case 8: return fm::forall(rng() % 2 ? "x" : "w", formula(depth - 1));
            default: return fm::exists(rng() % 2 ? "y" : "v", formula(depth - 1));
        }
    }
};

}  // namespace

TEST_SUITE("formula") {

TEST_CASE("terms stay canonical") {
    Term t = Term::var("y", 2) + Term::var("x") - Term::var("y", 2) + Term(3);
    CHECK(t.coefficients().size() == 1);
    CHECK(t.coefficient("x") == 1);
    CHECK(t.constant() == 3);
    CHECK(t.evaluate({{"x", 4}}) == 7);
    CHECK(t.substitute("x", 5).is_constant());
    CHECK(render(Term::var("x") - Term(1)) == "(- x 1)");
}

TEST_CASE("parse and render") {
    const char* texts[] = {
        "(forall x (-> (U 2 x) (not (D 3 (- x 3)))))",
        "(exists y (and (U 3 y) (< 0 y) (= (+ y 1) (scale 2 y))))",
        "(or true false (<-> (= x 1) (< x 1)))",
    };
    for (const char* t : texts) {
        Formula f = parse_formula(t);
        CHECK(parse_formula(render(f)) == f);
    }
    CHECK(render(parse_formula("(and)")) == "true");
    CHECK(render(parse_formula("(or)")) == "false");
    CHECK(parse_term("(- x y 3)") == Term::var("x") - Term::var("y") - Term(3));
    CHECK(parse_term("(scale 4 (+ x 1))") == Term::var("x", 4) + Term(4));
}

TEST_CASE("parse errors carry offsets") {
    CHECK_THROWS_AS(parse_formula("(forall x"), ParseError);
    CHECK_THROWS_AS(parse_formula("(D 1 x)"), ParseError);
    CHECK_THROWS_AS(parse_formula("(U x x)"), ParseError);
    CHECK_THROWS_AS(parse_formula("(= x)"), ParseError);
    try {
        parse_formula("(and (= x 1) (frob x))");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() >= 13);
    }
}

TEST_CASE("free variables") {
    Formula f = parse_formula("(forall x (exists y (= (+ x y) z)))");
    CHECK(free_variables(f) == std::set<std::string>{"z"});
    CHECK_FALSE(is_sentence(f));
    CHECK(is_sentence(parse_formula("(forall z (= z z))")));
}

TEST_CASE("property: render then parse is the identity") {
    Gen g(2024);
    for (int i = 0; i < 500; ++i) {
        Formula f = g.formula(4);
        std::string text = render(f);
        CHECK_MESSAGE(parse_formula(text) == f, text);
        CHECK(render(parse_formula(text)) == text);
    }
}

TEST_CASE("big integers survive json and text") {
    Int big("123456789012345678901234567890");
    CHECK(int_from_json(int_to_json(big)) == big);
    CHECK(int_from_json(int_to_json(Int(-7))) == -7);
    Formula f = fm::eq(Term::var("x"), big);
    CHECK(parse_formula(render(f)) == f);
}

}
