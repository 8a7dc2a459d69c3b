#include "powerarith/eval.hpp"

#include <doctest.h>

#include <random>

using namespace powerarith;

namespace {

// Every quantifier ranges over [-n, n]. With height == bound this is the
// windowed semantics whichever variables count as guarded.
bool naive(const Formula& f, Assignment& env, long n) {
    switch (f.op) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Eq:
        case Op::Lt:
        case Op::U:
        case Op::D: return atom_holds(f, env);
        case Op::Not: return !naive(f.args[0], env, n);
        case Op::And:
            for (const auto& a : f.args) {
                if (!naive(a, env, n)) return false;
            }
            return true;
        case Op::Or:
            for (const auto& a : f.args) {
                if (naive(a, env, n)) return true;
            }
            return false;
        case Op::Implies: return !naive(f.args[0], env, n) || naive(f.args[1], env, n);
        case Op::Iff: return naive(f.args[0], env, n) == naive(f.args[1], env, n);
        case Op::Forall:
        case Op::Exists: {
            bool all = f.op == Op::Forall;
            auto saved = env.find(f.var) == env.end() ? std::optional<Int>() : std::optional<Int>(env[f.var]);
            bool result = all;
            for (long v = -n; v <= n; ++v) {
                env[f.var] = v;
                bool b = naive(f.args[0], env, n);
                if (all && !b) {
                    result = false;
                    break;
                }
                if (!all && b) {
                    result = true;
                    break;
                }
            }
            if (saved) env[f.var] = *saved;
            else env.erase(f.var);
            return result;
        }
    }
    return false;
}

struct Gen {
    std::mt19937_64 rng;
    std::vector<std::string> vars;
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    long small(long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

    Term term() {
        Term t(small(-4, 4));
        for (const auto& v : vars) {
            if (rng() % 2) t += Term::var(v, small(-2, 2));
        }
        return t;
    }
    Formula atom() {
        switch (rng() % 4) {
            case 0: return fm::eq(term(), term());
            case 1: return fm::lt(term(), term());
            case 2: return fm::U(small(2, 3), term());
            default: return fm::D(small(2, 4), term());
        }
    }
    Formula body(int depth) {
        if (depth == 0) return atom();
        switch (rng() % 4) {
            case 0: return fm::neg(body(depth - 1));
            case 1: return fm::conj({body(depth - 1), body(depth - 1)});
            case 2: return fm::disj({body(depth - 1), body(depth - 1)});
            default: return fm::implies(body(depth - 1), body(depth - 1));
        }
    }
    Formula sentence(int quantifiers) {
        vars.clear();
        std::vector<std::pair<bool, std::string>> prefix;
        for (int i = 0; i < quantifiers; ++i) {
            std::string v = std::string(1, static_cast<char>('x' + i));
            vars.push_back(v);
            prefix.emplace_back(rng() % 2 == 0, v);
        }
        Formula f = body(2);
        for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
            f = it->first ? fm::forall(it->second, f) : fm::exists(it->second, f);
        }
        return f;
    }
};

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("documented verdicts") {
    EvalWindow w;
    auto disc = parse_formula("(and (< 0 1) (forall x (or (< x 1) (< 0 x))))");
    CHECK(eval_window(disc, w).kind == EvalResult::Kind::Pass);
    auto car2 = parse_formula("(forall x (-> (U 2 x) (not (D 3 (- x 3)))))");
    CHECK(eval_window(car2, w).kind == EvalResult::Kind::Pass);
    auto wrong = parse_formula("(forall x (U 2 x))");
    auto r = eval_window(wrong, w);
    REQUIRE(r.kind == EvalResult::Kind::Counterexample);
    Assignment a = r.assignment;
    CHECK_FALSE(holds(wrong.args[0], a, w));
}

TEST_CASE("guarded variables reach the height, not the bound") {
    EvalWindow w;
    w.bound = 100;
    w.height = Int(1) << 40;
    // 2^40 lies outside [-100, 100] but inside the power window.
    auto f = parse_formula("(exists x (and (U 2 x) (< 1000000000000 x)))");
    CHECK(eval_window(f, w).kind == EvalResult::Kind::Pass);
    auto g = parse_formula("(forall x (-> (U 2 x) (< x 1099511627776)))");
    CHECK(eval_window(g, w).kind == EvalResult::Kind::Counterexample);
}

TEST_CASE("unguarded blocks are decided exactly over the whole window") {
    EvalWindow w;  // [-10^6, 10^6]
    CHECK(eval_window(parse_formula("(forall x (exists y (= (+ x y) 0)))"), w).kind == EvalResult::Kind::Pass);
    // y = 2x leaves the window for |x| > 500000.
    CHECK(eval_window(parse_formula("(forall x (exists y (= y (scale 2 x))))"), w).kind ==
          EvalResult::Kind::Counterexample);
    CHECK(eval_window(parse_formula("(exists x (= (scale 3 x) 2999997))"), w).kind == EvalResult::Kind::Pass);
    CHECK(eval_window(parse_formula("(exists x (and (< 999999 x) (D 7 x)))"), w).kind ==
          EvalResult::Kind::Counterexample);
}

TEST_CASE("property: agrees with naive enumeration on small windows") {
    Gen g(99);
    EvalWindow w;
    w.bound = 9;
    w.height = 9;
    int decided = 0;
    for (int i = 0; i < 400; ++i) {
        Formula f = g.sentence(1 + static_cast<int>(i % 3));
        Assignment env;
        bool truth = naive(f, env, 9);
        EvalResult r = eval_window(f, w);
        if (r.kind == EvalResult::Kind::Unknown) continue;
        ++decided;
        CHECK_MESSAGE((r.kind == EvalResult::Kind::Pass) == truth, render(f));
    }
    CHECK(decided >= 380);
}

TEST_CASE("atoms") {
    CHECK(atom_holds(fm::U(2, Term::var("x")), {{"x", 1024}}));
    CHECK_FALSE(atom_holds(fm::U(2, Term::var("x")), {{"x", 0}}));
    CHECK_FALSE(atom_holds(fm::U(2, Term::var("x")), {{"x", -2}}));
    CHECK(atom_holds(fm::D(3, Term::var("x") - Term(1)), {{"x", -2}}));
}

}
