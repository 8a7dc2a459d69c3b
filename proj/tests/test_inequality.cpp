#include "powerarith/eval.hpp"
#include "powerarith/inequality.hpp"
#include "powerarith/linear.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace powerarith;

namespace {

LinearIneqSystem sys2(long kx, long ky, std::vector<std::vector<long>> rows) {
    LinearIneqSystem s;
    s.vars = {{"x", kx}, {"y", ky}};
    for (const auto& r : rows) s.rows.push_back({Rat(r[0]), Rat(r[1])});
    return s;
}

// x < y < 4x over powers of two.
LinearIneqSystem mod3_system() { return sys2(2, 2, {{-1, 1}, {4, -1}}); }

CongruenceSystem residues(long rx, long ry) {
    return {make_congruence("x", 3, rx), make_congruence("y", 3, ry)};
}

}  // namespace

TEST_SUITE("linear") {

TEST_CASE("fourier-motzkin") {
    // x > 0, y > x, y < 0
    std::vector<LinearRow> bad{{{Rat(1), Rat(0)}, 0, true}, {{Rat(-1), Rat(1)}, 0, true}, {{Rat(0), Rat(-1)}, 0, true}};
    CHECK_FALSE(fm_feasible(bad, 2));
    // x >= 1, x <= 1 is feasible; make one side strict and it is not.
    std::vector<LinearRow> tight{{{Rat(1)}, -1, false}, {{Rat(-1)}, 1, false}};
    CHECK(fm_feasible(tight, 1));
    tight[0].strict = true;
    CHECK_FALSE(fm_feasible(tight, 1));
    CHECK(fm_feasible({}, 3));
}

}

TEST_SUITE("inequality") {

TEST_CASE("real relaxation") {
    CHECK_FALSE(real_feasible(sys2(2, 3, {{-1, 1}, {1, -1}})));
    CHECK(real_feasible(mod3_system()));
    CHECK(real_feasible(sys2(2, 3, {{2, -3}})));
}

TEST_CASE("documented systems") {
    auto a = solve_homogeneous(2, 3, sys2(2, 3, {{-1, 1}, {2, -1}}));
    REQUIRE(a.kind == IneqResult::Kind::Sat);
    CHECK(sys2(2, 3, {{-1, 1}, {2, -1}}).holds(a.witness.exponents));
    CHECK(solve_homogeneous(2, 3, sys2(2, 3, {{1, -1}, {-1, 1}})).kind == IneqResult::Kind::Unsat);
    CHECK(solve_homogeneous(2, 3, sys2(2, 2, {{-1, 1}, {2, -1}})).kind == IneqResult::Kind::Unsat);
    CHECK_THROWS(solve_homogeneous(2, 4, mod3_system()));
    CHECK_THROWS(solve_homogeneous(3, 5, mod3_system()));
}

TEST_CASE("residue classes mod 3") {
    auto sys = mod3_system();
    CHECK(solve_with_congruences(2, 3, sys, residues(1, 1)).kind == IneqResult::Kind::Unsat);
    CHECK(solve_with_congruences(2, 3, sys, residues(2, 2)).kind == IneqResult::Kind::Unsat);
    auto sat = solve_with_congruences(2, 3, sys, residues(1, 2));
    REQUIRE(sat.kind == IneqResult::Kind::Sat);
    CHECK(sat.witness.exponents == std::vector<std::uint64_t>{0, 1});
    CHECK(solve_with_congruences(2, 3, sys, residues(2, 1)).kind == IneqResult::Kind::Sat);
    CHECK(solve_with_congruences(2, 3, sys, {make_congruence("x", 3, 0)}).kind == IneqResult::Kind::Unsat);
}

TEST_CASE("system json round trip") {
    auto sys = mod3_system();
    sys.rows.push_back({make_rat(1, 3), make_rat(-2, 7)});
    auto back = LinearIneqSystem::from_json(sys.to_json());
    CHECK(back.rows == sys.rows);
    auto j = nlohmann::json::parse(R"J({"vars":[{"id":"x","base":2}],"rows":[["1"]],
        "congruences":[{"id":"x","mod":3,"residue":2}]})J");
    auto delta = congruences_from_json(j);
    REQUIRE(delta.size() == 1);
    CHECK(delta[0].residue == 2);
    CHECK_THROWS(LinearIneqSystem::from_json(nlohmann::json::parse(R"J({"vars":[{"id":"x","base":2},{"id":"x","base":3}],"rows":[]})J")));
}

TEST_CASE("property: solver agrees with brute force") {
    std::mt19937_64 rng(4242);
    int sat = 0, unsat = 0;
    for (int i = 0; i < 120; ++i) {
        auto sys = oracle::random_ineq_system(rng);
        auto r = solve_homogeneous(2, 3, sys);
        auto brute = oracle::ineq_solution(sys, sys.vars.size() == 2 ? 30 : 16);
        if (r.kind == IneqResult::Kind::Sat) {
            ++sat;
            CHECK(sys.holds(r.witness.exponents));
        } else if (r.kind == IneqResult::Kind::Unsat) {
            ++unsat;
            CHECK_MESSAGE(!brute, sys.to_json().dump());
        }
        if (sys.vars.size() == 2) CHECK(r.kind != IneqResult::Kind::Unknown);
    }
    CHECK(sat > 10);
    CHECK(unsat > 10);
}

TEST_CASE("property: congruence side conditions") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 60; ++i) {
        auto sys = oracle::random_ineq_system(rng, 2);
        CongruenceSystem delta;
        for (const auto& v : sys.vars) {
            long m = 3 + static_cast<long>(rng() % 3) * 2;  // 3, 5, 7
            delta.push_back(make_congruence(v.id, m, static_cast<long>(rng() % m)));
        }
        auto r = solve_with_congruences(2, 3, sys, delta);
        if (r.kind == IneqResult::Kind::Sat) {
            CHECK(sys.holds(r.witness.exponents));
            for (const auto& c : delta) {
                CHECK(c.satisfied_by(ipow(sys.vars[sys.index_of(c.var)].base,
                                          r.witness.exponents[sys.index_of(c.var)])));
            }
        } else if (r.kind == IneqResult::Kind::Unsat) {
            CHECK_MESSAGE(!oracle::ineq_solution(sys, 30, delta), sys.to_json().dump());
        }
    }
}

TEST_CASE("tie between bases is resolved by pumping") {
    // y < x < y + z/1000 with x, z powers of 2 and y a power of 3.
    LinearIneqSystem s;
    s.vars = {{"x", 2}, {"y", 3}, {"z", 2}};
    s.rows = {{Rat(1), Rat(-1), Rat(0)}, {Rat(-1), Rat(1), make_rat(1, 1000)}};
    auto r = solve_homogeneous(2, 3, s);
    REQUIRE(r.kind == IneqResult::Kind::Sat);
    CHECK(s.holds(r.witness.exponents));
}

TEST_CASE("basic inequality axioms") {
    auto b2 = binequ_axioms(2);
    REQUIRE(b2.size() == 1);
    CHECK(b2[0].formula ==
          parse_formula("(forall x (forall y (-> (and (U 2 x) (U 2 y)) (and (< 0 x) (not (and (< x y) (< y (scale 2 x))))))))"));
    EvalWindow w;
    CHECK(eval_window(b2[0].formula, w).kind == EvalResult::Kind::Pass);
    CHECK(eval_window(binequ_axioms(3)[0].formula, w).kind == EvalResult::Kind::Pass);
    CHECK_THROWS(binequ_axioms(1));
}

TEST_CASE("inequality axioms") {
    auto ax = inequ_axiom(2, 3, mod3_system(), 3, {1, 1});
    CHECK(ax.kind == InequAxiomResult::Kind::Axiom);
    CHECK(ax.instance.tag == "Inequ");
    CHECK(eval_window(ax.instance.formula, EvalWindow{}).kind == EvalResult::Kind::Pass);
    CHECK(inequ_axiom(2, 3, mod3_system(), 3, {1, 2}).kind == InequAxiomResult::Kind::NotAnAxiom);
    auto contra = sys2(2, 3, {{1, -1}, {-1, 1}});
    CHECK(inequ_axiom(2, 3, contra, 2, {1, 1}).kind == InequAxiomResult::Kind::Axiom);
}

}
