#include "powerarith/cli.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "powerarith");
    std::ostringstream out, err;
    int code = powerarith::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<json> records(const std::string& text) {
    std::vector<json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(json::parse(line));
    }
    return out;
}

class Scratch {
public:
    Scratch() : dir_(fs::temp_directory_path() / ("powerarith-cli-" + std::to_string(::getpid()))) {
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }
    std::string write(const std::string& name, const std::string& text) {
        auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

private:
    fs::path dir_;
};

const char* kMod3 = R"J({"vars":[{"id":"x","base":2},{"id":"y","base":2}],"rows":[[-1,1],[4,-1]]})J";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("number theory commands") {
    auto l = run({"lambda", "8"});
    CHECK(l.code == 0);
    CHECK(l.out == "2\n");
    auto lj = run({"--json", "lambda", "15"});
    CHECK(json::parse(lj.out).at("lambda") == 4);
    auto r = run({"--json", "residues", "2", "8"});
    CHECK(json::parse(r.out).at("residues") == json({1, 2, 4, 0}));
    auto e = run({"--json", "excluded", "2", "7"});
    CHECK(json::parse(e.out).at("excluded") == json({3, 5, 6, 7}));
    CHECK(run({"excluded", "2", "8"}).code == 64);
}

TEST_CASE("mann commands") {
    auto r = run({"--json", "mann-solve", "--inline", "1*3^a - 1*2^b = 1*2^c", "--bound", "64"});
    CHECK(r.code == 0);
    auto recs = records(r.out);
    REQUIRE(recs.size() == 4);
    CHECK(recs[1].at("exponents") == json({1, 1, 0}));
    CHECK(recs[1].at("named").at("c") == 0);
    auto s = run({"--json", "mann-solve", "--inline", "2^a + 2^b = 2^c", "--bound", "10", "--structure"});
    auto fam = records(s.out);
    REQUIRE(fam.size() == 1);
    CHECK(fam[0].at("type") == "family");
    auto a = run({"--json", "mann-axiom", "--inline", "2^a + 2^b = 2^c"});
    CHECK(a.code == 0);
    CHECK(json::parse(a.out).at("tag") == "Mann");
    CHECK(run({"mann-solve", "--bound", "3"}).code == 64);
    CHECK(run({"mann-solve", "--inline", "2^a + = 2^c"}).code == 64);
}

TEST_CASE("kronecker commands") {
    auto f = run({"--json", "frac-hit", "2", "3", "0.5", "0.6"});
    CHECK(json::parse(f.out).at("t") == 1);
    auto r = run({"--json", "ratio-in", "2", "3", "0.7", "0.8"});
    auto j = json::parse(r.out);
    CHECK(j.at("s") == 6);
    CHECK(j.at("t") == 4);
    CHECK(run({"ratio-in", "2", "3", "2", "1"}).code == 64);
}

TEST_CASE("ineq solve") {
    Scratch tmp;
    auto sys = tmp.write("sys.json", kMod3);
    auto c11 = tmp.write("c11.json", R"J([{"id":"x","mod":3,"residue":1},{"id":"y","mod":3,"residue":1}])J");
    auto c12 = tmp.write("c12.json", R"J({"congruences":[{"id":"x","mod":3,"residue":1},{"id":"y","mod":3,"residue":2}]})J");
    auto u = run({"--json", "ineq", "solve", sys, "--congruences", c11});
    CHECK(u.code == 1);
    auto uj = json::parse(u.out);
    CHECK(uj.at("result") == "unsat");
    CHECK(uj.contains("reason"));
    auto s = run({"--json", "ineq", "solve", sys, "--congruences", c12});
    CHECK(s.code == 0);
    CHECK(json::parse(s.out).at("values") == json({{"x", 1}, {"y", 2}}));
    CHECK(run({"ineq", "solve", tmp.write("bad.json", "{")}).code == 64);
    CHECK(run({"ineq", "solve", "/nonexistent/file.json"}).code == 64);
}

TEST_CASE("emit and check") {
    Scratch tmp;
    auto params = tmp.write("p.json", R"J({"cong_max":2,"mann_arity_max":1,"e_max":8,"car1_m_max":1,"car2_n_max":3})J");
    auto e = run({"--json", "emit-axioms", "--theory", "Tforall", "--bases", "2,3", "--params", params});
    CHECK(e.code == 0);
    auto recs = records(e.out);
    REQUIRE(recs.size() > 10);
    for (const auto& r : recs) {
        CHECK(r.contains("tag"));
        CHECK(r.contains("formula"));
        CHECK(r.contains("completeness_flag"));
    }
    auto stream = tmp.write("axioms.jsonl", e.out);
    auto c = run({"--json", "check", stream, "--window", "1000", "--height", "1048576"});
    CHECK(c.code == 0);
    CHECK(records(c.out).size() == recs.size());

    auto bad = tmp.write("bad.txt", "; not a theorem\n(forall x (U 2 x))\n(forall x (= x x))\n");
    auto cb = run({"--json", "check", bad});
    CHECK(cb.code == 1);
    auto cbr = records(cb.out);
    REQUIRE(cbr.size() == 2);
    CHECK(cbr[0].at("result") == "counterexample");
    CHECK(cbr[1].at("result") == "pass");
    CHECK(run({"check", tmp.write("open.txt", "(= x 1)")}).code == 64);
    CHECK(run({"emit-axioms", "--theory", "T", "--bases", "2,4"}).code == 64);
    CHECK(run({"emit-axioms", "--theory", "Q", "--bases", "2,3"}).code == 64);
}

TEST_CASE("sat") {
    Scratch tmp;
    auto p = tmp.write("p.json", R"J({"vars":[{"id":"x","base":2},{"id":"y","base":2},{"id":"z","base":2}],
                                     "literals":["(= (+ x y) z)","(not (= x y))"]})J");
    auto r = run({"--json", "sat", p});
    CHECK(r.code == 1);
    CHECK(json::parse(r.out).at("result") == "unsat");
}

TEST_CASE("usage") {
    CHECK(run({}).code == 64);
    CHECK(run({"frobnicate"}).code == 64);
    CHECK(run({"lambda"}).code == 64);
    CHECK(run({"lambda", "0"}).code == 64);
    CHECK(run({"--help"}).code == 0);
}

}
