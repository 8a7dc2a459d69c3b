#include "powerarith/cli.hpp"

#include "powerarith/axioms.hpp"
#include "powerarith/congruence.hpp"
#include "powerarith/eval.hpp"
#include "powerarith/inequality.hpp"
#include "powerarith/kronecker.hpp"
#include "powerarith/mann.hpp"
#include "powerarith/sat.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace powerarith::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

std::vector<Int> parse_int_list(const std::string& text) {
    std::vector<Int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_int(item));
    }
    if (out.empty()) throw UsageError("empty list: " + text);
    return out;
}

std::optional<Rat> parse_bound(const std::string& text) {
    if (text == "inf" || text == "-") return std::nullopt;
    return parse_rat(text);
}

Int partner_base(const Int& base) {
    for (Int b = 2;; ++b) {
        if (mult_independent(base, b)) return b;
    }
}

// One record: compact JSON line, or indented JSON for humans.
class Printer {
public:
    Printer(std::ostream& out, bool json_mode) : out_(out), json_(json_mode) {}
    bool json_mode() const { return json_; }
    void record(const json& j) {
        if (json_) out_ << j.dump() << '\n';
        else out_ << j.dump(2) << '\n';
    }
    void line(const std::string& s) { out_ << s << '\n'; }

private:
    std::ostream& out_;
    bool json_;
};

std::string tuple_text(const ExponentTuple& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(t[i]);
    }
    return s + ")";
}

json tuple_record(const PowerEquation& eq, const ExponentTuple& t) {
    json j;
    j["exponents"] = t;
    if (!eq.names.empty()) {
        json named = json::object();
        for (std::size_t i = 0; i < t.size(); ++i) named[eq.names[i]] = t[i];
        j["named"] = named;
    }
    j["degenerate"] = is_degenerate(eq, t);
    return j;
}

int cmd_lambda(Printer& p, std::uint64_t n) {
    auto v = carmichael_lambda(n);
    if (p.json_mode()) p.record({{"n", n}, {"lambda", v}});
    else p.line(std::to_string(v));
    return kOk;
}

int cmd_residues(Printer& p, const std::string& base, std::uint64_t mod) {
    auto c = power_residues(parse_int(base), mod);
    if (p.json_mode()) {
        p.record({{"base", int_to_json(c.base)},
                  {"modulus", c.modulus},
                  {"preperiod", c.preperiod},
                  {"period", c.period},
                  {"residues", c.residues}});
        return kOk;
    }
    std::string s;
    for (std::size_t i = 0; i < c.residues.size(); ++i) {
        if (i == c.preperiod) s += "| ";
        s += std::to_string(c.residues[i]) + " ";
    }
    p.line("preperiod " + std::to_string(c.preperiod) + ", period " + std::to_string(c.period));
    p.line(s);
    return kOk;
}

int cmd_excluded(Printer& p, const std::string& base, std::uint64_t mod) {
    Int b = parse_int(base);
    if (gcd(b, Int(static_cast<unsigned long>(mod))) != 1) throw UsageError("base and modulus must be coprime");
    auto ex = excluded_residues(b, mod);
    if (p.json_mode()) {
        p.record({{"base", int_to_json(b)}, {"modulus", mod}, {"excluded", ex}});
        return kOk;
    }
    std::string s;
    for (auto r : ex) s += std::to_string(r) + " ";
    p.line(s.empty() ? "(none)" : s);
    return kOk;
}

PowerEquation load_equation(const std::string& file, const std::string& inline_text) {
    if (!file.empty() == !inline_text.empty()) throw UsageError("give exactly one of --eq and --inline");
    if (!inline_text.empty()) return PowerEquation::parse_inline(inline_text);
    return PowerEquation::from_json(read_json(file));
}

int cmd_mann_solve(Printer& p, const PowerEquation& eq, std::uint64_t bound, bool structure, bool nondegenerate) {
    if (structure) {
        SolutionSet s = family_structure(eq, bound);
        for (const auto& r : s.to_jsonl()) p.record(r);
        return kOk;
    }
    auto sols = nondegenerate ? nondegenerate_solutions(eq, bound) : enumerate_solutions(eq, bound);
    for (const auto& t : sols) {
        if (p.json_mode()) p.record(tuple_record(eq, t));
        else p.line(tuple_text(t) + (is_degenerate(eq, t) ? "  degenerate" : ""));
    }
    if (!p.json_mode()) p.line(std::to_string(sols.size()) + " solution(s) with exponents <= " + std::to_string(bound));
    return kOk;
}

int cmd_mann_axiom(Printer& p, const PowerEquation& eq, std::uint64_t bound) {
    MannAxiom ax = mann_axiom(eq.coeffs, eq.rhs, eq.bases, bound);
    json j = ax.instance().to_json();
    j["solutions"] = ax.solutions;
    p.record(j);
    return kOk;
}

int cmd_frac_hit(Printer& p, const std::string& k, const std::string& l, const std::string& lo,
                 const std::string& hi, bool minimal) {
    Int kk = parse_int(k), ll = parse_int(l);
    auto t = find_frac_hit(kk, ll, parse_rat(lo), parse_rat(hi), minimal);
    if (p.json_mode()) p.record({{"k", int_to_json(kk)}, {"l", int_to_json(ll)}, {"t", t}});
    else p.line("t = " + std::to_string(t));
    return kOk;
}

int cmd_ratio_in(Printer& p, const std::string& k, const std::string& l, const std::string& lo,
                 const std::string& hi) {
    Int kk = parse_int(k), ll = parse_int(l);
    OpenInterval iv(parse_bound(lo), parse_bound(hi));
    if (iv.empty()) throw UsageError("empty interval");
    RatioWitness w = find_ratio_in(kk, ll, iv);
    if (!ratio_in(kk, ll, w, iv)) throw std::logic_error("ratio witness failed verification");
    if (p.json_mode()) p.record({{"k", int_to_json(kk)}, {"l", int_to_json(ll)}, {"s", w.s}, {"t", w.t}});
    else p.line(k + "^" + std::to_string(w.s) + " / " + l + "^" + std::to_string(w.t));
    return kOk;
}

int ineq_exit(IneqResult::Kind k) {
    switch (k) {
        case IneqResult::Kind::Sat: return kOk;
        case IneqResult::Kind::Unsat: return kNegative;
        case IneqResult::Kind::Unknown: return kUnknown;
    }
    return kUnknown;
}

int cmd_ineq_solve(Printer& p, const std::string& file, const std::string& cong_file, std::uint64_t steps) {
    json j = read_json(file);
    LinearIneqSystem sys = LinearIneqSystem::from_json(j);
    CongruenceSystem delta = congruences_from_json(j);
    if (!cong_file.empty()) {
        auto extra = congruences_from_json(read_json(cong_file));
        delta.insert(delta.end(), extra.begin(), extra.end());
    }
    auto bases = sys.bases();
    if (bases.empty()) throw UsageError("system has no variables");
    Int k = bases[0];
    Int l = bases.size() > 1 ? bases[1] : partner_base(k);
    IneqBudget budget;
    budget.steps = steps;
    IneqResult r = solve_with_congruences(k, l, sys, delta, budget);
    json out;
    out["result"] = to_string(r.kind);
    if (r.kind == IneqResult::Kind::Sat) {
        out["exponents"] = r.witness.to_json(sys);
        json values = json::object();
        for (std::size_t i = 0; i < sys.vars.size(); ++i) {
            values[sys.vars[i].id] = int_to_json(ipow(sys.vars[i].base, r.witness.exponents[i]));
        }
        out["values"] = values;
    }
    if (!r.reason.empty()) out["reason"] = r.reason;
    p.record(out);
    return ineq_exit(r.kind);
}

int cmd_emit(Printer& p, const std::string& theory, const std::string& bases, const std::string& params_file) {
    AxiomParams params;
    if (!params_file.empty()) params = AxiomParams::from_json(read_json(params_file));
    auto L = parse_int_list(bases);
    AxiomStream s = theory == "T" ? emit_T(L, params) : emit_Tforall(L, params);
    while (auto inst = s.next()) {
        if (p.json_mode()) p.record(inst->to_json());
        else p.line(inst->tag + "  " + render(inst->formula));
    }
    return kOk;
}

// A file of sentences: JSON lines carrying "formula", or s-expressions.
std::vector<std::pair<std::string, Formula>> load_sentences(const std::string& file) {
    std::string text = slurp(file);
    std::vector<std::pair<std::string, Formula>> out;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return out;
    if (text[first] == '{') {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            json j = json::parse(line);
            out.emplace_back(j.value("tag", ""), parse_formula(j.at("formula").get<std::string>()));
        }
        return out;
    }
    // Consecutive top-level s-expressions.
    int depth = 0;
    std::size_t start = first;
    for (std::size_t i = first; i < text.size(); ++i) {
        char c = text[i];
        if (c == ';') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (c == '(') {
            if (depth == 0) start = i;
            ++depth;
        } else if (c == ')') {
            if (--depth == 0) out.emplace_back("", parse_formula(text.substr(start, i + 1 - start)));
            if (depth < 0) throw UsageError(file + ": unbalanced parentheses");
        } else if (depth == 0 && !std::isspace(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
            out.emplace_back("", parse_formula(text.substr(i, j - i)));
            i = j;
        }
    }
    if (depth != 0) throw UsageError(file + ": unbalanced parentheses");
    return out;
}

int cmd_check(Printer& p, const std::string& file, const std::string& window, const std::string& height) {
    EvalWindow w;
    if (!window.empty()) w.bound = parse_int(window);
    if (!height.empty()) w.height = parse_int(height);
    int status = kOk;
    for (const auto& [tag, f] : load_sentences(file)) {
        if (!is_sentence(f)) throw UsageError("not a sentence: " + render(f));
        EvalResult r = eval_window(f, w);
        json j;
        if (!tag.empty()) j["tag"] = tag;
        j["formula"] = render(f);
        j["result"] = to_string(r.kind);
        if (r.kind == EvalResult::Kind::Counterexample) {
            json a = json::object();
            for (const auto& [v, val] : r.assignment) a[v] = int_to_json(val);
            j["assignment"] = a;
            status = kNegative;
        } else if (r.kind == EvalResult::Kind::Unknown && status == kOk) {
            status = kUnknown;
        }
        if (!r.reason.empty()) j["reason"] = r.reason;
        if (p.json_mode()) {
            p.record(j);
        } else {
            std::string s = std::string(to_string(r.kind)) + "  " + (tag.empty() ? "" : tag + "  ") + render(f);
            if (r.kind == EvalResult::Kind::Counterexample) s += "  at " + j["assignment"].dump();
            if (!r.reason.empty()) s += "  (" + r.reason + ")";
            p.line(s);
        }
    }
    return status;
}

int cmd_sat(Printer& p, const std::string& file) {
    SatProblem prob = SatProblem::from_json(read_json(file));
    SatResult r = sat_conjunction(prob);
    p.record(r.to_json(prob));
    switch (r.kind) {
        case SatResult::Kind::Sat: return kOk;
        case SatResult::Kind::Unsat: return kNegative;
        case SatResult::Kind::Unknown: return kUnknown;
    }
    return kUnknown;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decision and axiom tools for (Z, +, k^N, l^N)", "powerarith"};
    app.require_subcommand(1);
    bool json_mode = false;
    app.add_flag("--json", json_mode, "Line-delimited JSON records");

    std::uint64_t n = 0, mod = 0, bound = kDefaultMannBound, steps = IneqBudget{}.steps;
    std::string base, k, l, lo, hi, file, cong_file, inline_eq, theory, bases, params_file, window, height;
    bool structure = false, nondegenerate = false, minimal = false;

    auto* lambda = app.add_subcommand("lambda", "Carmichael function");
    lambda->add_option("N", n)->required()->check(CLI::PositiveNumber);

    auto* residues = app.add_subcommand("residues", "Residues of BASE^e mod MOD");
    residues->add_option("BASE", base)->required();
    residues->add_option("MOD", mod)->required()->check(CLI::PositiveNumber);

    auto* excluded = app.add_subcommand("excluded", "Residues never hit by BASE^m, m >= 1");
    excluded->add_option("BASE", base)->required();
    excluded->add_option("MOD", mod)->required()->check(CLI::PositiveNumber);

    auto* mann_solve = app.add_subcommand("mann-solve", "Solutions of a power equation in a box");
    mann_solve->add_option("--eq", file, "Equation JSON file");
    mann_solve->add_option("--inline", inline_eq, "e.g. \"1*3^a - 1*2^b = 1*2^c\"");
    mann_solve->add_option("--bound", bound, "Exponent bound");
    mann_solve->add_flag("--structure", structure, "Coupled/fixed description instead of tuples");
    mann_solve->add_flag("--nondegenerate", nondegenerate, "Drop degenerate solutions");

    auto* mann_ax = app.add_subcommand("mann-axiom", "Mann axiom instance of an equation");
    mann_ax->add_option("--eq", file, "Equation JSON file");
    mann_ax->add_option("--inline", inline_eq, "Inline equation");
    mann_ax->add_option("--bound", bound, "Exponent bound");

    auto* frac = app.add_subcommand("frac-hit", "Least t with fr(t log_K L) in (LO, HI)");
    frac->add_option("K", k)->required();
    frac->add_option("L", l)->required();
    frac->add_option("LO", lo)->required();
    frac->add_option("HI", hi)->required();
    frac->add_flag("--minimal", minimal, "Certify every t instead of filtering");

    auto* ratio = app.add_subcommand("ratio-in", "K^s / L^t in (LO, HI); 'inf' for no upper end");
    ratio->add_option("K", k)->required();
    ratio->add_option("L", l)->required();
    ratio->add_option("LO", lo)->required();
    ratio->add_option("HI", hi)->required();

    auto* ineq = app.add_subcommand("ineq", "Strict homogeneous inequalities over powers");
    ineq->require_subcommand(1);
    auto* ineq_solve = ineq->add_subcommand("solve", "Solve a system file");
    ineq_solve->add_option("FILE", file)->required();
    ineq_solve->add_option("--congruences", cong_file, "Congruence JSON file");
    ineq_solve->add_option("--steps", steps, "Search budget");

    auto* emit = app.add_subcommand("emit-axioms", "Stream axiom instances");
    emit->add_option("--theory", theory)->required()->check(CLI::IsMember({"T", "Tforall"}));
    emit->add_option("--bases", bases, "Comma-separated, e.g. 2,3")->required();
    emit->add_option("--params", params_file, "AxiomParams JSON file");

    auto* check = app.add_subcommand("check", "Windowed model check of sentences");
    check->add_option("FILE", file, "S-expressions or axiom JSON lines; '-' for stdin")->required();
    check->add_option("--window", window, "Range bound N for unguarded variables");
    check->add_option("--height", height, "Height bound H for powers");

    auto* sat = app.add_subcommand("sat", "Satisfiability of a literal conjunction");
    sat->add_option("FILE", file)->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Printer p(out, json_mode);
    try {
        if (*lambda) return cmd_lambda(p, n);
        if (*residues) return cmd_residues(p, base, mod);
        if (*excluded) return cmd_excluded(p, base, mod);
        if (*mann_solve) return cmd_mann_solve(p, load_equation(file, inline_eq), bound, structure, nondegenerate);
        if (*mann_ax) return cmd_mann_axiom(p, load_equation(file, inline_eq), bound);
        if (*frac) return cmd_frac_hit(p, k, l, lo, hi, minimal);
        if (*ratio) return cmd_ratio_in(p, k, l, lo, hi);
        if (*ineq_solve) return cmd_ineq_solve(p, file, cong_file, steps);
        if (*emit) return cmd_emit(p, theory, bases, params_file);
        if (*check) return cmd_check(p, file, window, height);
        if (*sat) return cmd_sat(p, file);
    } catch (const PrecisionExhausted& e) {
        err << "unknown: " << e.what() << '\n';
        return kUnknown;
    } catch (const EvalBudgetExceeded& e) {
        err << "unknown: " << e.what() << '\n';
        return kUnknown;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace powerarith::cli
