#include "powerarith/sat.hpp"

#include "powerarith/congruence.hpp"
#include "powerarith/eval.hpp"
#include "powerarith/mann.hpp"

#include <algorithm>

namespace powerarith {

SatProblem SatProblem::from_json(const nlohmann::json& j) {
    SatProblem p;
    for (const auto& v : j.at("vars")) p.vars.push_back({v.at("id").get<std::string>(), int_from_json(v.at("base"))});
    if (j.contains("literals")) {
        for (const auto& l : j.at("literals")) p.literals.push_back(parse_formula(l.get<std::string>()));
    }
    return p;
}

const char* to_string(SatResult::Kind k) {
    switch (k) {
        case SatResult::Kind::Sat: return "sat";
        case SatResult::Kind::Unsat: return "unsat";
        case SatResult::Kind::Unknown: return "unknown";
    }
    return "?";
}

nlohmann::json SatResult::to_json(const SatProblem& p) const {
    nlohmann::json j;
    j["result"] = to_string(kind);
    if (kind == Kind::Sat) {
        nlohmann::json a = nlohmann::json::object();
        nlohmann::json v = nlohmann::json::object();
        for (const auto& var : p.vars) {
            auto e = exponents.at(var.id);
            a[var.id] = e;
            v[var.id] = int_to_json(ipow(var.base, e));
        }
        j["exponents"] = a;
        j["values"] = v;
    }
    if (!reason.empty()) j["reason"] = reason;
    return j;
}

namespace {

const char* const kOne = "__one";

struct Lit {
    enum class Kind { Eq, Pos, Ne, Cong, NotCong };
    Kind kind;
    Term t;  // t = 0, t > 0, t != 0, D_mod(t), not D_mod(t)
    Int mod;
};

Lit normalize(const Formula& f) {
    bool negated = f.op == Op::Not;
    const Formula& a = negated ? f.args.at(0) : f;
    switch (a.op) {
        case Op::Eq: return {negated ? Lit::Kind::Ne : Lit::Kind::Eq, a.lhs - a.rhs, 0};
        case Op::Lt:
            // not (a < b) is b <= a, i.e. a - b + 1 > 0.
            if (negated) return {Lit::Kind::Pos, a.lhs - a.rhs + Term(1L), 0};
            return {Lit::Kind::Pos, a.rhs - a.lhs, 0};
        case Op::D: return {negated ? Lit::Kind::NotCong : Lit::Kind::Cong, a.lhs, a.param};
        default: throw std::invalid_argument("unsupported literal " + render(f));
    }
}

// x = base^shift * root, or x = base^shift when root is empty.
struct Binding {
    std::string root;
    std::uint64_t shift = 0;
};

class Solver {
public:
    Solver(const SatProblem& p, const SatOptions& o) : p_(p), opts_(o) {
        for (const auto& v : p.vars) base_[v.id] = v.base;
        for (const auto& f : p.literals) {
            if (f.op == Op::True) continue;
            if (f.op == Op::False) {
                lits_.push_back({Lit::Kind::Pos, Term(0L), 0});
                continue;
            }
            Lit l = normalize(f);
            for (const auto& [name, c] : l.t.coefficients()) {
                if (!base_.count(name)) throw std::invalid_argument("undeclared variable '" + name + "'");
            }
            lits_.push_back(std::move(l));
        }
    }

    SatResult run() {
        SatResult r = branch(lits_, {});
        if (r.kind == SatResult::Kind::Unsat && !complete_) {
            r.kind = SatResult::Kind::Unknown;
            r.reason = "equation solutions are only known up to the exponent bound";
        }
        return r;
    }

private:
    const SatProblem& p_;
    SatOptions opts_;
    std::map<std::string, Int> base_;
    std::vector<Lit> lits_;
    bool complete_ = true;

    Term apply(const Term& t, const std::map<std::string, Binding>& sub) const {
        Term out = Term(t.constant());
        for (const auto& [name, c] : t.coefficients()) {
            auto it = sub.find(name);
            if (it == sub.end()) {
                out += Term::var(name, c);
                continue;
            }
            Int f = c * ipow(base_.at(name), it->second.shift);
            out += it->second.root.empty() ? Term(f) : Term::var(it->second.root, f);
        }
        return out;
    }

    static bool ground_true(const Lit& l) {
        const Int& v = l.t.constant();
        switch (l.kind) {
            case Lit::Kind::Eq: return v == 0;
            case Lit::Kind::Pos: return v > 0;
            case Lit::Kind::Ne: return v != 0;
            case Lit::Kind::Cong: return mpz_divisible_p(v.get_mpz_t(), l.mod.get_mpz_t()) != 0;
            case Lit::Kind::NotCong: return mpz_divisible_p(v.get_mpz_t(), l.mod.get_mpz_t()) == 0;
        }
        return false;
    }

    static SatResult join(SatResult acc, SatResult next) {
        if (acc.kind == SatResult::Kind::Sat) return acc;
        if (next.kind == SatResult::Kind::Sat) return next;
        if (next.kind == SatResult::Kind::Unknown) return next;
        return acc;
    }

    SatResult unsat(const std::string& why) const {
        SatResult r;
        r.kind = SatResult::Kind::Unsat;
        r.reason = why;
        return r;
    }

    static void bind(std::map<std::string, Binding>& sub, const std::string& var, Binding b) {
        for (auto& [name, other] : sub) {
            if (other.root == var) {
                other.root = b.root;
                other.shift += b.shift;
            }
        }
        sub[var] = std::move(b);
    }

    SatResult branch(const std::vector<Lit>& lits, const std::map<std::string, Binding>& sub) {
        std::vector<Lit> live;
        for (const auto& l : lits) {
            Lit s{l.kind, apply(l.t, sub), l.mod};
            if (s.t.is_constant()) {
                if (!ground_true(s)) return unsat("literal is false after substitution");
                continue;
            }
            live.push_back(std::move(s));
        }
        for (std::size_t i = 0; i < live.size(); ++i) {
            if (live[i].kind == Lit::Kind::Eq) return equation(live, i, sub);
        }
        for (std::size_t i = 0; i < live.size(); ++i) {
            if (live[i].kind == Lit::Kind::Ne) {
                SatResult acc = unsat("both sides of a disequality fail");
                for (int sign : {1, -1}) {
                    auto next = live;
                    next[i] = {Lit::Kind::Pos, Int(sign) * live[i].t, 0};
                    acc = join(acc, branch(next, sub));
                    if (acc.kind == SatResult::Kind::Sat) return acc;
                }
                return acc;
            }
            if (live[i].kind == Lit::Kind::NotCong) {
                SatResult acc = unsat("no residue class is feasible");
                for (Int r = 1; r < live[i].mod; ++r) {
                    auto next = live;
                    next[i] = {Lit::Kind::Cong, live[i].t - Term(r), live[i].mod};
                    acc = join(acc, branch(next, sub));
                    if (acc.kind == SatResult::Kind::Sat) return acc;
                }
                return acc;
            }
        }
        for (std::size_t i = 0; i < live.size(); ++i) {
            if (live[i].kind == Lit::Kind::Cong && live[i].t.coefficients().size() > 1) return split(live, i, sub);
        }
        return inequalities(live, sub);
    }

    // A congruence over several powers: branch on the residue each power
    // attains modulo n, keeping tuples that satisfy it.
    SatResult split(const std::vector<Lit>& live, std::size_t i, const std::map<std::string, Binding>& sub) {
        const Lit& l = live[i];
        if (!l.mod.fits_ulong_p()) {
            SatResult r;
            r.reason = "congruence modulus too large";
            return r;
        }
        const std::uint64_t n = l.mod.get_ui();
        std::vector<std::string> names;
        std::vector<std::vector<std::uint64_t>> residues;
        double combos = 1;
        for (const auto& [name, c] : l.t.coefficients()) {
            auto cyc = power_residues(base_.at(name), n);
            std::vector<std::uint64_t> rs = cyc.residues;
            std::sort(rs.begin(), rs.end());
            rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
            names.push_back(name);
            residues.push_back(std::move(rs));
            combos *= static_cast<double>(residues.back().size());
        }
        if (combos > 4096) {
            SatResult r;
            r.reason = "too many residue combinations for a congruence";
            return r;
        }
        std::vector<Lit> rest;
        for (std::size_t j = 0; j < live.size(); ++j) {
            if (j != i) rest.push_back(live[j]);
        }
        SatResult acc = unsat("no residue combination satisfies the congruence");
        std::vector<std::size_t> idx(names.size(), 0);
        for (;;) {
            Int sum = l.t.constant();
            for (std::size_t v = 0; v < names.size(); ++v) {
                sum += l.t.coefficient(names[v]) * Int(static_cast<unsigned long>(residues[v][idx[v]]));
            }
            if (mpz_divisible_p(sum.get_mpz_t(), l.mod.get_mpz_t())) {
                auto next = rest;
                for (std::size_t v = 0; v < names.size(); ++v) {
                    Term t = Term::var(names[v]) - Term(Int(static_cast<unsigned long>(residues[v][idx[v]])));
                    next.push_back({Lit::Kind::Cong, t, l.mod});
                }
                acc = join(acc, branch(next, sub));
                if (acc.kind == SatResult::Kind::Sat) return acc;
            }
            std::size_t v = 0;
            while (v < idx.size() && ++idx[v] == residues[v].size()) idx[v++] = 0;
            if (v == idx.size()) break;
        }
        return acc;
    }

    SatResult equation(const std::vector<Lit>& live, std::size_t i, const std::map<std::string, Binding>& sub) {
        const Term& t = live[i].t;
        std::vector<std::string> slots;
        PowerEquation eq;
        for (const auto& [name, c] : t.coefficients()) {
            slots.push_back(name);
            eq.coeffs.push_back(c);
            eq.bases.push_back(base_.at(name));
        }
        const bool has_const = t.constant() != 0;
        if (has_const) {
            eq.rhs = -t.constant();
            eq.bases.push_back(eq.bases.front());
        } else {
            if (slots.size() == 1) return unsat("c * x = 0 has no power solution");
            eq.rhs = -eq.coeffs.back();
            eq.coeffs.pop_back();
        }
        const std::size_t K = has_const ? slots.size() : slots.size() + 1;  // constant slot, if any
        SolutionSet set = family_structure(eq, opts_.mann_bound);
        if (set.completeness != Completeness::Certified) complete_ = false;

        std::vector<Lit> rest;
        for (std::size_t j = 0; j < live.size(); ++j) {
            if (j != i) rest.push_back(live[j]);
        }
        SatResult acc = unsat("no solution of the equation survives the other literals");
        auto attempt = [&](const std::vector<std::pair<std::size_t, Binding>>& slot_bindings) {
            auto next = sub;
            for (const auto& [slot, b] : slot_bindings) {
                Binding nb = b;
                if (!nb.root.empty()) nb.root = slots[std::stoul(nb.root)];
                bind(next, slots[slot], nb);
            }
            acc = join(acc, branch(rest, next));
        };
        for (const auto& tuple : set.isolated) {
            if (has_const && tuple[K] != 0) continue;
            std::vector<std::pair<std::size_t, Binding>> bs;
            for (std::size_t s = 0; s < slots.size(); ++s) bs.push_back({s, Binding{"", tuple[s]}});
            attempt(bs);
            if (acc.kind == SatResult::Kind::Sat) return acc;
        }
        for (const auto& family : set.families) {
            std::map<std::size_t, std::uint64_t> pinned;
            bool ok = true;
            for (const auto& c : family) {
                if (c.kind == UConstraint::Kind::Fixed) {
                    if (c.xi == K && c.value != 0) ok = false;
                    pinned[c.xi] = c.value;
                } else if (c.mu == K) {
                    if (c.value != 0) ok = false;
                    pinned[c.sigma] = 0;
                } else if (c.sigma == K) {
                    pinned[c.mu] = c.value;
                }
            }
            if (!ok) continue;
            std::vector<std::pair<std::size_t, Binding>> bs;
            for (const auto& c : family) {
                if (c.kind != UConstraint::Kind::Coupled || c.mu == K || c.sigma == K) continue;
                if (pinned.count(c.sigma)) {
                    pinned[c.mu] = pinned[c.sigma] + c.value;
                } else {
                    bs.push_back({c.mu, Binding{std::to_string(c.sigma), c.value}});
                }
            }
            for (const auto& [slot, e] : pinned) {
                if (slot != K) bs.push_back({slot, Binding{"", e}});
            }
            attempt(bs);
            if (acc.kind == SatResult::Kind::Sat) return acc;
        }
        return acc;
    }

    SatResult inequalities(const std::vector<Lit>& live, const std::map<std::string, Binding>& sub) {
        // Free roots in literal order, then the constant carrier if needed.
        std::vector<std::string> names;
        bool needs_one = false;
        for (const auto& l : live) {
            for (const auto& [name, c] : l.t.coefficients()) {
                if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
            }
            if (l.kind == Lit::Kind::Pos && l.t.constant() != 0) needs_one = true;
        }
        LinearIneqSystem sys;
        for (const auto& n : names) sys.vars.push_back({n, base_.at(n)});
        CongruenceSystem delta;
        for (const auto& l : live) {
            if (l.kind == Lit::Kind::Pos) continue;
            if (l.t.coefficients().size() != 1) {
                SatResult r;
                r.reason = "congruence literal over several variables";
                return r;
            }
            const auto& [name, c] = *l.t.coefficients().begin();
            // c x + d = 0 (mod n)  =>  x = r (mod n / gcd(c, n)).
            Int g = gcd(c, l.mod);
            if (!mpz_divisible_p(l.t.constant().get_mpz_t(), g.get_mpz_t())) return unsat("congruence has no solution");
            Int n = l.mod / g;
            if (n == 1) continue;
            Int inv;
            Int cg = Int(c / g);
            mpz_invert(inv.get_mpz_t(), cg.get_mpz_t(), n.get_mpz_t());
            Int dg = Int(-l.t.constant() / g);
            delta.push_back(make_congruence(name, n, Int(dg * inv)));
        }
        if (needs_one) {
            Int b = names.empty() ? (p_.vars.empty() ? Int(2) : p_.vars.front().base) : base_.at(names.front());
            sys.vars.push_back({kOne, b});
            delta.push_back(make_congruence(kOne, b, 1));
        }
        for (const auto& l : live) {
            if (l.kind != Lit::Kind::Pos) continue;
            std::vector<Rat> row;
            for (const auto& v : sys.vars) {
                row.push_back(v.id == kOne ? Rat(l.t.constant()) : Rat(l.t.coefficient(v.id)));
            }
            sys.rows.push_back(std::move(row));
        }
        auto bases = sys.bases();
        if (bases.size() > 2) throw std::invalid_argument("inequalities over more than two bases");
        Int k = bases.empty() ? Int(2) : bases[0];
        Int l = bases.size() > 1 ? bases[1] : Int(0);
        if (l == 0) {
            for (long cand : {2L, 3L, 5L, 7L}) {
                if (mult_independent(k, Int(cand))) {
                    l = cand;
                    break;
                }
            }
        }
        IneqResult ir = solve_with_congruences(k, l, sys, delta, opts_.budget);
        SatResult r;
        r.reason = ir.reason;
        if (ir.kind == IneqResult::Kind::Unsat) r.kind = SatResult::Kind::Unsat;
        if (ir.kind != IneqResult::Kind::Sat) return r;

        std::map<std::string, std::uint64_t> roots;
        for (std::size_t i = 0; i < sys.vars.size(); ++i) roots[sys.vars[i].id] = ir.witness.exponents[i];
        r.kind = SatResult::Kind::Sat;
        for (const auto& v : p_.vars) {
            auto it = sub.find(v.id);
            if (it == sub.end()) {
                r.exponents[v.id] = roots.count(v.id) ? roots[v.id] : 0;
            } else {
                std::uint64_t base_e = it->second.root.empty() ? 0 : (roots.count(it->second.root) ? roots[it->second.root] : 0);
                r.exponents[v.id] = it->second.shift + base_e;
            }
        }
        verify(r);
        r.reason.clear();
        return r;
    }

    void verify(const SatResult& r) const {
        Assignment env;
        for (const auto& v : p_.vars) env[v.id] = ipow(v.base, r.exponents.at(v.id));
        for (const auto& f : p_.literals) {
            if (!holds(f, env, EvalWindow{})) throw std::logic_error("sat assignment failed verification on " + render(f));
        }
    }
};

}  // namespace

SatResult sat_conjunction(const SatProblem& problem, const SatOptions& options) {
    for (const auto& v : problem.vars) {
        if (v.base < 2) throw std::invalid_argument("variable '" + v.id + "' has base < 2");
    }
    if (problem.literals.empty()) {
        SatResult r;
        r.kind = SatResult::Kind::Sat;
        for (const auto& v : problem.vars) r.exponents[v.id] = 0;
        return r;
    }
    return Solver(problem, options).run();
}

}  // namespace powerarith
