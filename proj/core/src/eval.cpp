#include "powerarith/eval.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace powerarith {

const char* to_string(EvalResult::Kind k) {
    switch (k) {
        case EvalResult::Kind::Pass: return "pass";
        case EvalResult::Kind::Counterexample: return "counterexample";
        case EvalResult::Kind::Unknown: return "unknown";
    }
    return "?";
}

bool atom_holds(const Formula& atom, const Assignment& env) {
    switch (atom.op) {
        case Op::Eq: return atom.lhs.evaluate(env) == atom.rhs.evaluate(env);
        case Op::Lt: return atom.lhs.evaluate(env) < atom.rhs.evaluate(env);
        case Op::U: return power_exponent(atom.lhs.evaluate(env), atom.param).has_value();
        case Op::D: {
            Int v = atom.lhs.evaluate(env);
            return mpz_divisible_p(v.get_mpz_t(), atom.param.get_mpz_t()) != 0;
        }
        case Op::True: return true;
        case Op::False: return false;
        default: throw std::invalid_argument("atom_holds: not an atom");
    }
}

namespace {

Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Term subst_term(const Term& t, const Assignment& env) {
    Term out = t;
    for (const auto& [name, c] : t.coefficients()) {
        auto it = env.find(name);
        if (it != env.end()) out = out.substitute(name, it->second);
    }
    return out;
}

Term subst_var(const Term& t, const std::string& v, const Term& expr) {
    Int c = t.coefficient(v);
    if (c == 0) return t;
    return t - Term::var(v, c) + c * expr;
}

bool is_atom(Op op) { return op == Op::Eq || op == Op::Lt || op == Op::U || op == Op::D; }

Formula constant(bool b) { return b ? fm::truth() : fm::falsity(); }

Formula negate(Formula a) {
    if (a.op == Op::True) return fm::falsity();
    if (a.op == Op::False) return fm::truth();
    return fm::neg(std::move(a));
}

// Substitutes env (minus shadowed variables) and folds ground subformulas.
Formula specialize(const Formula& f, const Assignment& env) {
    if (env.empty()) return f;
    switch (f.op) {
        case Op::True:
        case Op::False:
            return f;
        case Op::Eq:
        case Op::Lt:
        case Op::U:
        case Op::D: {
            Formula g = f;
            g.lhs = subst_term(f.lhs, env);
            g.rhs = subst_term(f.rhs, env);
            if (g.lhs.is_constant() && g.rhs.is_constant()) return constant(atom_holds(g, {}));
            return g;
        }
        case Op::Not: {
            return negate(specialize(f.args[0], env));
        }
        case Op::And:
        case Op::Or: {
            bool is_and = f.op == Op::And;
            std::vector<Formula> parts;
            for (const auto& a : f.args) {
                Formula s = specialize(a, env);
                if (s.op == (is_and ? Op::True : Op::False)) continue;
                if (s.op == (is_and ? Op::False : Op::True)) return s;
                parts.push_back(std::move(s));
            }
            return is_and ? fm::conj(std::move(parts)) : fm::disj(std::move(parts));
        }
        case Op::Implies: {
            Formula a = specialize(f.args[0], env);
            if (a.op == Op::False) return fm::truth();
            Formula b = specialize(f.args[1], env);
            if (a.op == Op::True) return b;
            if (b.op == Op::True) return b;
            if (b.op == Op::False) return fm::neg(std::move(a));
            return fm::implies(std::move(a), std::move(b));
        }
        case Op::Iff: {
            Formula a = specialize(f.args[0], env);
            Formula b = specialize(f.args[1], env);
            if (a.op == Op::True) return b;
            if (b.op == Op::True) return a;
            if (a.op == Op::False) return negate(std::move(b));
            if (b.op == Op::False) return negate(std::move(a));
            return fm::iff(std::move(a), std::move(b));
        }
        case Op::Forall:
        case Op::Exists: {
            Assignment inner = env;
            inner.erase(f.var);
            Formula body = specialize(f.args[0], inner);
            if (body.op == Op::True || body.op == Op::False) return body;
            Formula g = f;
            g.args = {std::move(body)};
            return g;
        }
    }
    return f;
}

bool quantifier_free(const Formula& f) {
    if (f.op == Op::Forall || f.op == Op::Exists) return false;
    return std::all_of(f.args.begin(), f.args.end(), quantifier_free);
}

Term replace_in(const Term& t, const std::string& v, const Term& repl) {
    Int c = t.coefficient(v);
    if (c == 0) return t;
    return t.substitute(v, Int(0)) + c * repl;
}

// Free occurrences of v replaced by repl (repl must not mention bound names).
Formula replace_var(const Formula& f, const std::string& v, const Term& repl) {
    if ((f.op == Op::Forall || f.op == Op::Exists) && f.var == v) return f;
    Formula out = f;
    out.lhs = replace_in(f.lhs, v, repl);
    out.rhs = replace_in(f.rhs, v, repl);
    for (auto& a : out.args) a = replace_var(a, v, repl);
    return out;
}

// exists y (... and u*y = t and ...) with u = +-1 and y unguarded collapses to
// the other conjuncts at y := t/u, plus -N <= t/u <= N. Exact for the window.
// Applied bottom-up; nothing else changes.
Formula one_point(const Formula& f, const Int& N) {
    Formula out = f;
    for (auto& a : out.args) a = one_point(a, N);
    if (out.op != Op::Exists) return out;
    const std::string& y = out.var;
    const Formula& body = out.args[0];
    std::vector<Formula> parts = body.op == Op::And ? body.args : std::vector<Formula>{body};
    for (const auto& p : parts) {
        if (p.op == Op::U && p.lhs.mentions(y)) return out;
    }
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].op != Op::Eq) continue;
        Term t = parts[i].lhs - parts[i].rhs;
        Int u = t.coefficient(y);
        if (u != 1 && u != -1) continue;
        // u*y + r = 0  =>  y = -r/u = -u*r.
        Term value = Int(-u) * t.substitute(y, Int(0));
        std::vector<Formula> rest;
        for (std::size_t j = 0; j < parts.size(); ++j) {
            if (j != i) rest.push_back(replace_var(parts[j], y, value));
        }
        rest.push_back(fm::le(Term(Int(-N)), value));
        rest.push_back(fm::le(value, Term(N)));
        return fm::conj(std::move(rest));
    }
    return out;
}

void collect_atoms(const Formula& f, std::vector<const Formula*>& out) {
    if (is_atom(f.op)) {
        out.push_back(&f);
        return;
    }
    for (const auto& a : f.args) collect_atoms(a, out);
}

void flatten_and(const Formula& f, std::vector<const Formula*>& out) {
    if (f.op == Op::And) {
        for (const auto& a : f.args) flatten_and(a, out);
    } else {
        out.push_back(&f);
    }
}

// Base of a U-guard on `v`, if the matrix has one.
std::optional<Int> guard_of(const Formula& m, const std::string& v, bool universal) {
    const Formula* scope = &m;
    if (universal) {
        // A -> false is folded to (not A).
        if (m.op != Op::Implies && m.op != Op::Not) return std::nullopt;
        scope = &m.args[0];
    }
    std::vector<const Formula*> conjuncts;
    flatten_and(*scope, conjuncts);
    const Term var = Term::var(v);
    for (const Formula* c : conjuncts) {
        if (c->op == Op::U && c->lhs == var) return c->param;
    }
    return std::nullopt;
}

// Literal of a DNF clause: t == 0 or t <= 0.
struct Lin {
    bool equality;
    Term t;
};

using Clause = std::vector<Lin>;

enum class SolveStatus { Found, None, Unknown };

constexpr std::size_t kMaxClauses = 1 << 14;
constexpr std::size_t kMaxConstraints = 20000;

// DNF of f (positive) or of its negation (negative). Returns false when the
// clause count exceeds the cap.
bool dnf(const Formula& f, bool positive, std::vector<Clause>& out) {
    auto product = [](const std::vector<Clause>& a, const std::vector<Clause>& b, std::vector<Clause>& res) {
        res.clear();
        if (a.size() * b.size() > kMaxClauses) return false;
        for (const auto& x : a) {
            for (const auto& y : b) {
                Clause c = x;
                c.insert(c.end(), y.begin(), y.end());
                res.push_back(std::move(c));
            }
        }
        return true;
    };
    out.clear();
    switch (f.op) {
        case Op::True:
            if (positive) out.push_back({});
            return true;
        case Op::False:
            if (!positive) out.push_back({});
            return true;
        case Op::Eq: {
            Term d = f.lhs - f.rhs;
            if (positive) {
                out.push_back({{true, d}});
            } else {
                out.push_back({{false, d + Term(1)}});
                out.push_back({{false, -d + Term(1)}});
            }
            return true;
        }
        case Op::Lt: {
            Term d = f.lhs - f.rhs;
            out.push_back({positive ? Lin{false, d + Term(1)} : Lin{false, -d}});
            return true;
        }
        case Op::Not:
            return dnf(f.args[0], !positive, out);
        case Op::And:
        case Op::Or: {
            bool conjunctive = (f.op == Op::And) == positive;
            if (conjunctive) {
                out.push_back({});
                std::vector<Clause> part, next;
                for (const auto& a : f.args) {
                    if (!dnf(a, positive, part)) return false;
                    if (!product(out, part, next)) return false;
                    out.swap(next);
                }
            } else {
                std::vector<Clause> part;
                for (const auto& a : f.args) {
                    if (!dnf(a, positive, part)) return false;
                    out.insert(out.end(), part.begin(), part.end());
                    if (out.size() > kMaxClauses) return false;
                }
            }
            return true;
        }
        case Op::Implies:
            return dnf(fm::disj({fm::neg(f.args[0]), f.args[1]}), positive, out);
        case Op::Iff: {
            Formula both = fm::conj({f.args[0], f.args[1]});
            Formula neither = fm::conj({fm::neg(f.args[0]), fm::neg(f.args[1])});
            return dnf(fm::disj({both, neither}), positive, out);
        }
        default:
            return false;
    }
}

// Integer feasibility of a clause inside the box [-N, N]^vars. Exact when
// every eliminated variable has unit coefficients.
SolveStatus solve_clause(const std::vector<std::string>& vars, const Clause& clause, const Int& bound,
                         Assignment& out) {
    std::vector<Term> eqs;
    std::vector<Term> ineqs;
    for (const auto& l : clause) (l.equality ? eqs : ineqs).push_back(l.t);
    for (const auto& v : vars) {
        ineqs.push_back(Term::var(v) - Term(bound));
        ineqs.push_back(-Term::var(v) - Term(bound));
    }
    std::vector<std::pair<std::string, Term>> substitutions;
    auto substitute_all = [&](const std::string& v, const Term& expr) {
        for (auto& e : eqs) e = subst_var(e, v, expr);
        for (auto& e : ineqs) e = subst_var(e, v, expr);
        substitutions.emplace_back(v, expr);
    };
    while (!eqs.empty()) {
        Term t = eqs.back();
        eqs.pop_back();
        if (t.is_constant()) {
            if (t.constant() != 0) return SolveStatus::None;
            continue;
        }
        std::optional<std::string> unit;
        for (const auto& [name, c] : t.coefficients()) {
            if (c == 1 || c == -1) {
                unit = name;
                break;
            }
        }
        if (unit) {
            Int c = t.coefficient(*unit);
            substitute_all(*unit, -c * (t - Term::var(*unit, c)));
        } else if (t.coefficients().size() == 1) {
            const auto& [name, c] = *t.coefficients().begin();
            if (!mpz_divisible_p(t.constant().get_mpz_t(), c.get_mpz_t())) return SolveStatus::None;
            substitute_all(name, Term(Int(-t.constant() / c)));
        } else {
            return SolveStatus::Unknown;
        }
    }

    struct Step {
        std::string var;
        std::vector<Term> lowers;  // v >= term
        std::vector<Term> uppers;  // v <= term
    };
    std::vector<Step> steps;
    while (true) {
        std::set<std::string> present;
        for (const auto& t : ineqs) {
            for (const auto& [name, c] : t.coefficients()) present.insert(name);
        }
        if (present.empty()) break;
        std::optional<std::string> pick;
        for (const auto& v : present) {
            bool unit = std::all_of(ineqs.begin(), ineqs.end(), [&](const Term& t) {
                Int c = t.coefficient(v);
                return c == 0 || c == 1 || c == -1;
            });
            if (unit) {
                pick = v;
                break;
            }
        }
        if (!pick) return SolveStatus::Unknown;
        Step step;
        step.var = *pick;
        std::vector<Term> rest;
        for (const auto& t : ineqs) {
            Int c = t.coefficient(*pick);
            Term r = t - Term::var(*pick, c);
            if (c == 0) rest.push_back(t);
            else if (c == 1) step.uppers.push_back(-r);  // v + r <= 0
            else step.lowers.push_back(r);               // -v + r <= 0
        }
        std::set<std::string> seen;
        std::vector<Term> next;
        auto push = [&](Term t) {
            if (seen.insert(render(t)).second) next.push_back(std::move(t));
        };
        for (auto& t : rest) push(std::move(t));
        for (const auto& lo : step.lowers) {
            for (const auto& hi : step.uppers) push(lo - hi);
        }
        if (next.size() > kMaxConstraints) return SolveStatus::Unknown;
        ineqs.swap(next);
        steps.push_back(std::move(step));
    }
    for (const auto& t : ineqs) {
        if (t.constant() > 0) return SolveStatus::None;
    }
    Assignment a;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        std::optional<Int> lo, hi;
        for (const auto& t : it->lowers) {
            Int v = t.evaluate(a);
            if (!lo || v > *lo) lo = v;
        }
        for (const auto& t : it->uppers) {
            Int v = t.evaluate(a);
            if (!hi || v < *hi) hi = v;
        }
        Int pick = 0;
        if (lo && pick < *lo) pick = *lo;
        if (hi && pick > *hi) pick = *hi;
        a[it->var] = pick;
    }
    for (const auto& v : vars) a.emplace(v, 0);
    for (auto it = substitutions.rbegin(); it != substitutions.rend(); ++it) {
        a[it->first] = it->second.evaluate(a);
    }
    out.clear();
    for (const auto& v : vars) out[v] = a.at(v);
    return SolveStatus::Found;
}

class Evaluator {
public:
    explicit Evaluator(const EvalWindow& w) : w_(w) {}

    bool truth(const Formula& f, const Assignment& env) {
        switch (f.op) {
            case Op::True: return true;
            case Op::False: return false;
            case Op::Eq:
            case Op::Lt:
            case Op::U:
            case Op::D:
                tick();
                return atom_holds(f, env);
            case Op::Not: return !truth(f.args[0], env);
            case Op::And:
                return std::all_of(f.args.begin(), f.args.end(), [&](const Formula& a) { return truth(a, env); });
            case Op::Or:
                return std::any_of(f.args.begin(), f.args.end(), [&](const Formula& a) { return truth(a, env); });
            case Op::Implies: return !truth(f.args[0], env) || truth(f.args[1], env);
            case Op::Iff: return truth(f.args[0], env) == truth(f.args[1], env);
            case Op::Forall:
            case Op::Exists: {
                std::vector<std::string> vars;
                const Formula* m = chain(f, vars);
                bool universal = f.op == Op::Forall;
                Assignment outer = env;
                for (const auto& v : vars) outer.erase(v);
                auto hit = search(vars, specialize(*m, outer), !universal, universal);
                return universal ? !hit.has_value() : hit.has_value();
            }
        }
        return false;
    }

    static const Formula* chain(const Formula& f, std::vector<std::string>& vars) {
        const Formula* m = &f;
        while (m->op == f.op) {
            vars.push_back(m->var);
            m = &m->args[0];
        }
        return m;
    }

    // Values of `vars` giving the (already specialized) matrix the truth value
    // `target`, searched in the window.
    std::optional<Assignment> search(std::vector<std::string> vars, const Formula& m, bool target,
                                     bool universal) {
        std::set<std::string> fv = free_variables(m);
        std::vector<std::string> idle;
        std::vector<std::string> live;
        for (const auto& v : vars) (fv.count(v) ? live : idle).push_back(v);
        auto found = search_live(live, m, target, universal);
        if (found) {
            for (const auto& v : idle) found->emplace(v, 0);
        }
        return found;
    }

private:
    std::optional<Assignment> search_live(const std::vector<std::string>& vars, const Formula& m, bool target,
                                          bool universal) {
        if (vars.empty()) {
            tick();
            if (truth(m, {}) == target) return Assignment{};
            return std::nullopt;
        }
        for (std::size_t i = 0; i < vars.size(); ++i) {
            auto base = guard_of(m, vars[i], universal);
            if (!base) continue;
            std::vector<std::string> rest = vars;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            for (Int p = 1; p <= w_.height; p *= *base) {
                tick();
                auto found = search(rest, specialize(m, {{vars[i], p}}), target, universal);
                if (found) {
                    (*found)[vars[i]] = p;
                    return found;
                }
            }
            return std::nullopt;
        }
        if (!quantifier_free(m)) {
            Formula reduced = one_point(m, w_.bound);
            if (quantifier_free(reduced)) return search_live(vars, reduced, target, universal);
        }
        if (quantifier_free(m)) {
            if (vars.size() == 1) return test_points(vars[0], m, target);
            std::vector<const Formula*> atoms;
            collect_atoms(m, atoms);
            bool linear = std::all_of(atoms.begin(), atoms.end(),
                                      [](const Formula* a) { return a->op == Op::Eq || a->op == Op::Lt; });
            if (linear) {
                std::vector<Clause> clauses;
                if (dnf(m, target, clauses)) {
                    bool unknown = false;
                    for (const auto& c : clauses) {
                        tick(c.size() + 1);
                        Assignment a;
                        SolveStatus s = solve_clause(vars, c, w_.bound, a);
                        if (s == SolveStatus::Found && truth(m, a) == target) return a;
                        if (s != SolveStatus::None) unknown = true;
                    }
                    if (!unknown) return std::nullopt;
                }
            }
        }
        // Exhaustive over the first variable; the rest recurse.
        Int width = 2 * w_.bound + 1;
        if (width > Int(static_cast<unsigned long>(w_.cost_cap - used_))) {
            throw EvalBudgetExceeded("window too large for exhaustive enumeration of '" + vars[0] + "'");
        }
        std::vector<std::string> rest(vars.begin() + 1, vars.end());
        for (Int a = 0; a <= w_.bound; ++a) {
            for (int sign : {1, -1}) {
                if (a == 0 && sign == -1) continue;
                Int x = sign * a;
                tick();
                auto found = search(rest, specialize(m, {{vars[0], x}}), target, universal);
                if (found) {
                    (*found)[vars[0]] = x;
                    return found;
                }
            }
        }
        return std::nullopt;
    }

    // Exact over [-N, N] for a quantifier-free matrix in one variable: between
    // consecutive critical points every Eq and U atom is false, every Lt atom
    // is constant and D atoms are periodic, so M consecutive values per gap
    // cover all behaviours (M = lcm of D moduli).
    std::optional<Assignment> test_points(const std::string& v, const Formula& m, bool target) {
        const Int& N = w_.bound;
        std::vector<const Formula*> atoms;
        collect_atoms(m, atoms);
        std::set<Int> points{-N, Int(0), N};
        Int period = 1;
        for (const Formula* a : atoms) {
            Term t = (a->op == Op::Eq || a->op == Op::Lt) ? a->lhs - a->rhs : a->lhs;
            Int c = t.coefficient(v);
            const Int& d = t.constant();
            if (c == 0) continue;
            switch (a->op) {
                case Op::Eq:
                    if (mpz_divisible_p(d.get_mpz_t(), c.get_mpz_t())) points.insert(Int(-d / c));
                    break;
                case Op::Lt: {
                    Int fl = floor_div(-d, c);
                    for (int off = -1; off <= 1; ++off) points.insert(fl + off);
                    break;
                }
                case Op::U: {
                    Int reach = abs(c) * N + abs(d);
                    for (Int p = 1; p <= reach; p *= a->param) {
                        tick();
                        Int diff = p - d;
                        if (mpz_divisible_p(diff.get_mpz_t(), c.get_mpz_t())) points.insert(Int(diff / c));
                    }
                    break;
                }
                case Op::D:
                    period = lcm(period, a->param);
                    break;
                default:
                    break;
            }
        }
        std::vector<Int> sorted;
        for (const auto& p : points) {
            if (p >= -N && p <= N) sorted.push_back(p);
        }
        std::vector<Int> candidates = sorted;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            Int end = std::min(Int(sorted[i] + period), Int(sorted[i + 1] - 1));
            if (end - sorted[i] > Int(static_cast<unsigned long>(w_.cost_cap))) {
                throw EvalBudgetExceeded("congruence period too large for test points");
            }
            for (Int x = sorted[i] + 1; x <= end; ++x) {
                tick();
                candidates.push_back(x);
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const Int& a, const Int& b) {
            int c = cmp(abs(a), abs(b));
            return c != 0 ? c < 0 : a < b;
        });
        for (const auto& x : candidates) {
            Assignment a{{v, x}};
            if (truth(m, a) == target) return a;
        }
        return std::nullopt;
    }

    void tick(std::uint64_t n = 1) {
        used_ += n;
        if (used_ > w_.cost_cap) throw EvalBudgetExceeded("cost cap exceeded");
    }

    EvalWindow w_;
    std::uint64_t used_ = 0;
};

std::optional<Assignment> falsifier(Evaluator& ev, const Formula& f) {
    if (f.op == Op::Forall) {
        std::vector<std::string> vars;
        const Formula* m = Evaluator::chain(f, vars);
        auto hit = ev.search(vars, *m, false, true);
        if (hit && ev.truth(*m, *hit)) {
            throw std::logic_error("counterexample failed re-verification");
        }
        return hit;
    }
    if (f.op == Op::And) {
        for (const auto& a : f.args) {
            if (!ev.truth(a, {})) return falsifier(ev, a);
        }
        return std::nullopt;
    }
    if (ev.truth(f, {})) return std::nullopt;
    return Assignment{};
}

}  // namespace

bool holds(const Formula& f, const Assignment& env, const EvalWindow& window) {
    Evaluator ev(window);
    return ev.truth(f, env);
}

EvalResult eval_window(const Formula& sentence, const EvalWindow& window) {
    if (!is_sentence(sentence)) throw std::invalid_argument("eval_window: formula has free variables");
    EvalResult r;
    try {
        Evaluator ev(window);
        auto cex = falsifier(ev, sentence);
        if (cex) {
            r.kind = EvalResult::Kind::Counterexample;
            r.assignment = *cex;
        }
    } catch (const EvalBudgetExceeded& e) {
        r.kind = EvalResult::Kind::Unknown;
        r.reason = e.what();
    }
    return r;
}

}  // namespace powerarith
