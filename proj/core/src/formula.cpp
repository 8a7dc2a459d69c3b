#include "powerarith/formula.hpp"

#include <utility>

namespace powerarith {

Term Term::var(const std::string& name, const Int& coeff) {
    Term t;
    if (coeff != 0) t.coeffs_.emplace(name, coeff);
    return t;
}

Int Term::coefficient(const std::string& name) const {
    auto it = coeffs_.find(name);
    return it == coeffs_.end() ? Int(0) : it->second;
}

Term& Term::operator+=(const Term& other) {
    for (const auto& [name, c] : other.coeffs_) {
        Int& slot = coeffs_[name];
        slot += c;
        if (slot == 0) coeffs_.erase(name);
    }
    constant_ += other.constant_;
    return *this;
}

Term& Term::operator-=(const Term& other) { return *this += -other; }

Term& Term::operator*=(const Int& factor) {
    if (factor == 0) {
        coeffs_.clear();
        constant_ = 0;
        return *this;
    }
    for (auto& [name, c] : coeffs_) c *= factor;
    constant_ *= factor;
    return *this;
}

Int Term::evaluate(const std::map<std::string, Int>& env) const {
    Int v = constant_;
    for (const auto& [name, c] : coeffs_) {
        auto it = env.find(name);
        if (it == env.end()) throw std::invalid_argument("unassigned variable '" + name + "'");
        v += c * it->second;
    }
    return v;
}

Term Term::substitute(const std::string& name, const Int& value) const {
    auto it = coeffs_.find(name);
    if (it == coeffs_.end()) return *this;
    Term out = *this;
    out.constant_ += it->second * value;
    out.coeffs_.erase(name);
    return out;
}

namespace fm {

namespace {
Formula atom(Op op, Term a, Term b = Term()) {
    Formula f;
    f.op = op;
    f.lhs = std::move(a);
    f.rhs = std::move(b);
    return f;
}

Formula nary(Op op, std::vector<Formula> parts) {
    Formula f;
    f.op = op;
    f.args = std::move(parts);
    return f;
}
}  // namespace

Formula truth() { return Formula{}; }

Formula falsity() {
    Formula f;
    f.op = Op::False;
    return f;
}

Formula eq(Term a, Term b) { return atom(Op::Eq, std::move(a), std::move(b)); }
Formula lt(Term a, Term b) { return atom(Op::Lt, std::move(a), std::move(b)); }
Formula ne(Term a, Term b) { return neg(eq(std::move(a), std::move(b))); }
Formula le(Term a, Term b) { return neg(lt(std::move(b), std::move(a))); }

Formula U(const Int& base, Term t) {
    if (base < 2) throw std::invalid_argument("U base must be >= 2");
    Formula f = atom(Op::U, std::move(t));
    f.param = base;
    return f;
}

Formula D(const Int& modulus, Term t) {
    if (modulus < 2) throw std::invalid_argument("D modulus must be >= 2");
    Formula f = atom(Op::D, std::move(t));
    f.param = modulus;
    return f;
}

Formula neg(Formula f) { return nary(Op::Not, {std::move(f)}); }

Formula conj(std::vector<Formula> parts) {
    if (parts.empty()) return truth();
    if (parts.size() == 1) return std::move(parts.front());
    return nary(Op::And, std::move(parts));
}

Formula disj(std::vector<Formula> parts) {
    if (parts.empty()) return falsity();
    if (parts.size() == 1) return std::move(parts.front());
    return nary(Op::Or, std::move(parts));
}

Formula implies(Formula a, Formula b) { return nary(Op::Implies, {std::move(a), std::move(b)}); }
Formula iff(Formula a, Formula b) { return nary(Op::Iff, {std::move(a), std::move(b)}); }

Formula forall(const std::string& v, Formula body) {
    Formula f = nary(Op::Forall, {std::move(body)});
    f.var = v;
    return f;
}

Formula forall(const std::vector<std::string>& vs, Formula body) {
    for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, std::move(body));
    return body;
}

Formula exists(const std::string& v, Formula body) {
    Formula f = nary(Op::Exists, {std::move(body)});
    f.var = v;
    return f;
}

}  // namespace fm

std::string render(const Term& t) {
    std::vector<std::string> items;
    for (const auto& [name, c] : t.coefficients()) {
        items.push_back(c == 1 ? name : "(scale " + to_string(c) + " " + name + ")");
    }
    const Int& c = t.constant();
    if (items.empty()) return to_string(c);
    auto join = [&items] {
        if (items.size() == 1) return items.front();
        std::string out = "(+";
        for (const auto& s : items) out += " " + s;
        return out + ")";
    };
    if (c < 0) return "(- " + join() + " " + to_string(Int(-c)) + ")";
    if (c > 0) items.push_back(to_string(c));
    return join();
}

namespace {

const char* keyword(Op op) {
    switch (op) {
        case Op::True: return "true";
        case Op::False: return "false";
        case Op::Eq: return "=";
        case Op::Lt: return "<";
        case Op::U: return "U";
        case Op::D: return "D";
        case Op::Not: return "not";
        case Op::And: return "and";
        case Op::Or: return "or";
        case Op::Implies: return "->";
        case Op::Iff: return "<->";
        case Op::Forall: return "forall";
        case Op::Exists: return "exists";
    }
    return "?";
}

void render_into(const Formula& f, std::string& out) {
    switch (f.op) {
        case Op::True:
        case Op::False:
            out += keyword(f.op);
            return;
        case Op::Eq:
        case Op::Lt:
            out += "(";
            out += keyword(f.op);
            out += " " + render(f.lhs) + " " + render(f.rhs) + ")";
            return;
        case Op::U:
        case Op::D:
            out += "(";
            out += keyword(f.op);
            out += " " + to_string(f.param) + " " + render(f.lhs) + ")";
            return;
        case Op::Forall:
        case Op::Exists:
            out += "(";
            out += keyword(f.op);
            out += " " + f.var + " ";
            render_into(f.args.at(0), out);
            out += ")";
            return;
        default:
            out += "(";
            out += keyword(f.op);
            for (const auto& a : f.args) {
                out += " ";
                render_into(a, out);
            }
            out += ")";
    }
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    auto add_term = [&](const Term& t) {
        for (const auto& [name, c] : t.coefficients()) {
            if (!bound.count(name)) out.insert(name);
        }
    };
    switch (f.op) {
        case Op::Eq:
        case Op::Lt:
            add_term(f.lhs);
            add_term(f.rhs);
            return;
        case Op::U:
        case Op::D:
            add_term(f.lhs);
            return;
        case Op::Forall:
        case Op::Exists: {
            bool fresh = bound.insert(f.var).second;
            collect_free(f.args.at(0), bound, out);
            if (fresh) bound.erase(f.var);
            return;
        }
        default:
            for (const auto& a : f.args) collect_free(a, bound, out);
    }
}

}  // namespace

std::string render(const Formula& f) {
    std::string out;
    render_into(f, out);
    return out;
}

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound;
    std::set<std::string> out;
    collect_free(f, bound, out);
    return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

nlohmann::json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return v.get_si();
    return to_string(v);
}

Int int_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return parse_int(j.get<std::string>());
    throw std::invalid_argument("expected an integer, got " + j.dump());
}

nlohmann::json AxiomInstance::to_json() const {
    nlohmann::json j;
    j["tag"] = tag;
    j["params"] = params;
    j["formula"] = render(formula);
    j["completeness_flag"] = completeness;
    if (!note.empty()) j["note"] = note;
    return j;
}

}  // namespace powerarith
