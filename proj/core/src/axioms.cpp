#include "powerarith/axioms.hpp"

#include "powerarith/congruence.hpp"
#include "powerarith/inequality.hpp"
#include "powerarith/mann.hpp"

#include <set>

namespace powerarith {

nlohmann::json AxiomParams::to_json() const {
    return {{"cong_max", cong_max},       {"mann_arity_max", mann_arity_max}, {"mann_coeff_max", mann_coeff_max},
            {"mann_rhs_max", mann_rhs_max}, {"e_max", e_max},                   {"car1_m_max", car1_m_max},
            {"car2_n_max", car2_n_max}};
}

AxiomParams AxiomParams::from_json(const nlohmann::json& j) {
    AxiomParams p;
    if (j.is_null()) return p;
    if (!j.is_object()) throw std::invalid_argument("axiom params must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        auto v = value.get<std::uint64_t>();
        if (key == "cong_max") {
            p.cong_max = v;
        } else if (key == "mann_arity_max") {
            p.mann_arity_max = v;
        } else if (key == "mann_coeff_max") {
            p.mann_coeff_max = v;
        } else if (key == "mann_rhs_max") {
            p.mann_rhs_max = v;
        } else if (key == "e_max") {
            p.e_max = v;
        } else if (key == "car1_m_max") {
            p.car1_m_max = v;
        } else if (key == "car2_n_max") {
            p.car2_n_max = v;
        } else {
            throw std::invalid_argument("unknown axiom parameter '" + key + "'");
        }
    }
    if (p.mann_coeff_max == 0 || p.mann_rhs_max == 0) throw std::invalid_argument("Mann coefficient bounds must be >= 1");
    return p;
}

std::optional<AxiomInstance> AxiomStream::next() {
    while (pending_.empty()) {
        if (stage_ == stages_.size()) return std::nullopt;
        for (auto& a : stages_[stage_++]()) pending_.push_back(std::move(a));
    }
    AxiomInstance a = std::move(pending_.front());
    pending_.pop_front();
    return a;
}

std::vector<AxiomInstance> AxiomStream::collect() {
    std::vector<AxiomInstance> out;
    while (auto a = next()) out.push_back(std::move(*a));
    return out;
}

namespace {

const Term x = Term::var("x");
const Term y = Term::var("y");
const Term z = Term::var("z");

AxiomInstance make(const std::string& tag, const std::string& schema, nlohmann::json params, Formula f) {
    AxiomInstance a;
    a.tag = tag;
    a.params = {{"schema", schema}};
    for (auto& [k, v] : params.items()) a.params[k] = v;
    a.formula = std::move(f);
    return a;
}

AxiomInstance retag(AxiomInstance a, const std::string& tag) {
    nlohmann::json params = {{"schema", a.tag}};
    for (auto& [k, v] : a.params.items()) params[k] = v;
    a.tag = tag;
    a.params = std::move(params);
    return a;
}

void check_bases(const std::vector<Int>& bases) {
    if (bases.empty()) throw std::invalid_argument("base set must be non-empty");
    std::set<Int> seen;
    for (const auto& b : bases) {
        if (b < 2) throw std::invalid_argument("bases must be >= 2");
        if (!seen.insert(b).second) throw std::invalid_argument("duplicate base " + to_string(b));
    }
    for (std::size_t i = 0; i < bases.size(); ++i) {
        for (std::size_t j = i + 1; j < bases.size(); ++j) {
            if (auto d = dependence(bases[i], bases[j])) {
                throw std::invalid_argument("bases " + to_string(bases[i]) + " and " + to_string(bases[j]) +
                                            " are dependent (" + to_string(bases[i]) + "^" + std::to_string(d->m) +
                                            " = " + to_string(bases[j]) + "^" + std::to_string(d->n) +
                                            "); express U_" + to_string(bases[j]) + " via definability_rewrite");
            }
        }
    }
}

Formula forall_x(Formula body) { return fm::forall("x", std::move(body)); }

std::vector<AxiomInstance> group_axioms(const std::string& tag, bool universal, std::uint64_t cong_max) {
    std::vector<AxiomInstance> out;
    out.push_back(make(tag, "group", {{"name", "assoc"}},
                       fm::forall(std::vector<std::string>{"x", "y", "z"}, fm::eq((x + y) + z, x + (y + z)))));
    out.push_back(make(tag, "group", {{"name", "comm"}},
                       fm::forall(std::vector<std::string>{"x", "y"}, fm::eq(x + y, y + x))));
    out.push_back(make(tag, "group", {{"name", "zero"}}, forall_x(fm::eq(x + Term(0L), x))));
    if (universal) {
        out.push_back(make(tag, "group", {{"name", "inverse"}}, forall_x(fm::eq(x + (-x), Term(0L)))));
        return out;
    }
    out.push_back(make(tag, "group", {{"name", "inverse"}}, forall_x(fm::exists("y", fm::eq(x + y, Term(0L))))));
    out.push_back(make(tag, "group", {{"name", "nontrivial"}}, fm::ne(Term(0L), Term(1L))));
    for (std::uint64_t n = 2; n <= cong_max; ++n) {
        Int nn(static_cast<unsigned long>(n));
        out.push_back(make(tag, "torsion_free", {{"n", n}},
                           forall_x(fm::implies(fm::eq(nn * x, Term(0L)), fm::eq(x, Term(0L))))));
    }
    return out;
}

std::vector<AxiomInstance> order_axioms(const std::string& tag) {
    std::vector<AxiomInstance> out;
    out.push_back(make(tag, "order", {{"name", "irreflexive"}}, forall_x(fm::neg(fm::lt(x, x)))));
    out.push_back(make(tag, "order", {{"name", "transitive"}},
                       fm::forall(std::vector<std::string>{"x", "y", "z"},
                                  fm::implies(fm::conj({fm::lt(x, y), fm::lt(y, z)}), fm::lt(x, z)))));
    out.push_back(make(tag, "order", {{"name", "total"}},
                       fm::forall(std::vector<std::string>{"x", "y"},
                                  fm::disj({fm::lt(x, y), fm::eq(x, y), fm::lt(y, x)}))));
    out.push_back(make(tag, "order", {{"name", "compatible"}},
                       fm::forall(std::vector<std::string>{"x", "y", "z"},
                                  fm::implies(fm::lt(x, y), fm::lt(x + z, y + z)))));
    return out;
}

std::vector<AxiomInstance> congruence_axioms(const std::string& tag, bool universal, std::uint64_t cong_max) {
    std::vector<AxiomInstance> out;
    for (std::uint64_t n = 2; n <= cong_max; ++n) {
        Int nn(static_cast<unsigned long>(n));
        std::vector<Formula> cases;
        for (std::uint64_t j = 1; j <= n; ++j) {
            std::vector<Formula> parts;
            if (!universal) parts.push_back(fm::D(nn, x + Term(Int(static_cast<unsigned long>(j)))));
            for (std::uint64_t k = 1; k <= n; ++k) {
                if (k != j) parts.push_back(fm::neg(fm::D(nn, x + Term(Int(static_cast<unsigned long>(k))))));
            }
            cases.push_back(fm::conj(std::move(parts)));
        }
        out.push_back(make(tag, universal ? "universal_congruence" : "congruence", {{"n", n}},
                           forall_x(fm::disj(std::move(cases)))));
    }
    return out;
}

std::vector<AxiomInstance> multiplication_axioms(const std::string& tag, const std::vector<Int>& bases) {
    std::vector<AxiomInstance> out;
    for (const auto& l : bases) {
        out.push_back(make(tag, "multiplication", {{"l", int_to_json(l)}},
                           fm::conj({fm::U(l, Term(1L)), forall_x(fm::iff(fm::U(l, x), fm::U(l, l * x)))})));
    }
    return out;
}

std::vector<AxiomInstance> mann_axioms(const std::string& tag, const std::vector<Int>& bases, const AxiomParams& p) {
    std::vector<AxiomInstance> out;
    std::vector<Int> values;
    for (long c = -static_cast<long>(p.mann_coeff_max); c <= static_cast<long>(p.mann_coeff_max); ++c) {
        if (c != 0) values.push_back(Int(c));
    }
    std::vector<Int> rhs;
    for (long b = -static_cast<long>(p.mann_rhs_max); b <= static_cast<long>(p.mann_rhs_max); ++b) {
        if (b != 0) rhs.push_back(Int(b));
    }
    for (std::uint64_t n = 1; n <= p.mann_arity_max; ++n) {
        std::vector<std::size_t> ci(n, 0);
        for (;;) {
            std::vector<Int> coeffs;
            for (auto i : ci) coeffs.push_back(values[i]);
            for (const auto& b : rhs) {
                std::vector<std::size_t> bi(n + 1, 0);
                for (;;) {
                    std::vector<Int> bs;
                    for (auto i : bi) bs.push_back(bases[i]);
                    out.push_back(retag(mann_axiom(coeffs, b, bs, p.e_max).instance(), tag));
                    std::size_t i = n + 1;
                    while (i > 0 && bi[i - 1] + 1 == bases.size()) bi[--i] = 0;
                    if (i == 0) break;
                    ++bi[i - 1];
                }
            }
            std::size_t i = n;
            while (i > 0 && ci[i - 1] + 1 == values.size()) ci[--i] = 0;
            if (i == 0) break;
            ++ci[i - 1];
        }
    }
    return out;
}

std::vector<AxiomInstance> carmichael_axioms(const std::string& tag, const std::vector<Int>& bases,
                                             const AxiomParams& p) {
    std::vector<AxiomInstance> out;
    for (const auto& l : bases) {
        for (std::uint64_t m = 0; m <= p.car1_m_max; ++m) out.push_back(retag(car1_axiom(l, m), tag));
        for (std::uint64_t n = 2; n <= p.car2_n_max; ++n) {
            Int g = gcd(l, Int(static_cast<unsigned long>(n)));
            if (g == 1) out.push_back(retag(car2_axiom(l, n), tag));
        }
    }
    return out;
}

}  // namespace

AxiomStream emit_T(const std::vector<Int>& bases, const AxiomParams& params) {
    check_bases(bases);
    std::vector<AxiomStream::Stage> stages;
    stages.push_back([p = params] { return group_axioms("A1", false, p.cong_max); });
    stages.push_back([p = params] { return congruence_axioms("A2", false, p.cong_max); });
    stages.push_back([bases] { return multiplication_axioms("A3", bases); });
    stages.push_back([bases, p = params] { return mann_axioms("A4", bases, p); });
    stages.push_back([bases, p = params] { return carmichael_axioms("A5", bases, p); });
    return AxiomStream(std::move(stages));
}

AxiomStream emit_Tforall(const std::vector<Int>& bases, const AxiomParams& params) {
    check_bases(bases);
    if (bases.size() > 2) {
        throw std::invalid_argument("the universal theory is only emitted for at most two bases");
    }
    std::vector<AxiomStream::Stage> stages;
    stages.push_back([] {
        auto out = group_axioms("∀1", true, 0);
        for (auto& a : order_axioms("∀1")) out.push_back(std::move(a));
        return out;
    });
    stages.push_back([p = params] { return congruence_axioms("∀2", true, p.cong_max); });
    stages.push_back([bases] { return multiplication_axioms("∀3", bases); });
    stages.push_back([] {
        Formula f = fm::conj({fm::lt(Term(0L), Term(1L)), forall_x(fm::disj({fm::le(x, Term(0L)), fm::le(Term(1L), x)}))});
        return std::vector<AxiomInstance>{make("∀4", "discrete", nlohmann::json::object(), std::move(f))};
    });
    stages.push_back([bases, p = params] { return mann_axioms("∀5", bases, p); });
    stages.push_back([bases] {
        std::vector<AxiomInstance> out;
        for (const auto& l : bases) {
            for (auto& a : binequ_axioms(l)) out.push_back(retag(std::move(a), "∀6"));
        }
        return out;
    });
    stages.push_back([bases, p = params] { return carmichael_axioms("∀7", bases, p); });
    return AxiomStream(std::move(stages));
}

Formula definability_rewrite(const Int& k, const Int& l, const std::string& var) {
    auto dep = dependence(k, l);
    if (!dep) throw std::invalid_argument("definability_rewrite: bases are multiplicatively independent");
    const Int km1 = ipow(k, dep->m) - 1;
    auto power_of_km = [&](const Term& t) {
        std::vector<Formula> parts{fm::U(k, t)};
        if (km1 >= 2) parts.push_back(fm::D(km1, t - Term(1L)));
        return parts;
    };
    const Term v = Term::var(var);
    if (dep->n == 1) return fm::conj(power_of_km(v));
    const std::string yname = var == "y" ? "w" : "y";
    const Term w = Term::var(yname);
    std::vector<Formula> parts = power_of_km(w);
    std::vector<Formula> shifts;
    for (std::uint64_t t = 0; t < dep->n; ++t) shifts.push_back(fm::eq(ipow(l, t) * v, w));
    parts.push_back(fm::disj(std::move(shifts)));
    return fm::exists(yname, fm::conj(std::move(parts)));
}

}  // namespace powerarith
