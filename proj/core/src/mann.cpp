#include "powerarith/mann.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

namespace powerarith {

bool PowerEquation::same_base() const {
    return std::all_of(bases.begin(), bases.end(), [&](const Int& b) { return b == bases.front(); });
}

void PowerEquation::validate() const {
    if (coeffs.empty()) throw std::invalid_argument("equation needs at least one left-hand term");
    if (bases.size() != coeffs.size() + 1) throw std::invalid_argument("equation needs n+1 bases");
    if (!names.empty() && names.size() != bases.size()) throw std::invalid_argument("equation needs n+1 names");
    for (const auto& a : coeffs) {
        if (a == 0) throw std::invalid_argument("zero coefficient");
    }
    if (rhs == 0) throw std::invalid_argument("zero right-hand coefficient");
    for (std::size_t i = 0; i < bases.size(); ++i) {
        if (bases[i] < 2) throw std::invalid_argument("bases must be >= 2");
        for (std::size_t j = 0; j < i; ++j) {
            if (bases[i] != bases[j] && !mult_independent(bases[i], bases[j])) {
                throw std::invalid_argument("bases " + to_string(bases[j]) + " and " + to_string(bases[i]) +
                                            " are multiplicatively dependent");
            }
        }
    }
}

std::vector<Int> PowerEquation::signed_coeffs() const {
    std::vector<Int> c = coeffs;
    c.push_back(-rhs);
    return c;
}

nlohmann::json PowerEquation::to_json() const {
    nlohmann::json j;
    j["coeffs"] = nlohmann::json::array();
    for (const auto& a : coeffs) j["coeffs"].push_back(int_to_json(a));
    j["rhs"] = int_to_json(rhs);
    j["bases"] = nlohmann::json::array();
    for (const auto& b : bases) j["bases"].push_back(int_to_json(b));
    if (!names.empty()) j["names"] = names;
    return j;
}

PowerEquation PowerEquation::from_json(const nlohmann::json& j) {
    PowerEquation eq;
    for (const auto& a : j.at("coeffs")) eq.coeffs.push_back(int_from_json(a));
    eq.rhs = int_from_json(j.at("rhs"));
    for (const auto& b : j.at("bases")) eq.bases.push_back(int_from_json(b));
    if (j.contains("names")) eq.names = j.at("names").get<std::vector<std::string>>();
    eq.validate();
    return eq;
}

PowerEquation PowerEquation::parse_inline(const std::string& text) {
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& what) -> void {
        throw std::invalid_argument("inline equation, offset " + std::to_string(pos) + ": " + what);
    };
    auto number = [&]() -> Int {
        skip();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) fail("expected a number");
        return parse_int(text.substr(start, pos - start));
    };
    // [coef *] base ^ name
    auto term = [&](Int sign, Int& coef, Int& base, std::string& name) {
        Int first = number();
        skip();
        if (pos < text.size() && text[pos] == '*') {
            ++pos;
            coef = sign * first;
            base = number();
            skip();
        } else {
            coef = sign;
            base = first;
        }
        if (pos >= text.size() || text[pos] != '^') fail("expected '^'");
        ++pos;
        skip();
        std::size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
        if (start == pos) fail("expected an exponent name");
        name = text.substr(start, pos - start);
    };
    PowerEquation eq;
    Int sign = 1;
    skip();
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        sign = text[pos] == '-' ? -1 : 1;
        ++pos;
    }
    while (true) {
        Int coef, base;
        std::string name;
        term(sign, coef, base, name);
        eq.coeffs.push_back(coef);
        eq.bases.push_back(base);
        eq.names.push_back(name);
        skip();
        if (pos >= text.size()) fail("expected '='");
        char c = text[pos];
        if (c == '=') {
            ++pos;
            break;
        }
        if (c != '+' && c != '-') fail("expected '+', '-' or '='");
        sign = c == '-' ? -1 : 1;
        ++pos;
    }
    skip();
    sign = 1;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
        sign = text[pos] == '-' ? -1 : 1;
        ++pos;
    }
    Int coef, base;
    std::string name;
    term(sign, coef, base, name);
    skip();
    if (pos != text.size()) fail("trailing input");
    eq.rhs = coef;
    eq.bases.push_back(base);
    eq.names.push_back(name);
    eq.validate();
    return eq;
}

namespace {

std::vector<Int> term_values(const PowerEquation& eq, const ExponentTuple& e) {
    std::vector<Int> c = eq.signed_coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= ipow(eq.bases[i], e[i]);
    return c;
}

}  // namespace

bool satisfies(const PowerEquation& eq, const ExponentTuple& e) {
    if (e.size() != eq.bases.size()) return false;
    Int sum = 0;
    for (const auto& v : term_values(eq, e)) sum += v;
    return sum == 0;
}

std::vector<ExponentTuple> enumerate_solutions(const PowerEquation& eq, std::uint64_t bound) {
    eq.validate();
    const std::vector<Int> c = eq.signed_coeffs();
    const std::size_t terms = c.size();
    std::vector<std::vector<Int>> table(terms);
    for (std::size_t i = 0; i < terms; ++i) {
        Int p = 1;
        for (std::uint64_t e = 0; e <= bound; ++e) {
            table[i].push_back(c[i] * p);
            p *= eq.bases[i];
        }
    }
    // Meet in the middle: sums over the first half are matched against
    // negated sums over the second half.
    const std::size_t half = terms / 2;
    auto for_each = [&](std::size_t lo, std::size_t hi, auto&& fn) {
        ExponentTuple part(hi - lo, 0);
        while (true) {
            Int sum = 0;
            for (std::size_t i = lo; i < hi; ++i) sum += table[i][part[i - lo]];
            fn(part, sum);
            std::size_t k = 0;
            while (k < part.size() && part[k] == bound) part[k++] = 0;
            if (k == part.size()) return;
            ++part[k];
        }
    };
    std::map<Int, std::vector<ExponentTuple>> left;
    for_each(0, half, [&](const ExponentTuple& p, const Int& s) { left[s].push_back(p); });
    std::vector<ExponentTuple> out;
    for_each(half, terms, [&](const ExponentTuple& p, const Int& s) {
        auto it = left.find(-s);
        if (it == left.end()) return;
        for (const auto& l : it->second) {
            ExponentTuple full = l;
            full.insert(full.end(), p.begin(), p.end());
            out.push_back(std::move(full));
        }
    });
    std::sort(out.begin(), out.end());
    return out;
}

bool is_degenerate(const PowerEquation& eq, const ExponentTuple& e) {
    const std::vector<Int> v = term_values(eq, e);
    const std::size_t n = eq.arity();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        Int sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (mask >> j & 1) sum += v[j];
        }
        if (sum == 0) return true;
    }
    return false;
}

std::vector<ExponentTuple> nondegenerate_solutions(const PowerEquation& eq, std::uint64_t bound) {
    std::vector<ExponentTuple> out;
    for (auto& e : enumerate_solutions(eq, bound)) {
        if (!is_degenerate(eq, e)) out.push_back(std::move(e));
    }
    return out;
}

std::vector<ExponentTuple> primitive_solutions(const PowerEquation& eq, std::uint64_t bound) {
    if (!eq.same_base()) throw std::invalid_argument("primitive_solutions needs all bases equal");
    std::set<ExponentTuple> out;
    for (auto e : nondegenerate_solutions(eq, bound)) {
        std::uint64_t m = *std::min_element(e.begin(), e.end());
        for (auto& x : e) x -= m;
        out.insert(std::move(e));
    }
    return {out.begin(), out.end()};
}

UConstraint UConstraint::coupled(std::size_t mu, std::size_t sigma, std::uint64_t c) {
    UConstraint u;
    u.kind = Kind::Coupled;
    u.mu = mu;
    u.sigma = sigma;
    u.value = c;
    return u;
}

UConstraint UConstraint::fixed(std::size_t xi, std::uint64_t b) {
    UConstraint u;
    u.kind = Kind::Fixed;
    u.xi = xi;
    u.value = b;
    return u;
}

bool UConstraint::holds(const ExponentTuple& e) const {
    if (kind == Kind::Fixed) return e.at(xi) == value;
    return e.at(mu) == e.at(sigma) + value;
}

nlohmann::json UConstraint::to_json() const {
    if (kind == Kind::Fixed) return {{"kind", "fixed"}, {"xi", xi + 1}, {"b", value}};
    return {{"kind", "coupled"}, {"mu", mu + 1}, {"sigma", sigma + 1}, {"c", value}};
}

const char* to_string(Completeness c) {
    return c == Completeness::Certified ? "certified" : "bound_limited";
}

bool SolutionSet::contains(const ExponentTuple& e) const {
    if (std::binary_search(isolated.begin(), isolated.end(), e)) return true;
    return std::any_of(families.begin(), families.end(), [&](const std::vector<UConstraint>& fam) {
        return std::all_of(fam.begin(), fam.end(), [&](const UConstraint& u) { return u.holds(e); });
    });
}

std::vector<nlohmann::json> SolutionSet::to_jsonl() const {
    std::vector<nlohmann::json> out;
    for (const auto& fam : families) {
        nlohmann::json j{{"type", "family"}, {"constraints", nlohmann::json::array()}};
        for (const auto& u : fam) j["constraints"].push_back(u.to_json());
        j["completeness"] = to_string(completeness);
        out.push_back(std::move(j));
    }
    for (const auto& t : isolated) {
        out.push_back({{"type", "isolated"}, {"tuple", t}, {"completeness", to_string(completeness)}});
    }
    return out;
}

namespace {

// Finest partition of the signed terms into blocks that each sum to zero.
// Ties are broken by the first partition in restricted-growth order.
std::vector<std::vector<std::size_t>> finest_vanishing_partition(const std::vector<Int>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> rgs(n, 0);
    std::vector<std::size_t> best;
    std::size_t best_blocks = 0;
    while (true) {
        std::size_t blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        if (blocks > best_blocks) {
            std::vector<Int> sums(blocks, 0);
            for (std::size_t i = 0; i < n; ++i) sums[rgs[i]] += values[i];
            if (std::all_of(sums.begin(), sums.end(), [](const Int& s) { return s == 0; })) {
                best = rgs;
                best_blocks = blocks;
            }
        }
        // Next restricted growth string.
        std::size_t i = n;
        while (i-- > 1) {
            std::size_t mx = *std::max_element(rgs.begin(), rgs.begin() + static_cast<std::ptrdiff_t>(i));
            if (rgs[i] <= mx) {
                ++rgs[i];
                std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0);
                break;
            }
        }
        if (i == 0 || i > n) break;
    }
    std::vector<std::vector<std::size_t>> out(best_blocks);
    for (std::size_t i = 0; i < n; ++i) out[best[i]].push_back(i);
    return out;
}

std::vector<std::uint64_t> prime_factors(Int n) {
    std::vector<std::uint64_t> out;
    for (unsigned long p = 2; Int(p) * p <= n; ++p) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.push_back(p);
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= p;
        }
    }
    if (n > 1) out.push_back(n.get_ui());
    return out;
}

std::uint64_t valuation(Int n, std::uint64_t p) {
    std::uint64_t v = 0;
    n = abs(n);
    while (n != 0 && mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        n /= p;
        ++v;
    }
    return v;
}

// The unique exponent pair of a*l1^e1 = b*l2^e2 for independent l1, l2,
// if any, read off a 2x2 system of p-adic valuations.
std::optional<ExponentTuple> two_term_solution(const PowerEquation& eq) {
    std::vector<std::uint64_t> primes = prime_factors(eq.bases[0] * eq.bases[1]);
    struct Row {
        Int alpha, beta, gamma;  // alpha e1 - beta e2 = gamma
    };
    std::vector<Row> rows;
    for (auto p : primes) {
        rows.push_back({Int(static_cast<unsigned long>(valuation(eq.bases[0], p))),
                        Int(static_cast<unsigned long>(valuation(eq.bases[1], p))),
                        Int(static_cast<unsigned long>(valuation(eq.rhs, p))) -
                            Int(static_cast<unsigned long>(valuation(eq.coeffs[0], p)))});
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const Row& r = rows[i];
            const Row& s = rows[j];
            Int det = -r.alpha * s.beta + s.alpha * r.beta;
            if (det == 0) continue;
            Rat e1 = make_rat(-r.gamma * s.beta + s.gamma * r.beta, det);
            Rat e2 = make_rat(r.alpha * s.gamma - s.alpha * r.gamma, det);
            if (e1 < 0 || e2 < 0 || e1.get_den() != 1 || e2.get_den() != 1) return std::nullopt;
            ExponentTuple t{e1.get_num().get_ui(), e2.get_num().get_ui()};
            if (satisfies(eq, t)) return t;
            return std::nullopt;
        }
    }
    throw std::logic_error("valuation system is singular for independent bases");
}

}  // namespace

SolutionSet family_structure(const PowerEquation& eq, std::uint64_t bound) {
    SolutionSet out;
    out.bound = bound;
    std::set<std::string> seen;
    for (const auto& e : enumerate_solutions(eq, bound)) {
        std::vector<UConstraint> fam;
        bool coupled = false;
        for (const auto& block : finest_vanishing_partition(term_values(eq, e))) {
            bool same = std::all_of(block.begin(), block.end(),
                                    [&](std::size_t i) { return eq.bases[i] == eq.bases[block.front()]; });
            if (!same) {
                for (auto i : block) fam.push_back(UConstraint::fixed(i, e[i]));
                continue;
            }
            std::size_t sigma = block.front();
            for (auto i : block) {
                if (e[i] < e[sigma]) sigma = i;
            }
            for (auto i : block) {
                if (i == sigma) continue;
                fam.push_back(UConstraint::coupled(i, sigma, e[i] - e[sigma]));
                coupled = true;
            }
        }
        if (!coupled) {
            out.isolated.push_back(e);
            continue;
        }
        std::sort(fam.begin(), fam.end(), [](const UConstraint& a, const UConstraint& b) {
            std::size_t ia = a.kind == UConstraint::Kind::Fixed ? a.xi : a.mu;
            std::size_t ib = b.kind == UConstraint::Kind::Fixed ? b.xi : b.mu;
            return ia < ib;
        });
        nlohmann::json key = nlohmann::json::array();
        for (const auto& u : fam) key.push_back(u.to_json());
        if (seen.insert(key.dump()).second) out.families.push_back(std::move(fam));
    }
    std::sort(out.isolated.begin(), out.isolated.end());

    const std::vector<Int> c = eq.signed_coeffs();
    bool one_sign = std::all_of(c.begin(), c.end(), [](const Int& v) { return v > 0; }) ||
                    std::all_of(c.begin(), c.end(), [](const Int& v) { return v < 0; });
    if (one_sign) {
        out.completeness = Completeness::Certified;
        out.certificate = "all terms have the same sign";
    } else if (eq.same_base()) {
        // In a minimal vanishing sum of terms c_i l^{f_i} with min f = 0, two
        // consecutive distinct exponents differ by at most G (else the lower
        // part would vanish on its own), so the block height is <= n*G.
        Int total = 0;
        for (const auto& v : c) total += abs(v);
        std::uint64_t gap = floor_log(eq.bases.front(), total);
        if (eq.arity() * gap <= bound) {
            out.completeness = Completeness::Certified;
            out.certificate = "exponent gaps bounded by " + std::to_string(gap);
        }
    } else if (eq.arity() == 1) {
        auto sol = two_term_solution(eq);
        if (!sol || ((*sol)[0] <= bound && (*sol)[1] <= bound)) {
            out.completeness = Completeness::Certified;
            out.certificate = "unique solution from valuations";
        }
    }
    return out;
}

AxiomInstance MannAxiom::instance() const {
    AxiomInstance a;
    a.tag = "Mann";
    a.params = eq.to_json();
    a.params.erase("names");
    a.formula = sentence;
    a.completeness = to_string(completeness);
    return a;
}

MannAxiom mann_axiom(const std::vector<Int>& coeffs, const Int& rhs, const std::vector<Int>& bases,
                     std::uint64_t bound) {
    MannAxiom m;
    m.eq.coeffs = coeffs;
    m.eq.rhs = rhs;
    m.eq.bases = bases;
    m.eq.validate();
    const std::size_t n = coeffs.size();
    std::vector<std::string> vars;
    std::vector<Term> x;
    for (std::size_t i = 0; i <= n; ++i) {
        vars.push_back("x" + std::to_string(i + 1));
        x.push_back(Term::var(vars.back()));
    }
    std::vector<Formula> theta;
    for (std::size_t i = 0; i <= n; ++i) theta.push_back(fm::U(bases[i], x[i]));
    Term lhs;
    for (std::size_t i = 0; i < n; ++i) lhs += coeffs[i] * x[i];
    theta.push_back(fm::eq(lhs, rhs * x[n]));
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        Term s;
        for (std::size_t j = 0; j < n; ++j) {
            if (mask >> j & 1) s += coeffs[j] * x[j];
        }
        theta.push_back(fm::ne(s, Term(0)));
    }
    m.theta = fm::conj(std::move(theta));
    m.completeness = family_structure(m.eq, bound).completeness;
    const bool same = m.eq.same_base();
    m.solutions = same ? primitive_solutions(m.eq, bound) : nondegenerate_solutions(m.eq, bound);
    for (const auto& e : m.solutions) {
        std::vector<Formula> parts;
        if (same) {
            Int t = ipow(bases[n], e[n]);
            for (std::size_t j = 0; j < n; ++j) parts.push_back(fm::eq(t * x[j], ipow(bases[j], e[j]) * x[n]));
        } else {
            for (std::size_t j = 0; j <= n; ++j) parts.push_back(fm::eq(x[j], ipow(bases[j], e[j])));
        }
        m.disjuncts.push_back(fm::conj(std::move(parts)));
    }
    m.sentence = fm::forall(vars, fm::implies(m.theta, fm::disj(m.disjuncts)));
    return m;
}

}  // namespace powerarith
