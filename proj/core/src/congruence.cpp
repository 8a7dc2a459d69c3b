#include "powerarith/congruence.hpp"

#include <algorithm>
#include <numeric>

namespace powerarith {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t ipow_u64(std::uint64_t b, unsigned e) {
    std::uint64_t out = 1;
    while (e--) out *= b;
    return out;
}

std::uint64_t to_u64(const Int& v, const char* what) {
    if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 62) {
        throw std::invalid_argument(std::string(what) + " out of range");
    }
    return static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
}

std::uint64_t base_mod(const Int& base, std::uint64_t n) {
    Int r;
    mpz_fdiv_r_ui(r.get_mpz_t(), base.get_mpz_t(), n);
    return r.get_ui();
}

// Cycle lengths beyond this are treated as out of desk scale.
constexpr std::uint64_t kMaxCycle = std::uint64_t{1} << 27;

}  // namespace

std::uint64_t carmichael_lambda(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("carmichael_lambda: n must be >= 1");
    std::uint64_t out = 1;
    std::uint64_t rest = n;
    for (std::uint64_t p = 2; p * p <= rest; ++p) {
        if (rest % p != 0) continue;
        unsigned v = 0;
        while (rest % p == 0) {
            rest /= p;
            ++v;
        }
        std::uint64_t lam = (p == 2 && v >= 3) ? ipow_u64(2, v - 2) : ipow_u64(p, v - 1) * (p - 1);
        out = std::lcm(out, lam);
    }
    if (rest > 1) out = std::lcm(out, rest - 1);
    return out;
}

std::uint64_t PowerResidueCycle::residue_at(std::uint64_t e) const {
    if (e < preperiod) return residues[e];
    return residues[preperiod + (e - preperiod) % period];
}

PowerResidueCycle power_residues(const Int& base, std::uint64_t modulus) {
    if (base < 2) throw std::invalid_argument("power_residues: base must be >= 2");
    if (modulus == 0) throw std::invalid_argument("power_residues: modulus must be >= 1");
    PowerResidueCycle c;
    c.base = base;
    c.modulus = modulus;
    // modulus = d1 * d2 with d1 built from primes of the base, d2 coprime.
    std::uint64_t d1 = 1;
    std::uint64_t d2 = modulus;
    for (std::uint64_t g = std::gcd(base_mod(base, d2), d2); g > 1; g = std::gcd(g, d2)) {
        while (d2 % g == 0) {
            d2 /= g;
            d1 *= g;
        }
    }
    std::uint64_t b1 = base_mod(base, d1);
    std::uint64_t pre = 0;
    for (std::uint64_t v = 1 % d1; v != 0; v = mulmod(v, b1, d1)) ++pre;
    std::uint64_t period = 1;
    if (d2 > 1) {
        std::uint64_t b2 = base_mod(base, d2);
        for (std::uint64_t v = b2; v != 1; v = mulmod(v, b2, d2)) {
            if (++period > kMaxCycle) throw std::length_error("power_residues: cycle too long");
        }
    }
    c.preperiod = pre;
    c.period = period;
    std::uint64_t b = base_mod(base, modulus);
    c.residues.reserve(pre + period);
    std::uint64_t v = 1 % modulus;
    for (std::uint64_t e = 0; e < pre + period; ++e) {
        c.residues.push_back(v);
        v = mulmod(v, b, modulus);
    }
    return c;
}

std::vector<std::uint64_t> excluded_residues(const Int& base, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("excluded_residues: n must be >= 1");
    if (std::gcd(base_mod(base, n), n) != 1) {
        throw std::invalid_argument("excluded_residues: base and modulus must be coprime");
    }
    std::uint64_t lam = carmichael_lambda(n);
    std::vector<char> hit(n, 0);
    std::uint64_t b = base_mod(base, n);
    std::uint64_t v = 1 % n;
    for (std::uint64_t m = 1; m <= lam; ++m) {
        v = mulmod(v, b, n);
        hit[v] = 1;
    }
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 1; k <= n; ++k) {
        if (!hit[k % n]) out.push_back(k);
    }
    return out;
}

bool CongruenceConstraint::satisfied_by(const Int& value) const {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t());
    return r == residue;
}

CongruenceConstraint make_congruence(std::string var, const Int& modulus, const Int& residue) {
    if (modulus < 1) throw std::invalid_argument("congruence modulus must be >= 1");
    CongruenceConstraint c;
    c.var = std::move(var);
    c.modulus = modulus;
    mpz_fdiv_r(c.residue.get_mpz_t(), residue.get_mpz_t(), modulus.get_mpz_t());
    return c;
}

namespace {

bool compatible(const CongruenceConstraint& a, const CongruenceConstraint& b) {
    Int g = gcd(a.modulus, b.modulus);
    Int diff = b.residue - a.residue;
    return mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t()) != 0;
}

}  // namespace

CrtResult crt_combine(const CongruenceSystem& system) {
    CrtResult out;
    out.combined = make_congruence(system.empty() ? "" : system.front().var, 1, 0);
    for (std::size_t i = 0; i < system.size(); ++i) {
        const CongruenceConstraint c = make_congruence(system[i].var, system[i].modulus, system[i].residue);
        const Int& m1 = out.combined.modulus;
        const Int& r1 = out.combined.residue;
        Int g = gcd(m1, c.modulus);
        Int diff = c.residue - r1;
        if (!mpz_divisible_p(diff.get_mpz_t(), g.get_mpz_t())) {
            // Pairwise compatibility implies joint compatibility, so some
            // earlier constraint clashes with this one on its own.
            out.satisfiable = false;
            out.conflict_b = i;
            for (std::size_t j = 0; j < i; ++j) {
                if (!compatible(make_congruence("", system[j].modulus, system[j].residue), c)) {
                    out.conflict_a = j;
                    break;
                }
            }
            return out;
        }
        Int m1g = m1 / g;
        Int m2g = c.modulus / g;
        Int inv = 0;
        if (m2g > 1) mpz_invert(inv.get_mpz_t(), m1g.get_mpz_t(), m2g.get_mpz_t());
        Int t = (diff / g) * inv;
        mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), m2g.get_mpz_t());
        Int lcm = m1g * c.modulus;
        out.combined = make_congruence(out.combined.var, lcm, r1 + m1 * t);
    }
    return out;
}

bool ExponentSet::contains(std::uint64_t e) const {
    if (e < threshold) return std::binary_search(sporadic.begin(), sporadic.end(), e);
    std::uint64_t c = threshold + (e - threshold) % period;
    return std::binary_search(classes.begin(), classes.end(), c);
}

std::vector<std::uint64_t> ExponentSet::first(std::size_t count) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t e : sporadic) {
        if (out.size() == count) return out;
        out.push_back(e);
    }
    if (classes.empty()) return out;
    for (std::uint64_t round = 0; out.size() < count; ++round) {
        for (std::uint64_t c : classes) {
            if (out.size() == count) break;
            out.push_back(c + round * period);
        }
    }
    return out;
}

std::optional<ExponentProgression> ExponentSet::progression() const {
    if (classes.empty()) return std::nullopt;
    return ExponentProgression{classes.front(), period, threshold};
}

ExponentSet exponents_satisfying(const Int& base, const CongruenceSystem& delta) {
    ExponentSet out;
    CrtResult crt = crt_combine(delta);
    if (!crt.satisfiable) return out;
    std::uint64_t d = to_u64(crt.combined.modulus, "combined modulus");
    std::uint64_t r = to_u64(crt.combined.residue, "residue");
    PowerResidueCycle cyc = power_residues(base, d);
    out.threshold = cyc.preperiod;
    out.period = cyc.period;
    for (std::uint64_t e = 0; e < cyc.residues.size(); ++e) {
        if (cyc.residues[e] != r) continue;
        (e < cyc.preperiod ? out.sporadic : out.classes).push_back(e);
    }
    return out;
}

AxiomInstance car1_axiom(const Int& base, std::uint64_t m) {
    if (base < 2) throw std::invalid_argument("car1: base must be >= 2");
    const Term x = Term::var("x");
    Int lm = ipow(base, m);
    std::vector<Formula> parts;
    for (std::uint64_t j = 0; j < m; ++j) parts.push_back(fm::eq(x, ipow(base, j)));
    std::vector<Formula> excluded;
    for (Int k = 1; k < lm; ++k) excluded.push_back(fm::neg(fm::D(lm, x - Term(k))));
    parts.push_back(fm::conj(std::move(excluded)));
    if (m == 0) parts = {fm::truth()};
    AxiomInstance a;
    a.tag = "car1";
    a.params = {{"l", int_to_json(base)}, {"m", m}};
    a.formula = fm::forall("x", fm::implies(fm::U(base, x), fm::disj(std::move(parts))));
    return a;
}

AxiomInstance car2_axiom(const Int& base, std::uint64_t n) {
    if (base < 2) throw std::invalid_argument("car2: base must be >= 2");
    const Term x = Term::var("x");
    std::vector<Formula> parts;
    for (std::uint64_t k : excluded_residues(base, n)) {
        parts.push_back(fm::neg(fm::D(Int(static_cast<unsigned long>(n)), x - Term(Int(static_cast<unsigned long>(k))))));
    }
    AxiomInstance a;
    a.tag = "car2";
    a.params = {{"l", int_to_json(base)}, {"n", n}};
    a.formula = fm::forall("x", fm::implies(fm::U(base, x), fm::conj(std::move(parts))));
    return a;
}

}  // namespace powerarith
