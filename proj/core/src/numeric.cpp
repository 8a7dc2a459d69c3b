#include "powerarith/numeric.hpp"

#include <mpfr.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

namespace powerarith {

unsigned precision_cap() {
    static const unsigned cap = [] {
        if (const char* env = std::getenv("POWERARITH_PRECISION_CAP")) {
            char* end = nullptr;
            unsigned long v = std::strtoul(env, &end, 10);
            if (end != env && v > 0) return static_cast<unsigned>(v);
        }
        return 4096u;
    }();
    return cap;
}

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Int ipow(const Int& base, std::uint64_t exp) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
    return out;
}

Rat rpow(const Rat& base, std::uint64_t exp) {
    Rat out(ipow(base.get_num(), exp), ipow(base.get_den(), exp));
    out.canonicalize();
    return out;
}

Int floor_of(const Rat& r) {
    Int out;
    mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

Int ceil_of(const Rat& r) {
    Int out;
    mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return out;
}

Int parse_int(std::string_view text) {
    std::string s(text);
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    Int v;
    if (s.empty() || v.set_str(s, 10) != 0) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    return v;
}

Rat parse_rat(std::string_view text) {
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        return make_rat(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }
    auto dot = text.find('.');
    if (dot == std::string_view::npos) return Rat(parse_int(text));
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string_view::npos) {
        throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    }
    std::string digits(whole);
    if (negative) digits.erase(0, 1);
    if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
    if (digits.empty()) digits = "0";
    digits += frac;
    Int num = parse_int(digits);
    Int den = ipow(Int(10), frac.size());
    if (negative) num = -num;
    return make_rat(num, den);
}

std::string to_string(const Int& v) { return v.get_str(10); }

std::string to_string(const Rat& v) { return v.get_str(10); }

long double approx_ln(const Int& v) {
    if (v <= 0) return -INFINITY;
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
    return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp) * std::log(2.0L);
}

long double approx_ln(const Rat& v) {
    Rat diff = v - 1;
    if (abs(diff) < Rat(1, 2)) return std::log1p(static_cast<long double>(diff.get_d()));
    return approx_ln(v.get_num()) - approx_ln(v.get_den());
}

namespace {

// Largest n with base^n <= value, for rationals base > 1 and value >= 1.
std::uint64_t floor_log_rat(const Rat& base, const Rat& value, Rat* power_out) {
    long double est = approx_ln(value) / approx_ln(base);
    std::uint64_t n = est > 2 ? static_cast<std::uint64_t>(est) - 1 : 0;
    Rat power = rpow(base, n);
    while (power > value && n > 0) {
        power /= base;
        --n;
    }
    while (power * base <= value) {
        power *= base;
        ++n;
    }
    if (power_out) *power_out = power;
    return n;
}

}  // namespace

namespace {

Rat mpfr_to_rat(const mpfr_t x) {
    Int m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    Rat r(m);
    if (e >= 0) mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return r;
}

// ln l / ln k with outward rounding at every step.
LogEnclosure mpfr_enclosure(const Int& k, const Int& l, unsigned prec) {
    mpfr_t lk_lo, lk_hi, ll_lo, ll_hi, lo, hi;
    mpfr_inits2(prec, lk_lo, lk_hi, ll_lo, ll_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_z(lk_lo, k.get_mpz_t(), MPFR_RNDN);  // exact: prec covers the bases we see
    mpfr_set_z(lk_hi, k.get_mpz_t(), MPFR_RNDN);
    mpfr_set_z(ll_lo, l.get_mpz_t(), MPFR_RNDN);
    mpfr_set_z(ll_hi, l.get_mpz_t(), MPFR_RNDN);
    if (mpz_sizeinbase(k.get_mpz_t(), 2) > prec || mpz_sizeinbase(l.get_mpz_t(), 2) > prec) {
        mpfr_clears(lk_lo, lk_hi, ll_lo, ll_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
        throw PrecisionExhausted("base wider than the working precision");
    }
    mpfr_log(lk_lo, lk_lo, MPFR_RNDD);
    mpfr_log(lk_hi, lk_hi, MPFR_RNDU);
    mpfr_log(ll_lo, ll_lo, MPFR_RNDD);
    mpfr_log(ll_hi, ll_hi, MPFR_RNDU);
    mpfr_div(lo, ll_lo, lk_hi, MPFR_RNDD);
    mpfr_div(hi, ll_hi, lk_lo, MPFR_RNDU);
    LogEnclosure e{mpfr_to_rat(lo), mpfr_to_rat(hi), k, l};
    mpfr_clears(lk_lo, lk_hi, ll_lo, ll_hi, lo, hi, static_cast<mpfr_ptr>(nullptr));
    return e;
}

}  // namespace

std::uint64_t floor_log(const Int& base, const Int& value) {
    if (base < 2) throw std::invalid_argument("floor_log: base must be >= 2");
    if (value < 1) throw std::invalid_argument("floor_log: value must be >= 1");
    return floor_log_rat(Rat(base), Rat(value), nullptr);
}

std::optional<Dependence> dependence(const Int& k, const Int& l) {
    if (k < 2 || l < 2) throw std::invalid_argument("bases must be >= 2");
    Int a = k;
    Int b = l;
    while (a != b) {
        if (a > b) std::swap(a, b);
        if (!mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) return std::nullopt;
        b /= a;
    }
    Dependence dep;
    dep.root = a;
    dep.k_exp = floor_log(a, k);
    dep.l_exp = floor_log(a, l);
    std::uint64_t g = std::gcd(dep.k_exp, dep.l_exp);
    dep.m = dep.l_exp / g;
    dep.n = dep.k_exp / g;
    return dep;
}

bool mult_independent(const Int& k, const Int& l) { return !dependence(k, l).has_value(); }

LogExpansion::LogExpansion(Int k, Int l) : k_(std::move(k)), l_(std::move(l)), a_(k_), b_(l_) {
    if (k_ < 2 || l_ < 2) throw std::invalid_argument("log_k(l) needs k, l >= 2");
    extend();
}

bool LogExpansion::extend() {
    if (terminated_) return false;
    Rat power;
    std::uint64_t a = floor_log_rat(a_, b_, &power);
    quotients_.emplace_back(static_cast<unsigned long>(a));
    const Int& ai = quotients_.back();
    std::size_t i = quotients_.size() - 1;
    Int pm1 = i >= 1 ? p_[i - 1] : Int(1);
    Int pm2 = i >= 2 ? p_[i - 2] : (i == 1 ? Int(1) : Int(0));
    Int qm1 = i >= 1 ? q_[i - 1] : Int(0);
    Int qm2 = i >= 2 ? q_[i - 2] : (i == 1 ? Int(0) : Int(1));
    p_.push_back(ai * pm1 + pm2);
    q_.push_back(ai * qm1 + qm2);
    if (power == b_) {
        terminated_ = true;
        return true;
    }
    Rat next_a = b_ / power;
    b_ = a_;
    a_ = next_a;
    return true;
}

std::pair<Int, Int> LogExpansion::convergent(std::size_t i) const { return {p_.at(i), q_.at(i)}; }

LogEnclosure LogExpansion::enclosure() const {
    std::size_t i = quotients_.size() - 1;
    Rat c = make_rat(p_[i], q_[i]);
    if (terminated_) return {c, c, k_, l_};
    // x_i lies strictly inside (a_i, a_i + 1); the map x_i -> x is monotone.
    Int pm1 = i >= 1 ? p_[i - 1] : Int(1);
    Int qm1 = i >= 1 ? q_[i - 1] : Int(0);
    Rat other = make_rat(p_[i] + pm1, q_[i] + qm1);
    if (c < other) return {c, other, k_, l_};
    return {other, c, k_, l_};
}

LogEnclosure LogExpansion::refine(unsigned bits) {
    if (bits > precision_cap()) {
        throw PrecisionExhausted("requested " + std::to_string(bits) + " bits exceeds cap " +
                                 std::to_string(precision_cap()));
    }
    const Rat target = make_rat(1, ipow(Int(2), bits));
    LogEnclosure e = enclosure();
    while (!e.exact() && e.width() > target) {
        // Operands grow like 2^q_i; past this point directed-rounding logs
        // are far cheaper than more exact quotients.
        if (mpz_sizeinbase(a_.get_num_mpz_t(), 2) > (std::size_t{1} << 14)) {
            for (unsigned prec = bits + 32;; prec *= 2) {
                LogEnclosure m = mpfr_enclosure(k_, l_, prec);
                if (m.lo > e.lo) e.lo = m.lo;
                if (m.hi < e.hi) e.hi = m.hi;
                if (e.width() <= target) return e;
                if (prec > 4 * precision_cap()) throw PrecisionExhausted("log enclosure did not converge");
            }
        }
        extend();
        e = enclosure();
    }
    return e;
}

LogEnclosure log_enclosure(const Int& k, const Int& l, unsigned bits) {
    LogExpansion ex(k, l);
    return ex.refine(bits);
}

int compare_log(const Int& k, const Int& l, const Rat& r) {
    if (r <= 0) return 1;
    Int lhs = ipow(l, r.get_den().get_ui());
    Int rhs = ipow(k, r.get_num().get_ui());
    return cmp(lhs, rhs) > 0 ? 1 : (cmp(lhs, rhs) < 0 ? -1 : 0);
}

Int floor_t_log(std::uint64_t t, const Int& k, const Int& l) {
    if (t == 0) return 0;
    return Int(static_cast<unsigned long>(floor_log(k, ipow(l, t))));
}

int compare_frac(std::uint64_t t, const Int& k, const Int& l, const Rat& r) {
    Int n = floor_t_log(t, k, l);
    std::uint64_t q = r.get_den().get_ui();
    Int lhs = ipow(l, t * q);
    Int e = n * r.get_den() + r.get_num();
    if (e < 0) return 1;
    Int rhs = ipow(k, e.get_ui());
    int c = cmp(lhs, rhs);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

FracValue frac_part(const Int& t, const Int& k, const Int& l, unsigned bits) {
    if (t < 0) throw std::invalid_argument("frac_part: t must be >= 0");
    std::uint64_t tt = t.get_ui();
    FracValue out;
    out.integer_part = floor_t_log(tt, k, l);
    if (tt == 0 || ipow(k, out.integer_part.get_ui()) == ipow(l, tt)) {
        out.lo = out.hi = 0;
        return out;
    }
    unsigned extra = bits + static_cast<unsigned>(mpz_sizeinbase(t.get_mpz_t(), 2)) + 1;
    LogEnclosure e = log_enclosure(k, l, extra);
    if (e.exact()) {
        out.lo = out.hi = Rat(t) * e.lo - out.integer_part;
        return out;
    }
    out.lo = Rat(t) * e.lo - out.integer_part;
    out.hi = Rat(t) * e.hi - out.integer_part;
    if (out.lo < 0) out.lo = 0;
    if (out.hi > 1) out.hi = 1;
    return out;
}

std::optional<std::uint64_t> power_exponent(const Int& v, const Int& base) {
    if (v < 1) return std::nullopt;
    Int rest = v;
    std::uint64_t e = 0;
    while (rest != 1) {
        if (!mpz_divisible_p(rest.get_mpz_t(), base.get_mpz_t())) return std::nullopt;
        mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), base.get_mpz_t());
        ++e;
    }
    return e;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a / std::gcd(a, b) * b;
}

}  // namespace powerarith
