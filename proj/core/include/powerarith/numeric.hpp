#pragma once

// Exact integers and rationals, certified enclosures of log_k(l), and
// multiplicative-independence testing.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace powerarith {

using Int = mpz_class;
using Rat = mpq_class;

/// Raised when a numeric decision would need more precision than the cap
/// allows. Never used to signal a wrong answer.
class PrecisionExhausted : public std::runtime_error {
public:
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Bits cap for enclosure refinement. Reads POWERARITH_PRECISION_CAP once;
/// defaults to 4096.
unsigned precision_cap();

Rat make_rat(const Int& num, const Int& den);
Int ipow(const Int& base, std::uint64_t exp);
Rat rpow(const Rat& base, std::uint64_t exp);
Int floor_of(const Rat& r);
Int ceil_of(const Rat& r);

/// Accepts "7", "-3/4", "0.125", "-2.5".
Rat parse_rat(std::string_view text);
Int parse_int(std::string_view text);

std::string to_string(const Int& v);
std::string to_string(const Rat& v);

/// Natural logarithm as a long double, for search heuristics only.
long double approx_ln(const Int& v);
long double approx_ln(const Rat& v);

/// Largest n >= 0 with base^n <= value (value >= 1, base >= 2), exact.
std::uint64_t floor_log(const Int& base, const Int& value);

/// Certificate k^m == l^n with m, n >= 1 and the common root r (k = r^a,
/// l = r^b).
struct Dependence {
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    Int root;
    std::uint64_t k_exp = 0;
    std::uint64_t l_exp = 0;
};

/// Decided exactly by a Euclid-style descent on k, l (r^a, r^b -> r^{|a-b|}).
std::optional<Dependence> dependence(const Int& k, const Int& l);
bool mult_independent(const Int& k, const Int& l);

/// lo < log_k(l) < hi, or lo == hi when the logarithm is rational.
struct LogEnclosure {
    Rat lo;
    Rat hi;
    Int base_k;
    Int arg_l;

    bool exact() const { return lo == hi; }
    Rat width() const { return hi - lo; }
    bool contains(const Rat& r) const { return exact() ? r == lo : (lo < r && r < hi); }
};

/// Continued-fraction expansion of log_k(l) computed with exact rational
/// arithmetic. Each partial quotient a_i is the exact floor of the current
/// complete quotient log_A(B), certified by comparing A^a_i <= B < A^{a_i+1}.
class LogExpansion {
public:
    LogExpansion(Int k, Int l);

    const Int& base() const { return k_; }
    const Int& arg() const { return l_; }

    /// Computes one more partial quotient. Returns false once the expansion
    /// has terminated (rational logarithm).
    bool extend();
    bool terminated() const { return terminated_; }
    std::size_t depth() const { return quotients_.size(); }

    const std::vector<Int>& partial_quotients() const { return quotients_; }
    /// Convergent p_i / q_i for i < depth().
    std::pair<Int, Int> convergent(std::size_t i) const;

    /// Tightest enclosure available at the current depth.
    LogEnclosure enclosure() const;
    /// Enclosure of width <= 2^-bits. Extends the expansion while its
    /// operands stay small, then tightens with outward-rounded MPFR logs.
    LogEnclosure refine(unsigned bits);

private:
    Int k_;
    Int l_;
    Rat a_;  // current complete quotient is log_a_(b_)
    Rat b_;
    bool terminated_ = false;
    std::vector<Int> quotients_;
    std::vector<Int> p_;
    std::vector<Int> q_;
};

/// Enclosure of log_k(l) of width <= 2^-bits.
LogEnclosure log_enclosure(const Int& k, const Int& l, unsigned bits);

/// Sign of log_k(l) - r, decided by comparing k^{num} with l^{den}.
int compare_log(const Int& k, const Int& l, const Rat& r);

/// Integer part and enclosure of fr(t * log_k(l)).
struct FracValue {
    Int integer_part;
    Rat lo;
    Rat hi;

    bool exact() const { return lo == hi; }
};

FracValue frac_part(const Int& t, const Int& k, const Int& l, unsigned bits);

/// floor(t * log_k(l)) = max n with k^n <= l^t, exact.
Int floor_t_log(std::uint64_t t, const Int& k, const Int& l);

/// Sign of fr(t*log_k(l)) - r for r in [0,1), decided exactly as
/// l^{t q} versus k^{n q + p} where n = floor(t log_k l) and r = p/q.
int compare_frac(std::uint64_t t, const Int& k, const Int& l, const Rat& r);

/// e with base^e == v, if v is a power of base (base >= 2).
std::optional<std::uint64_t> power_exponent(const Int& v, const Int& base);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

}  // namespace powerarith
