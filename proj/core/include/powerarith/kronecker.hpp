#pragma once

// Density of {k^s / l^t} in R_{>0} and of {fr(t log_k l)} in [0,1), made
// constructive: every returned witness is certified by exact integer
// comparisons; floating point only prunes the search.

#include "powerarith/numeric.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace powerarith {

/// (lo, hi) with exact endpoints; a missing endpoint means unbounded.
struct OpenInterval {
    std::optional<Rat> lo;
    std::optional<Rat> hi;

    OpenInterval() = default;
    OpenInterval(std::optional<Rat> l, std::optional<Rat> h) : lo(std::move(l)), hi(std::move(h)) {}

    bool empty() const { return lo && hi && *lo >= *hi; }
    bool contains(const Rat& r) const { return (!lo || *lo < r) && (!hi || r < *hi); }
};

struct RatioWitness {
    std::uint64_t s = 0;
    std::uint64_t t = 0;
};

/// lo < k^s / l^t < hi, by cross-multiplication.
bool ratio_in(const Int& k, const Int& l, const RatioWitness& w, const OpenInterval& iv);

struct SearchLimits {
    std::uint64_t max_t = 50000000;
};

/// Smallest t >= 0 with fr(t log_k l) in (lo, hi), 0 <= lo < hi <= 1.
/// `minimal` skips the floating-point filter and certifies every t. Throws
/// PrecisionExhausted when the limit is hit.
std::uint64_t find_frac_hit(const Int& k, const Int& l, const Rat& lo, const Rat& hi, bool minimal = false,
                            const SearchLimits& limits = {});

/// k^s / l^t in the interval with s >= min_s, t >= min_t; t is the smallest
/// such t and s the smallest matching s. Requires k, l independent when the
/// interval is bounded on both sides.
RatioWitness find_ratio_in(const Int& k, const Int& l, const OpenInterval& iv, std::uint64_t min_s = 0,
                           std::uint64_t min_t = 0, const SearchLimits& limits = {});

/// Outer enclosure of fr(J + w log_k l) for J = (lo, hi) inside (0,1), as one
/// or two intervals. A second piece arises when the image wraps past 1; it
/// starts at 0 (inclusive). Slack is at most w * 2^-bits.
std::vector<OpenInterval> shifted_image(const Rat& lo, const Rat& hi, std::uint64_t w, const Int& k, const Int& l,
                                        unsigned bits = 64);

/// Row a*x + b*y > 0 over x in k^N, y in l^N.
struct TwoVarRow {
    Rat a;
    Rat b;
};

/// Feasible set of x/y for positive reals, or nullopt when empty.
std::optional<OpenInterval> ratio_interval(const std::vector<TwoVarRow>& rows);

/// Infinite stream of witnesses (x = k^s, y = l^t) for a feasible system,
/// with strictly increasing t.
class TwoVarStream {
public:
    TwoVarStream(Int k, Int l, OpenInterval iv) : k_(std::move(k)), l_(std::move(l)), iv_(std::move(iv)) {}
    RatioWitness next();

private:
    Int k_;
    Int l_;
    OpenInterval iv_;
    std::uint64_t min_t_ = 0;
};

struct TwoVarResult {
    bool sat = false;
    OpenInterval ratio;
    RatioWitness first;
};

/// Complete for two variables: Unsat iff the real ratio interval is empty.
TwoVarResult solve_two_var(const Int& k, const Int& l, const std::vector<TwoVarRow>& rows);

}  // namespace powerarith
