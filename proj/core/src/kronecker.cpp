#include "powerarith/kronecker.hpp"

#include <cmath>

namespace powerarith {

namespace {

// Smallest s with base^s > target.
std::uint64_t least_power_above(const Int& base, const Rat& target) {
    Int f = floor_of(target);
    if (f < 1) return 0;
    return floor_log(base, f) + 1;
}

long double ld(const Rat& r) { return static_cast<long double>(r.get_d()); }

// Sign of fr(t * log_k l) - r for 0 <= r <= 1, certified either by exact
// powers (small instances) or by a refined enclosure of log_k l.
class FracComparator {
public:
    FracComparator(const Int& k, const Int& l) : k_(k), l_(l), ex_(k, l) {}

    int compare(std::uint64_t t, const Rat& r) {
        if (t == 0) return sgn(Rat(0) - r);
        if (r >= 1) return -1;
        // compare_frac raises l to t * den(r).
        double size = static_cast<double>(t) * r.get_den().get_d() * std::log2(l_.get_d());
        if (size < (1 << 20)) return compare_frac(t, k_, l_, r);
        unsigned extra = static_cast<unsigned>(std::log2(static_cast<double>(t))) + 2;
        const Rat tt{Int(static_cast<unsigned long>(t))};
        for (unsigned bits = 64;; bits *= 2) {
            LogEnclosure e = ex_.refine(std::min(bits + extra, precision_cap()));
            Rat lo = tt * e.lo;
            Rat hi = tt * e.hi;
            // The integer part is certified once both ends share it; the exact
            // floor costs a power of size t, so it is the last resort.
            Int n = floor_of(lo);
            if (floor_of(hi) != n && bits + extra < precision_cap()) continue;
            if (floor_of(hi) != n) n = floor_t_log(t, k_, l_);
            lo -= n;
            hi -= n;
            if (hi < r) return -1;
            if (lo > r) return 1;
            if (e.exact()) return cmp(lo, r) < 0 ? -1 : (lo == r ? 0 : 1);
            if (bits + extra >= precision_cap()) {
                throw PrecisionExhausted("fractional-part comparison needs more than the precision cap");
            }
        }
    }

private:
    Int k_;
    Int l_;
    LogExpansion ex_;
};

}  // namespace

bool ratio_in(const Int& k, const Int& l, const RatioWitness& w, const OpenInterval& iv) {
    Int ks = ipow(k, w.s);
    Int lt = ipow(l, w.t);
    if (iv.lo && !(iv.lo->get_num() * lt < iv.lo->get_den() * ks)) return false;
    if (iv.hi && !(iv.hi->get_den() * ks < iv.hi->get_num() * lt)) return false;
    return true;
}

std::uint64_t find_frac_hit(const Int& k, const Int& l, const Rat& lo, const Rat& hi, bool minimal,
                            const SearchLimits& limits) {
    if (!(lo >= 0 && lo < hi && hi <= 1)) throw std::invalid_argument("find_frac_hit: need 0 <= lo < hi <= 1");
    if (!mult_independent(k, l)) throw std::invalid_argument("find_frac_hit: bases must be independent");
    FracComparator cmpf(k, l);
    LogEnclosure e = log_enclosure(k, l, 96);
    const long double lambda = ld((e.lo + e.hi) / 2);
    const long double flo = ld(lo);
    const long double fhi = ld(hi);
    for (std::uint64_t t = 0; t <= limits.max_t; ++t) {
        if (!minimal) {
            long double x = static_cast<long double>(t) * lambda;
            long double f = x - std::floor(x);
            long double m = 1e-9L * (x + 1);
            bool near = (f > flo - m && f < fhi + m) || f < m || f > 1 - m;
            if (!near) continue;
        }
        if (cmpf.compare(t, lo) > 0 && cmpf.compare(t, hi) < 0) return t;
    }
    throw PrecisionExhausted("find_frac_hit: search limit reached");
}

RatioWitness find_ratio_in(const Int& k, const Int& l, const OpenInterval& iv, std::uint64_t min_s,
                           std::uint64_t min_t, const SearchLimits& limits) {
    if (iv.empty()) throw std::invalid_argument("find_ratio_in: empty interval");
    bool has_lo = iv.lo && *iv.lo > 0;
    if (!iv.hi) {
        RatioWitness w{min_s, min_t};
        if (has_lo) w.s = std::max(min_s, least_power_above(k, *iv.lo * ipow(l, min_t)));
        return w;
    }
    if (!has_lo) {
        RatioWitness w{min_s, min_t};
        w.t = std::max(min_t, least_power_above(l, Rat(ipow(k, min_s)) / *iv.hi));
        return w;
    }
    if (!mult_independent(k, l)) throw std::invalid_argument("find_ratio_in: bases must be independent");
    const long double lnk = approx_ln(k);
    const long double lnl = approx_ln(l);
    const long double lna = approx_ln(*iv.lo);
    const long double lnb = approx_ln(*iv.hi);
    for (std::uint64_t t = min_t; t <= min_t + limits.max_t; ++t) {
        long double x = static_cast<long double>(t) * lnl;
        long double m = 1e-9L * (std::fabs(x) + std::fabs(lna) + 1);
        long double sf = (x + lna) / lnk;
        std::uint64_t s0 = sf > 1 ? static_cast<std::uint64_t>(sf) - 1 : 0;
        s0 = std::max(s0, min_s);
        for (std::uint64_t s = s0; s <= s0 + 2; ++s) {
            long double v = static_cast<long double>(s) * lnk - x;
            if (v <= lna - m || v >= lnb + m) continue;
            RatioWitness w{s, t};
            if (ratio_in(k, l, w, iv)) return w;
        }
    }
    throw PrecisionExhausted("find_ratio_in: search limit reached");
}

std::vector<OpenInterval> shifted_image(const Rat& lo, const Rat& hi, std::uint64_t w, const Int& k, const Int& l,
                                        unsigned bits) {
    if (!(lo >= 0 && lo < hi && hi <= 1)) throw std::invalid_argument("shifted_image: need 0 <= lo < hi <= 1");
    if (w == 0) return {OpenInterval(lo, hi)};
    unsigned extra = static_cast<unsigned>(std::log2(static_cast<double>(w))) + 2;
    LogEnclosure e = log_enclosure(k, l, bits + extra);
    Rat ww{Int(static_cast<unsigned long>(w))};
    Rat a = lo + ww * e.lo;
    Rat b = hi + ww * e.hi;
    Int n = floor_of(a);
    a -= n;
    b -= n;
    if (b - a >= 1) return {OpenInterval(Rat(0), Rat(1))};
    if (b <= 1) return {OpenInterval(a, b)};
    return {OpenInterval(a, Rat(1)), OpenInterval(Rat(0), b - 1)};
}

std::optional<OpenInterval> ratio_interval(const std::vector<TwoVarRow>& rows) {
    Rat lo = 0;
    std::optional<Rat> hi;
    for (const auto& r : rows) {
        if (r.a == 0) {
            if (r.b <= 0) return std::nullopt;
            continue;
        }
        Rat bound = -r.b / r.a;
        if (r.a > 0) {
            if (bound > lo) lo = bound;
        } else if (!hi || bound < *hi) {
            hi = bound;
        }
    }
    if (hi && *hi <= lo) return std::nullopt;
    return OpenInterval(lo, hi);
}

RatioWitness TwoVarStream::next() {
    RatioWitness w = find_ratio_in(k_, l_, iv_, 0, min_t_);
    min_t_ = w.t + 1;
    return w;
}

TwoVarResult solve_two_var(const Int& k, const Int& l, const std::vector<TwoVarRow>& rows) {
    TwoVarResult out;
    auto iv = ratio_interval(rows);
    if (!iv) return out;
    out.sat = true;
    out.ratio = *iv;
    out.first = find_ratio_in(k, l, *iv);
    return out;
}

}  // namespace powerarith
