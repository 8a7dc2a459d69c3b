#include "powerarith/linear.hpp"

#include <set>
#include <string>

namespace powerarith {

namespace {

// Scales so the first nonzero coefficient has magnitude 1.
void normalize(LinearRow& r) {
    for (const auto& c : r.coeffs) {
        if (c == 0) continue;
        Rat s = abs(c);
        for (auto& x : r.coeffs) x /= s;
        r.constant /= s;
        return;
    }
}

std::string key(const LinearRow& r) {
    std::string k = r.strict ? ">" : ">=";
    for (const auto& c : r.coeffs) k += c.get_str() + ",";
    return k + r.constant.get_str();
}

bool trivially_false(const LinearRow& r) {
    for (const auto& c : r.coeffs) {
        if (c != 0) return false;
    }
    return r.strict ? r.constant <= 0 : r.constant < 0;
}

}  // namespace

bool fm_feasible(std::vector<LinearRow> rows, std::size_t nvars, const FmLimits& limits) {
    for (std::size_t v = 0; v < nvars; ++v) {
        std::vector<LinearRow> pos, neg, next;
        for (auto& r : rows) {
            if (r.coeffs[v] > 0) {
                pos.push_back(std::move(r));
            } else if (r.coeffs[v] < 0) {
                neg.push_back(std::move(r));
            } else {
                next.push_back(std::move(r));
            }
        }
        if (next.size() + pos.size() * neg.size() > limits.max_rows) return true;
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                Rat a = p.coeffs[v];
                Rat b = -n.coeffs[v];
                LinearRow c;
                c.coeffs.resize(nvars);
                for (std::size_t i = 0; i < nvars; ++i) c.coeffs[i] = b * p.coeffs[i] + a * n.coeffs[i];
                c.coeffs[v] = 0;
                c.constant = b * p.constant + a * n.constant;
                c.strict = p.strict || n.strict;
                next.push_back(std::move(c));
            }
        }
        std::set<std::string> seen;
        rows.clear();
        for (auto& r : next) {
            normalize(r);
            if (trivially_false(r)) return false;
            if (seen.insert(key(r)).second) rows.push_back(std::move(r));
        }
    }
    for (const auto& r : rows) {
        if (trivially_false(r)) return false;
    }
    return true;
}

}  // namespace powerarith
