#include "powerarith/inequality.hpp"

#include "powerarith/kronecker.hpp"
#include "powerarith/linear.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace powerarith {

void LinearIneqSystem::validate() const {
    std::set<std::string> ids;
    for (const auto& v : vars) {
        if (v.base < 2) throw std::invalid_argument("variable '" + v.id + "' has base < 2");
        if (!ids.insert(v.id).second) throw std::invalid_argument("duplicate variable '" + v.id + "'");
    }
    for (const auto& r : rows) {
        if (r.size() != vars.size()) throw std::invalid_argument("row length differs from the number of variables");
    }
    if (bases().size() > 2) throw std::invalid_argument("at most two distinct bases are supported");
}

std::size_t LinearIneqSystem::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].id == id) return i;
    }
    throw std::invalid_argument("unknown variable '" + id + "'");
}

std::vector<Int> LinearIneqSystem::bases() const {
    std::vector<Int> out;
    for (const auto& v : vars) {
        if (std::find(out.begin(), out.end(), v.base) == out.end()) out.push_back(v.base);
    }
    return out;
}

bool LinearIneqSystem::holds(const std::vector<std::uint64_t>& exponents) const {
    if (exponents.size() != vars.size()) return false;
    std::vector<Int> val;
    for (std::size_t i = 0; i < vars.size(); ++i) val.push_back(ipow(vars[i].base, exponents[i]));
    for (const auto& r : rows) {
        Rat s = 0;
        for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * val[i];
        if (s <= 0) return false;
    }
    return true;
}

namespace {

nlohmann::json rat_to_json(const Rat& r) {
    if (r.get_den() == 1) return int_to_json(r.get_num());
    return to_string(r);
}

Rat rat_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rat(int_from_json(j));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw std::invalid_argument("expected a rational, got " + j.dump());
}

}  // namespace

nlohmann::json LinearIneqSystem::to_json() const {
    nlohmann::json j;
    j["vars"] = nlohmann::json::array();
    for (const auto& v : vars) j["vars"].push_back({{"id", v.id}, {"base", int_to_json(v.base)}});
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : r) row.push_back(rat_to_json(c));
        j["rows"].push_back(row);
    }
    return j;
}

LinearIneqSystem LinearIneqSystem::from_json(const nlohmann::json& j) {
    LinearIneqSystem sys;
    for (const auto& v : j.at("vars")) sys.vars.push_back({v.at("id").get<std::string>(), int_from_json(v.at("base"))});
    for (const auto& r : j.at("rows")) {
        std::vector<Rat> row;
        for (const auto& c : r) row.push_back(rat_from_json(c));
        sys.rows.push_back(std::move(row));
    }
    sys.validate();
    return sys;
}

CongruenceSystem congruences_from_json(const nlohmann::json& j) {
    CongruenceSystem out;
    if (j.is_object()) {
        if (!j.contains("congruences")) return out;
        return congruences_from_json(j.at("congruences"));
    }
    for (const auto& c : j) {
        out.push_back(make_congruence(c.at("id").get<std::string>(), int_from_json(c.at("mod")),
                                      int_from_json(c.at("residue"))));
    }
    return out;
}

nlohmann::json IneqWitness::to_json(const LinearIneqSystem& sys) const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < exponents.size() && i < sys.vars.size(); ++i) j[sys.vars[i].id] = exponents[i];
    return j;
}

const char* to_string(IneqResult::Kind k) {
    switch (k) {
        case IneqResult::Kind::Sat: return "sat";
        case IneqResult::Kind::Unsat: return "unsat";
        case IneqResult::Kind::Unknown: return "unknown";
    }
    return "?";
}

std::uint64_t default_nu_max(const LinearIneqSystem& sys) {
    // Each row scaled to integers; the sum of magnitudes bounds every ratio a
    // row can force between two of its variables.
    Rat total = 0;
    for (const auto& r : sys.rows) {
        Int den = 1;
        for (const auto& c : r) den = lcm(den, Int(c.get_den()));
        for (const auto& c : r) total += abs(c * den);
    }
    total *= static_cast<unsigned long>(std::max<std::size_t>(sys.rows.size(), 1));
    Int smallest = 0;
    for (const auto& v : sys.vars) {
        if (smallest == 0 || v.base < smallest) smallest = v.base;
    }
    if (smallest == 0 || total <= 1) return 8;
    Int c = ceil_of(total);
    std::uint64_t f = floor_log(smallest, c);
    if (ipow(smallest, f) < c) ++f;
    return f + 8;
}

bool real_feasible(const LinearIneqSystem& sys, const std::vector<ProfileLink>& profile) {
    const std::size_t n = sys.vars.size();
    std::vector<LinearRow> rows;
    for (const auto& r : sys.rows) rows.push_back({r, Rat(0), true});
    for (std::size_t i = 0; i < n; ++i) {
        LinearRow pos{std::vector<Rat>(n), Rat(0), true};
        pos.coeffs[i] = 1;
        rows.push_back(std::move(pos));
    }
    for (const auto& link : profile) {
        LinearRow r{std::vector<Rat>(n), Rat(0), false};
        r.coeffs[link.upper] = 1;
        r.coeffs[link.lower] = -Rat(ipow(sys.vars[link.lower].base, link.gap));
        if (link.merged) {
            LinearRow neg = r;
            for (auto& c : neg.coeffs) c = -c;
            rows.push_back(std::move(neg));
        }
        rows.push_back(std::move(r));
    }
    return fm_feasible(std::move(rows), n);
}

namespace {

using Exps = std::vector<std::uint64_t>;

struct BudgetExhausted {};

// Working system: column bases and rational rows.
struct Sys {
    std::vector<Int> base;
    std::vector<std::vector<Rat>> rows;
    std::size_t n() const { return base.size(); }
};

LinearIneqSystem to_public(const Sys& s) {
    LinearIneqSystem out;
    for (std::size_t i = 0; i < s.n(); ++i) out.vars.push_back({"z" + std::to_string(i), s.base[i]});
    out.rows = s.rows;
    return out;
}

// Columns `keep` of the rows `which`.
Sys restrict(const Sys& s, const std::vector<std::size_t>& keep, const std::vector<std::size_t>& which) {
    Sys out;
    for (auto i : keep) out.base.push_back(s.base[i]);
    for (auto r : which) {
        std::vector<Rat> row;
        for (auto i : keep) row.push_back(s.rows[r][i]);
        out.rows.push_back(std::move(row));
    }
    return out;
}

// Smallest s with base^s > target.
std::uint64_t least_power_above(const Int& base, const Rat& target) {
    Int f = floor_of(target);
    if (f < 1) return 0;
    return floor_log(base, f) + 1;
}

class Searcher {
public:
    Searcher(std::uint64_t steps, std::uint64_t nu) : steps_(steps), nu_(nu) {}

    std::optional<Exps> find(const Sys& s) {
        const std::size_t n = s.n();
        if (s.rows.empty()) return Exps(n, 0);

        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < n; ++i) {
            bool used = std::any_of(s.rows.begin(), s.rows.end(), [i](const auto& r) { return r[i] != 0; });
            if (used) active.push_back(i);
        }
        if (active.empty()) return std::nullopt;  // some row reads 0 > 0
        if (active.size() < n) {
            std::vector<std::size_t> all(s.rows.size());
            std::iota(all.begin(), all.end(), 0);
            auto sub = find(restrict(s, active, all));
            if (!sub) return std::nullopt;
            Exps e(n, 0);
            for (std::size_t i = 0; i < active.size(); ++i) e[active[i]] = (*sub)[i];
            return e;
        }

        if (n == 1) {
            for (const auto& r : s.rows) {
                if (r[0] <= 0) return std::nullopt;
            }
            return Exps{0};
        }
        if (n == 2 && s.base[0] != s.base[1]) {
            std::vector<TwoVarRow> rows;
            for (const auto& r : s.rows) rows.push_back({r[0], r[1]});
            try {
                auto res = solve_two_var(s.base[0], s.base[1], rows);
                if (!res.sat) return std::nullopt;
                return Exps{res.first.s, res.first.t};
            } catch (const PrecisionExhausted&) {
                return std::nullopt;
            }
        }
        if (!real_feasible(to_public(s))) return std::nullopt;
        if (auto e = box(s)) return e;
        for (std::size_t p = 0; p < n; ++p) {
            if (auto e = pivot(s, p)) return e;
        }
        return merged(s);
    }

private:
    std::uint64_t steps_;
    std::uint64_t nu_;

    void tick(std::uint64_t k = 1) {
        if (steps_ < k) throw BudgetExhausted{};
        steps_ -= k;
    }

    bool check(const Sys& s, const Exps& e) {
        tick(s.rows.size());
        std::vector<Int> val;
        for (std::size_t i = 0; i < s.n(); ++i) val.push_back(ipow(s.base[i], e[i]));
        for (const auto& r : s.rows) {
            Rat sum = 0;
            for (std::size_t i = 0; i < s.n(); ++i) {
                if (r[i] != 0) sum += r[i] * val[i];
            }
            if (sum <= 0) return false;
        }
        return true;
    }

    // Small exponents first: catches most satisfiable systems outright.
    std::optional<Exps> box(const Sys& s) {
        const std::size_t n = s.n();
        std::uint64_t b = 1;
        while (std::pow(static_cast<double>(b + 2), static_cast<double>(n)) <= 4096) ++b;
        Exps e(n, 0);
        for (;;) {
            if (check(s, e)) return e;
            std::size_t i = 0;
            while (i < n && e[i] == b) e[i++] = 0;
            if (i == n) return std::nullopt;
            ++e[i];
        }
    }

    static Rat dot(const std::vector<Rat>& row, const std::vector<std::size_t>& cols, const std::vector<Int>& val) {
        Rat sum = 0;
        for (std::size_t i = 0; i < cols.size(); ++i) sum += row[cols[i]] * val[i];
        return sum;
    }

    // Elimination step with variable p assumed largest.
    std::optional<Exps> pivot(const Sys& s, std::size_t p) {
        const std::size_t n = s.n();
        std::vector<std::size_t> lower, upper, psi;
        for (std::size_t r = 0; r < s.rows.size(); ++r) {
            const Rat& c = s.rows[r][p];
            (c > 0 ? lower : c < 0 ? upper : psi).push_back(r);
        }
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != p) rest.push_back(i);
        }

        if (upper.empty()) {
            auto sub = find(restrict(s, rest, psi));
            if (!sub) return std::nullopt;
            std::vector<Int> val;
            for (std::size_t i = 0; i < rest.size(); ++i) val.push_back(ipow(s.base[rest[i]], (*sub)[i]));
            Rat need = 0;
            for (auto r : lower) need = std::max(need, Rat(-dot(s.rows[r], rest, val) / s.rows[r][p]));
            Exps e(n, 0);
            for (std::size_t i = 0; i < rest.size(); ++i) e[rest[i]] = (*sub)[i];
            e[p] = least_power_above(s.base[p], need);
            if (check(s, e)) return e;
            return std::nullopt;
        }

        for (std::size_t q = 0; q < n; ++q) {
            if (s.base[q] == s.base[p]) continue;
            if (auto e = paired(s, p, q, lower, upper, psi)) return e;
        }
        return std::nullopt;
    }

    // p and q in one Archimedean class: b_i^- q + h_i^- < p < b_j^+ q + h_j^+.
    std::optional<Exps> paired(const Sys& s, std::size_t p, std::size_t q, const std::vector<std::size_t>& lower,
                               const std::vector<std::size_t>& upper, const std::vector<std::size_t>& psi) {
        const std::size_t n = s.n();
        std::vector<std::size_t> psi0;
        for (auto r : psi) {
            if (s.rows[r][q] < 0) return std::nullopt;
            if (s.rows[r][q] == 0) psi0.push_back(r);
        }
        std::optional<Rat> bm;
        for (auto r : lower) {
            Rat b = -s.rows[r][q] / s.rows[r][p];
            if (!bm || b > *bm) bm = b;
        }
        Rat bp = 0;
        bool first = true;
        for (auto r : upper) {
            Rat b = s.rows[r][q] / -s.rows[r][p];
            if (first || b < bp) bp = b;
            first = false;
        }
        if (bp <= 0 || (bm && *bm > bp)) return std::nullopt;

        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != p && i != q) rest.push_back(i);
        }
        auto assemble = [&](const Exps& sub, std::uint64_t sp, std::uint64_t tq) {
            Exps e(n, 0);
            for (std::size_t i = 0; i < rest.size(); ++i) e[rest[i]] = sub[i];
            e[p] = sp;
            e[q] = tq;
            return e;
        };
        auto magnitude = [&](const Exps& sub) {
            Int m = 1;
            for (std::size_t i = 0; i < rest.size(); ++i) m = std::max(m, ipow(s.base[rest[i]], sub[i]));
            return m;
        };

        if (!bm || *bm < bp) {
            auto sub = find(restrict(s, rest, psi0));
            if (!sub) return std::nullopt;
            Rat lo = bm && *bm > 0 ? *bm : Rat(0);
            Rat quarter = (bp - lo) / 4;
            OpenInterval window(lo + quarter, bp - quarter);
            std::uint64_t min_t = floor_log(s.base[q], magnitude(*sub));
            for (int attempt = 0; attempt < 64; ++attempt) {
                RatioWitness w;
                try {
                    w = find_ratio_in(s.base[p], s.base[q], window, 0, min_t, SearchLimits{200000});
                } catch (const PrecisionExhausted&) {
                    return std::nullopt;
                }
                Exps e = assemble(*sub, w.s, w.t);
                if (check(s, e)) return e;
                min_t = w.t + 1 + min_t / 4;
            }
            return std::nullopt;
        }
        return tied(s, p, q, *bm, lower, upper, psi0, rest, assemble, magnitude);
    }

    // Equal leading coefficients b: solve h^- < h^+ on the rest, then pump the
    // sub-witness and search q so that p lands in (b q + L, b q + U).
    template <class Assemble, class Magnitude>
    std::optional<Exps> tied(const Sys& s, std::size_t p, std::size_t q, const Rat& b,
                             const std::vector<std::size_t>& lower, const std::vector<std::size_t>& upper,
                             const std::vector<std::size_t>& psi0, const std::vector<std::size_t>& rest,
                             Assemble assemble, Magnitude magnitude) {
        std::vector<std::size_t> tie_lo, tie_hi;
        for (auto r : lower) {
            if (-s.rows[r][q] / s.rows[r][p] == b) tie_lo.push_back(r);
        }
        for (auto r : upper) {
            if (s.rows[r][q] / -s.rows[r][p] == b) tie_hi.push_back(r);
        }
        // h_i^- = -row_i / c_i, h_j^+ = row_j / |c_j| on the rest columns.
        auto h = [&](std::size_t r) {
            std::vector<Rat> out;
            Rat scale = Rat(1) / abs(s.rows[r][p]);
            if (s.rows[r][p] > 0) scale = -scale;
            for (auto i : rest) out.push_back(s.rows[r][i] * scale);
            return out;
        };
        Sys sub_sys = restrict(s, rest, psi0);
        for (auto j : tie_hi) {
            for (auto i : tie_lo) {
                auto hp = h(j);
                auto hm = h(i);
                for (std::size_t c = 0; c < hp.size(); ++c) hp[c] -= hm[c];
                sub_sys.rows.push_back(std::move(hp));
            }
        }
        auto sub = find(sub_sys);
        if (!sub) return std::nullopt;

        const Int& kp = s.base[p];
        const Int& kq = s.base[q];
        std::set<Int> rest_bases;
        for (auto i : rest) rest_bases.insert(s.base[i]);
        const bool two_bases = rest_bases.size() == 2;

        Exps scaled = *sub;
        std::uint64_t near_t = 0;
        for (int round = 0; round < 400; ++round) {
            if (round > 0) {
                // Shift kp-columns by a and kq-columns by c with kp^a ~ kq^c, or
                // a single-base rest by one exact power.
                std::uint64_t a = 1, c = 1;
                if (two_bases) {
                    try {
                        auto w = find_ratio_in(kp, kq, OpenInterval(Rat(63, 64), Rat(65, 64)), 1, near_t + 1,
                                               SearchLimits{200000});
                        a = w.s;
                        c = w.t;
                        near_t = w.t;
                    } catch (const PrecisionExhausted&) {
                        return std::nullopt;
                    }
                }
                scaled = *sub;
                for (std::size_t i = 0; i < rest.size(); ++i) {
                    const Int& base = s.base[rest[i]];
                    if (two_bases) {
                        scaled[i] += base == kp ? a : c;
                    } else {
                        scaled[i] += static_cast<std::uint64_t>(round);
                    }
                }
                if (!check(sub_sys, scaled)) continue;
            }
            std::vector<Int> val;
            for (std::size_t i = 0; i < rest.size(); ++i) val.push_back(ipow(s.base[rest[i]], scaled[i]));
            std::optional<Rat> lo, hi;
            for (auto r : tie_lo) {
                Rat v = dot(h(r), iota_cols(rest.size()), val);
                if (!lo || v > *lo) lo = v;
            }
            for (auto r : tie_hi) {
                Rat v = dot(h(r), iota_cols(rest.size()), val);
                if (!hi || v < *hi) hi = v;
            }
            std::uint64_t t0 = floor_log(kq, magnitude(scaled));
            for (std::uint64_t t = t0; t < t0 + 40; ++t) {
                Int qv = ipow(kq, t);
                std::uint64_t sp = least_power_above(kp, b * qv + *lo);
                if (!(ipow(kp, sp) < b * qv + *hi)) continue;
                Exps e = assemble(scaled, sp, t);
                if (check(s, e)) return e;
            }
        }
        return std::nullopt;
    }

    static std::vector<std::size_t> iota_cols(std::size_t n) {
        std::vector<std::size_t> v(n);
        std::iota(v.begin(), v.end(), 0);
        return v;
    }

    // Same-base pairs at a fixed exponent gap collapse to one variable.
    std::optional<Exps> merged(const Sys& s) {
        const std::size_t n = s.n();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || s.base[i] != s.base[j]) continue;
                for (std::uint64_t g = 0; g <= nu_; ++g) {
                    if (g == 0 && j < i) continue;
                    // z_j = base^g z_i: fold column j into column i.
                    Int f = ipow(s.base[i], g);
                    std::vector<std::size_t> keep;
                    for (std::size_t c = 0; c < n; ++c) {
                        if (c != j) keep.push_back(c);
                    }
                    Sys red;
                    for (auto c : keep) red.base.push_back(s.base[c]);
                    for (const auto& r : s.rows) {
                        std::vector<Rat> row;
                        for (auto c : keep) row.push_back(c == i ? r[i] + r[j] * f : r[c]);
                        red.rows.push_back(std::move(row));
                    }
                    tick();
                    auto sub = find(red);
                    if (!sub) continue;
                    Exps e(n, 0);
                    for (std::size_t c = 0; c < keep.size(); ++c) e[keep[c]] = (*sub)[c];
                    e[j] = e[i] + g;
                    if (check(s, e)) return e;
                }
            }
        }
        return std::nullopt;
    }
};

// Magnitude profiles per base group: an order of the group's variables and,
// for each consecutive pair, an exact gap <= nu or a gap > nu.
void group_profiles(const std::vector<std::size_t>& group, std::uint64_t nu,
                    std::vector<std::vector<ProfileLink>>& out) {
    std::vector<std::size_t> order = group;
    std::sort(order.begin(), order.end());
    do {
        std::vector<std::uint64_t> choice(order.size() > 0 ? order.size() - 1 : 0, 0);
        for (;;) {
            std::vector<ProfileLink> links;
            for (std::size_t i = 0; i < choice.size(); ++i) {
                bool merged = choice[i] <= nu;
                links.push_back({order[i], order[i + 1], merged, merged ? choice[i] : nu + 1});
            }
            out.push_back(std::move(links));
            std::size_t i = 0;
            while (i < choice.size() && choice[i] == nu + 1) choice[i++] = 0;
            if (i == choice.size()) break;
            ++choice[i];
        }
    } while (std::next_permutation(order.begin(), order.end()));
}

}  // namespace

IneqResult solve_homogeneous(const Int& k, const Int& l, const LinearIneqSystem& sys, const IneqBudget& budget) {
    sys.validate();
    if (!mult_independent(k, l)) throw std::invalid_argument("bases must be multiplicatively independent");
    for (const auto& v : sys.vars) {
        if (v.base != k && v.base != l) {
            throw std::invalid_argument("variable '" + v.id + "' has base " + to_string(v.base) + " outside {k, l}");
        }
    }
    IneqResult out;
    if (!real_feasible(sys)) {
        out.kind = IneqResult::Kind::Unsat;
        out.reason = "real relaxation infeasible";
        return out;
    }
    const std::uint64_t nu = budget.nu_max ? budget.nu_max : default_nu_max(sys);
    Sys s;
    for (const auto& v : sys.vars) s.base.push_back(v.base);
    s.rows = sys.rows;
    Searcher searcher(budget.steps, nu);
    try {
        if (auto e = searcher.find(s)) {
            if (!sys.holds(*e)) throw std::logic_error("inequality witness failed verification");
            out.kind = IneqResult::Kind::Sat;
            out.witness.exponents = *e;
            return out;
        }
    } catch (const BudgetExhausted&) {
        out.reason = "step budget exhausted during witness search";
    }

    std::map<Int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < sys.vars.size(); ++i) groups[sys.vars[i].base].push_back(i);
    std::vector<std::vector<std::vector<ProfileLink>>> per_group;
    double total = 1;
    for (const auto& [base, members] : groups) {
        double count = 1;
        for (std::size_t i = 2; i <= members.size(); ++i) count *= static_cast<double>(i) * static_cast<double>(nu + 2);
        total *= count;
        if (total > static_cast<double>(budget.max_profiles)) {
            out.kind = IneqResult::Kind::Unknown;
            out.reason = "too many magnitude profiles";
            return out;
        }
        std::vector<std::vector<ProfileLink>> all, alive;
        group_profiles(members, nu, all);
        for (auto& links : all) {
            if (real_feasible(sys, links)) alive.push_back(std::move(links));
        }
        if (alive.empty()) {
            out.kind = IneqResult::Kind::Unsat;
            out.reason = "every magnitude profile of base " + to_string(base) + " is infeasible";
            return out;
        }
        per_group.push_back(std::move(alive));
    }
    std::vector<std::size_t> idx(per_group.size(), 0);
    for (;;) {
        std::vector<ProfileLink> links;
        for (std::size_t g = 0; g < per_group.size(); ++g) {
            links.insert(links.end(), per_group[g][idx[g]].begin(), per_group[g][idx[g]].end());
        }
        if (real_feasible(sys, links)) {
            out.kind = IneqResult::Kind::Unknown;
            if (out.reason.empty()) out.reason = "feasible magnitude profile without a constructed witness";
            return out;
        }
        std::size_t g = 0;
        while (g < idx.size() && ++idx[g] == per_group[g].size()) idx[g++] = 0;
        if (g == idx.size()) break;
    }
    out.kind = IneqResult::Kind::Unsat;
    out.reason = "every magnitude profile is infeasible";
    return out;
}

namespace {

bool congruences_hold(const LinearIneqSystem& sys, const CongruenceSystem& delta, const Exps& e) {
    for (const auto& c : delta) {
        std::size_t i = sys.index_of(c.var);
        if (!c.satisfied_by(ipow(sys.vars[i].base, e[i]))) return false;
    }
    return true;
}

// Exponent choices for one variable: a pinned exponent, or e = offset + rho*e'.
struct Choice {
    bool pinned = false;
    std::uint64_t offset = 0;
};

}  // namespace

IneqResult solve_with_congruences(const Int& k, const Int& l, const LinearIneqSystem& sys,
                                  const CongruenceSystem& delta, const IneqBudget& budget) {
    sys.validate();
    const std::size_t n = sys.vars.size();
    std::vector<CongruenceSystem> per_var(n);
    for (const auto& c : delta) per_var[sys.index_of(c.var)].push_back(c);

    IneqResult out;
    std::vector<ExponentSet> sets;
    std::map<Int, std::uint64_t> rho;
    for (std::size_t i = 0; i < n; ++i) {
        sets.push_back(exponents_satisfying(sys.vars[i].base, per_var[i]));
        if (sets.back().empty()) {
            out.kind = IneqResult::Kind::Unsat;
            out.reason = "no power of " + to_string(sys.vars[i].base) + " satisfies the congruences on " +
                         sys.vars[i].id;
            return out;
        }
        auto& r = rho[sys.vars[i].base];
        r = lcm_u64(r ? r : 1, sets.back().period);
    }
    std::vector<std::vector<Choice>> choices(n);
    double combos = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& es = sets[i];
        for (auto e : es.sporadic) choices[i].push_back({true, e});
        std::uint64_t r = rho[sys.vars[i].base];
        for (auto c : es.classes) {
            for (std::uint64_t j = 0; j < r / es.period; ++j) choices[i].push_back({false, c + j * es.period});
        }
        combos *= static_cast<double>(choices[i].size());
    }
    if (combos > 20000) {
        out.reason = "too many residue-class combinations";
        return out;
    }

    const Int kt = ipow(k, rho.count(k) ? rho[k] : 1);
    const Int lt = ipow(l, rho.count(l) ? rho[l] : 1);
    bool undecided = false;
    std::string undecided_reason;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        // Substitute z_i = base^offset * z~_i with z~_i in (base^rho)^N; pinned
        // variables become constants.
        LinearIneqSystem red;
        std::vector<std::size_t> free_vars;
        std::vector<Rat> constants(sys.rows.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const Choice& ch = choices[i][idx[i]];
            Int f = ipow(sys.vars[i].base, ch.offset);
            if (ch.pinned) {
                for (std::size_t r = 0; r < sys.rows.size(); ++r) constants[r] += sys.rows[r][i] * f;
                continue;
            }
            free_vars.push_back(i);
            red.vars.push_back({sys.vars[i].id, ipow(sys.vars[i].base, rho[sys.vars[i].base])});
        }
        for (std::size_t r = 0; r < sys.rows.size(); ++r) {
            std::vector<Rat> row;
            for (auto i : free_vars) row.push_back(sys.rows[r][i] * ipow(sys.vars[i].base, choices[i][idx[i]].offset));
            red.rows.push_back(std::move(row));
        }
        bool inhomogeneous = std::any_of(constants.begin(), constants.end(), [](const Rat& c) { return c != 0; });
        auto lift = [&](const Exps& sub) {
            Exps e(n, 0);
            std::size_t f = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const Choice& ch = choices[i][idx[i]];
                e[i] = ch.pinned ? ch.offset : ch.offset + rho[sys.vars[i].base] * sub[f++];
            }
            return e;
        };

        if (free_vars.empty()) {
            Exps e = lift({});
            if (sys.holds(e)) {
                out.kind = IneqResult::Kind::Sat;
                out.witness.exponents = e;
                return out;
            }
        } else if (inhomogeneous) {
            // Only pinned constants break homogeneity: decide by the real
            // relaxation when it is empty, otherwise search a small box.
            std::vector<LinearRow> rows;
            const std::size_t m = free_vars.size();
            for (std::size_t r = 0; r < red.rows.size(); ++r) rows.push_back({red.rows[r], constants[r], true});
            for (std::size_t i = 0; i < m; ++i) {
                LinearRow pos{std::vector<Rat>(m), Rat(-1), false};
                pos.coeffs[i] = 1;
                rows.push_back(std::move(pos));
            }
            if (fm_feasible(std::move(rows), m)) {
                bool found = false;
                Exps sub(m, 0);
                const std::uint64_t bound = 24;
                for (;;) {
                    Exps e = lift(sub);
                    if (sys.holds(e)) {
                        found = true;
                        out.kind = IneqResult::Kind::Sat;
                        out.witness.exponents = e;
                        break;
                    }
                    std::size_t i = 0;
                    while (i < m && sub[i] == bound) sub[i++] = 0;
                    if (i == m) break;
                    ++sub[i];
                    if (m > 3) break;
                }
                if (found) return out;
                undecided = true;
                undecided_reason = "pinned exponent leaves an inhomogeneous system";
            }
        } else {
            Int kk = kt, ll = lt;
            if (!mult_independent(kk, ll)) throw std::logic_error("rescaled bases became dependent");
            IneqResult r = solve_homogeneous(kk, ll, red, budget);
            if (r.kind == IneqResult::Kind::Sat) {
                Exps e = lift(r.witness.exponents);
                if (!sys.holds(e) || !congruences_hold(sys, delta, e)) {
                    throw std::logic_error("rescaled witness failed verification");
                }
                out.kind = IneqResult::Kind::Sat;
                out.witness.exponents = e;
                return out;
            }
            if (r.kind == IneqResult::Kind::Unknown) {
                undecided = true;
                undecided_reason = r.reason;
            }
        }

        std::size_t i = 0;
        while (i < n && ++idx[i] == choices[i].size()) idx[i++] = 0;
        if (i == n) break;
    }
    if (undecided) {
        out.kind = IneqResult::Kind::Unknown;
        out.reason = undecided_reason;
        return out;
    }
    out.kind = IneqResult::Kind::Unsat;
    out.reason = "every residue class combination is infeasible";
    return out;
}

std::vector<AxiomInstance> binequ_axioms(const Int& l) {
    if (l < 2) throw std::invalid_argument("BInequ base must be >= 2");
    Term x = Term::var("x");
    Term y = Term::var("y");
    Term lx = Term::var("x", l);
    Formula body = fm::implies(fm::conj({fm::U(l, x), fm::U(l, y)}),
                               fm::conj({fm::lt(Term(), x), fm::neg(fm::conj({fm::lt(x, y), fm::lt(y, lx)}))}));
    AxiomInstance a;
    a.tag = "BInequ";
    a.params = {{"l", int_to_json(l)}};
    a.formula = fm::forall(std::vector<std::string>{"x", "y"}, std::move(body));
    a.completeness = "exact";
    return {a};
}

InequAxiomResult inequ_axiom(const Int& k, const Int& l, const LinearIneqSystem& sys, const Int& d,
                             const std::vector<Int>& residues, const IneqBudget& budget) {
    sys.validate();
    if (d < 2) throw std::invalid_argument("modulus d must be >= 2");
    if (residues.size() != sys.vars.size()) throw std::invalid_argument("one residue per variable required");
    CongruenceSystem delta;
    for (std::size_t i = 0; i < residues.size(); ++i) {
        if (residues[i] < 1 || residues[i] > d) throw std::invalid_argument("residues must lie in 1..d");
        delta.push_back(make_congruence(sys.vars[i].id, d, residues[i]));
    }
    InequAxiomResult out;
    out.solver = solve_with_congruences(k, l, sys, delta, budget);
    if (out.solver.kind == IneqResult::Kind::Sat) {
        out.kind = InequAxiomResult::Kind::NotAnAxiom;
        return out;
    }
    if (out.solver.kind == IneqResult::Kind::Unknown) return out;

    std::vector<Formula> guards, matrix;
    std::vector<std::string> names;
    for (const auto& v : sys.vars) {
        names.push_back(v.id);
        guards.push_back(fm::U(v.base, Term::var(v.id)));
    }
    for (const auto& r : sys.rows) {
        Int den = 1;
        for (const auto& c : r) den = lcm(den, Int(c.get_den()));
        Term t;
        for (std::size_t i = 0; i < r.size(); ++i) t += Term::var(sys.vars[i].id, Int(r[i] * den));
        matrix.push_back(fm::lt(Term(), t));
    }
    for (std::size_t i = 0; i < residues.size(); ++i) {
        matrix.push_back(fm::D(d, Term::var(sys.vars[i].id) - Term(residues[i])));
    }
    out.kind = InequAxiomResult::Kind::Axiom;
    out.instance.tag = "Inequ";
    nlohmann::json params = sys.to_json();
    params["k"] = int_to_json(k);
    params["l"] = int_to_json(l);
    params["d"] = int_to_json(d);
    params["residues"] = nlohmann::json::array();
    for (const auto& r : residues) params["residues"].push_back(int_to_json(r));
    out.instance.params = params;
    out.instance.formula = fm::forall(names, fm::implies(fm::conj(guards), fm::neg(fm::conj(matrix))));
    out.instance.completeness = "certified";
    out.instance.note = out.solver.reason;
    return out;
}

}  // namespace powerarith
