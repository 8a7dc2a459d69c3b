#pragma once

// Satisfiability of a conjunction of literals over power variables:
// equations go through the Mann solution structure, the remaining strict
// inequalities and congruences through the inequality solver.

#include "powerarith/formula.hpp"
#include "powerarith/inequality.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace powerarith {

/// Literals are atoms or negated atoms (=, <, D) over the declared variables;
/// each variable v ranges over base(v)^N.
struct SatProblem {
    std::vector<PowerVar> vars;
    std::vector<Formula> literals;

    /// {"vars": [{id, base}], "literals": ["(= (- x y) 1)", ...]}
    static SatProblem from_json(const nlohmann::json& j);
};

struct SatOptions {
    std::uint64_t mann_bound = 32;
    IneqBudget budget;
};

struct SatResult {
    enum class Kind { Sat, Unsat, Unknown };
    Kind kind = Kind::Unknown;
    std::map<std::string, std::uint64_t> exponents;
    std::string reason;

    nlohmann::json to_json(const SatProblem& p) const;
};

const char* to_string(SatResult::Kind k);

SatResult sat_conjunction(const SatProblem& problem, const SatOptions& options = {});

}  // namespace powerarith
