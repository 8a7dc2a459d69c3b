#pragma once

// Strict homogeneous systems C z > 0 over z in (k^N)^m x (l^N)^n, with
// optional congruence side conditions. Witnesses are searched for along the
// elimination recursion (largest variable first, Kronecker ratios, pumping);
// Unsat is reported only when every magnitude profile has an infeasible real
// relaxation, which is a proof.

#include "powerarith/congruence.hpp"
#include "powerarith/formula.hpp"
#include "powerarith/numeric.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace powerarith {

struct PowerVar {
    std::string id;
    Int base;
};

/// Rows are read as sum_i rows[r][i] * z_i > 0.
struct LinearIneqSystem {
    std::vector<PowerVar> vars;
    std::vector<std::vector<Rat>> rows;

    /// Throws std::invalid_argument on ragged rows, duplicate ids, bases < 2
    /// or more than two distinct bases.
    void validate() const;
    std::size_t index_of(const std::string& id) const;
    /// Distinct bases in order of first appearance.
    std::vector<Int> bases() const;
    bool holds(const std::vector<std::uint64_t>& exponents) const;

    nlohmann::json to_json() const;
    /// Also accepts an optional "congruences" array, read by
    /// congruences_from_json.
    static LinearIneqSystem from_json(const nlohmann::json& j);
};

CongruenceSystem congruences_from_json(const nlohmann::json& j);

struct IneqWitness {
    std::vector<std::uint64_t> exponents;  // aligned with LinearIneqSystem::vars
    nlohmann::json to_json(const LinearIneqSystem& sys) const;
};

struct IneqResult {
    enum class Kind { Sat, Unsat, Unknown };
    Kind kind = Kind::Unknown;
    IneqWitness witness;
    std::string reason;
};

const char* to_string(IneqResult::Kind k);

struct IneqBudget {
    std::uint64_t steps = 400000;  // exact row evaluations
    std::uint64_t nu_max = 0;      // 0: derive from the coefficients
    std::size_t max_profiles = 200000;
};

/// Consecutive same-base variables in a magnitude order are either merged at
/// an exact exponent gap in [0, nu_max] or separated by more than nu_max.
std::uint64_t default_nu_max(const LinearIneqSystem& sys);

/// Real relaxation with positivity, optionally with the profile constraints
/// z_j = base^g z_i (merged) or z_j >= base^(nu+1) z_i (separated).
struct ProfileLink {
    std::size_t lower = 0;
    std::size_t upper = 0;
    bool merged = false;
    std::uint64_t gap = 0;  // exact gap when merged, minimum gap otherwise
};

bool real_feasible(const LinearIneqSystem& sys, const std::vector<ProfileLink>& profile = {});

/// k and l must be multiplicatively independent; every variable base must be
/// k or l.
IneqResult solve_homogeneous(const Int& k, const Int& l, const LinearIneqSystem& sys, const IneqBudget& budget = {});

/// Congruences are on the values z_i (not exponents).
IneqResult solve_with_congruences(const Int& k, const Int& l, const LinearIneqSystem& sys,
                                  const CongruenceSystem& delta, const IneqBudget& budget = {});

std::vector<AxiomInstance> binequ_axioms(const Int& l);

struct InequAxiomResult {
    enum class Kind { Axiom, NotAnAxiom, Unknown };
    Kind kind = Kind::Unknown;
    AxiomInstance instance;
    IneqResult solver;
};

/// The Inequ instance for C z > 0 and z_i = residues[i] (mod d), residues in
/// 1..d. An axiom exactly when the solver proves Unsat.
InequAxiomResult inequ_axiom(const Int& k, const Int& l, const LinearIneqSystem& sys, const Int& d,
                             const std::vector<Int>& residues, const IneqBudget& budget = {});

}  // namespace powerarith
