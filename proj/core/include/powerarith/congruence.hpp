#pragma once

// Carmichael function, residues of powers modulo n, CRT and the exponent
// sets of l^N cut out by congruence constraints.

#include "powerarith/formula.hpp"
#include "powerarith/numeric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace powerarith {

/// Least m >= 1 with a^m = 1 (mod n) for all a coprime to n.
std::uint64_t carmichael_lambda(std::uint64_t n);

struct PowerResidueCycle {
    Int base;
    std::uint64_t modulus = 1;
    std::uint64_t preperiod = 0;
    std::uint64_t period = 1;
    /// Residues of base^0 .. base^(preperiod + period - 1).
    std::vector<std::uint64_t> residues;

    std::uint64_t residue_at(std::uint64_t e) const;
};

PowerResidueCycle power_residues(const Int& base, std::uint64_t modulus);

/// {k in 1..n : base^m != k (mod n) for m = 1..lambda(n)}, with n standing
/// for residue 0. Requires gcd(base, n) = 1.
std::vector<std::uint64_t> excluded_residues(const Int& base, std::uint64_t n);

/// var = residue (mod modulus), 0 <= residue < modulus.
struct CongruenceConstraint {
    std::string var;
    Int modulus = 1;
    Int residue = 0;

    bool satisfied_by(const Int& value) const;
    bool operator==(const CongruenceConstraint&) const = default;
};

using CongruenceSystem = std::vector<CongruenceConstraint>;

/// Normalizes the residue into [0, modulus).
CongruenceConstraint make_congruence(std::string var, const Int& modulus, const Int& residue);

struct CrtResult {
    bool satisfiable = true;
    CongruenceConstraint combined;             // when satisfiable
    std::size_t conflict_a = 0, conflict_b = 0;  // indices into the input otherwise
};

/// Combines constraints on one variable. Moduli need not be coprime.
CrtResult crt_combine(const CongruenceSystem& system);

/// { offset + period * t : t in N } intersected with [minimum, inf).
struct ExponentProgression {
    std::uint64_t offset = 0;
    std::uint64_t period = 1;
    std::uint64_t minimum = 0;
};

/// All e >= 0 such that base^e satisfies a congruence system: finitely many
/// sporadic exponents below `threshold`, and for e >= threshold the classes
/// e = c (mod period) with c listed in [threshold, threshold + period).
struct ExponentSet {
    std::uint64_t threshold = 0;
    std::vector<std::uint64_t> sporadic;
    std::uint64_t period = 1;
    std::vector<std::uint64_t> classes;

    bool empty() const { return sporadic.empty() && classes.empty(); }
    bool infinite() const { return !classes.empty(); }
    bool contains(std::uint64_t e) const;
    /// First `count` members in increasing order (fewer if the set is finite).
    std::vector<std::uint64_t> first(std::size_t count) const;
    /// One infinite progression inside the set, if any.
    std::optional<ExponentProgression> progression() const;
};

/// Exponents e with base^e satisfying every constraint. Variable names in the
/// system are ignored; the modulus of the combined constraint is split into
/// its base-prime part (which fixes the threshold) and its coprime part
/// (which fixes the period).
ExponentSet exponents_satisfying(const Int& base, const CongruenceSystem& delta);

AxiomInstance car1_axiom(const Int& base, std::uint64_t m);
AxiomInstance car2_axiom(const Int& base, std::uint64_t n);

}  // namespace powerarith
