#pragma once

// Solutions of a_1 x_1 + ... + a_n x_n = b y with x_i in l_i^N, y in
// l_{n+1}^N: bounded enumeration, degeneracy, primitive representatives,
// the union-of-intersections (coupled/fixed) description and Mann axioms.

#include "powerarith/formula.hpp"
#include "powerarith/numeric.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace powerarith {

struct PowerEquation {
    std::vector<Int> coeffs;  // a_1 .. a_n
    Int rhs;                  // b
    std::vector<Int> bases;   // l_1 .. l_{n+1}
    std::vector<std::string> names;  // optional exponent names, size n+1

    std::size_t arity() const { return coeffs.size(); }
    bool same_base() const;
    /// Throws std::invalid_argument on zero coefficients, bad sizes, bases < 2
    /// or distinct bases that are multiplicatively dependent.
    void validate() const;
    /// a_1 .. a_n, -b: the equation as a vanishing signed sum.
    std::vector<Int> signed_coeffs() const;

    nlohmann::json to_json() const;
    static PowerEquation from_json(const nlohmann::json& j);
    /// "1*3^a - 1*2^b = 1*2^c"; a missing coefficient means 1.
    static PowerEquation parse_inline(const std::string& text);
};

using ExponentTuple = std::vector<std::uint64_t>;

bool satisfies(const PowerEquation& eq, const ExponentTuple& e);

/// All tuples with every exponent <= bound, lexicographically sorted.
std::vector<ExponentTuple> enumerate_solutions(const PowerEquation& eq, std::uint64_t bound);

/// True iff some nonempty J of left-hand indices has sum_{j in J} a_j x_j = 0.
bool is_degenerate(const PowerEquation& eq, const ExponentTuple& e);

std::vector<ExponentTuple> nondegenerate_solutions(const PowerEquation& eq, std::uint64_t bound);

/// Same-base equations only: non-degenerate solutions shifted so the minimum
/// exponent is 0, deduplicated and sorted.
std::vector<ExponentTuple> primitive_solutions(const PowerEquation& eq, std::uint64_t bound);

/// e_mu = e_sigma + c, or e_xi = b. Indices are 0-based.
struct UConstraint {
    enum class Kind { Coupled, Fixed };
    Kind kind = Kind::Fixed;
    std::size_t mu = 0;
    std::size_t sigma = 0;
    std::size_t xi = 0;
    std::uint64_t value = 0;  // c for Coupled, b for Fixed

    static UConstraint coupled(std::size_t mu, std::size_t sigma, std::uint64_t c);
    static UConstraint fixed(std::size_t xi, std::uint64_t b);
    bool holds(const ExponentTuple& e) const;
    bool operator==(const UConstraint&) const = default;
    nlohmann::json to_json() const;
};

enum class Completeness { Certified, BoundLimited };

const char* to_string(Completeness c);

struct SolutionSet {
    /// Each family is a conjunction of constraints; at least one Coupled.
    std::vector<std::vector<UConstraint>> families;
    /// Fixed-only members, as tuples.
    std::vector<ExponentTuple> isolated;
    std::uint64_t bound = 0;
    Completeness completeness = Completeness::BoundLimited;
    std::string certificate;  // which argument certified completeness

    bool contains(const ExponentTuple& e) const;
    /// One record per family / isolated tuple.
    std::vector<nlohmann::json> to_jsonl() const;
};

/// Union-of-intersections description of all solutions found in the box
/// [0, bound]^{n+1}. Each solution is split into the finest partition of its
/// signed terms into vanishing blocks; same-base blocks shift freely (Coupled
/// constraints relative to the block's smallest exponent), mixed-base blocks
/// are Fixed.
SolutionSet family_structure(const PowerEquation& eq, std::uint64_t bound);

struct MannAxiom {
    PowerEquation eq;
    Formula theta;
    /// Exponent tuples behind the disjuncts, lexicographic.
    std::vector<ExponentTuple> solutions;
    std::vector<Formula> disjuncts;
    Formula sentence;
    Completeness completeness = Completeness::BoundLimited;

    AxiomInstance instance() const;
};

constexpr std::uint64_t kDefaultMannBound = 64;

MannAxiom mann_axiom(const std::vector<Int>& coeffs, const Int& rhs, const std::vector<Int>& bases,
                     std::uint64_t bound = kDefaultMannBound);

}  // namespace powerarith
