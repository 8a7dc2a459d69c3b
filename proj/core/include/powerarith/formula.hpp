#pragma once

// Formulas of the language {+, -, 0, 1, <, U_l, D_n}: AST, builders,
// s-expression rendering and parsing.
//
// Text grammar:
//   formula := true | false
//            | (= term term) | (< term term) | (U int term) | (D int term)
//            | (not formula) | (and formula*) | (or formula*)
//            | (-> formula formula) | (<-> formula formula)
//            | (forall ident formula) | (exists ident formula)
//   term    := int | ident | (+ term*) | (- term) | (- term term+)
//            | (scale int term) | (const int)

#include "powerarith/numeric.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace powerarith {

/// Integer-linear combination of variables plus a constant. Kept canonical:
/// variables sorted by name, no zero coefficients.
class Term {
public:
    Term() = default;
    Term(long c) : constant_(c) {}  // NOLINT(google-explicit-constructor)
    Term(const Int& c) : constant_(c) {}  // NOLINT(google-explicit-constructor)

    static Term var(const std::string& name, const Int& coeff = 1);

    const std::map<std::string, Int>& coefficients() const { return coeffs_; }
    const Int& constant() const { return constant_; }
    Int coefficient(const std::string& name) const;
    bool is_constant() const { return coeffs_.empty(); }
    bool mentions(const std::string& name) const { return coeffs_.count(name) != 0; }

    Term& operator+=(const Term& other);
    Term& operator-=(const Term& other);
    Term& operator*=(const Int& factor);
    friend Term operator+(Term a, const Term& b) { return a += b; }
    friend Term operator-(Term a, const Term& b) { return a -= b; }
    friend Term operator*(const Int& f, Term a) { return a *= f; }
    Term operator-() const { return Int(-1) * *this; }

    /// Value under a full assignment of the mentioned variables.
    Int evaluate(const std::map<std::string, Int>& env) const;
    /// Replaces the variable by a constant value.
    Term substitute(const std::string& name, const Int& value) const;

    bool operator==(const Term&) const = default;

private:
    std::map<std::string, Int> coeffs_;
    Int constant_ = 0;
};

enum class Op { True, False, Eq, Lt, U, D, Not, And, Or, Implies, Iff, Forall, Exists };

struct Formula {
    Op op = Op::True;
    Term lhs;
    Term rhs;
    Int param;         // base of U, modulus of D
    std::string var;   // bound variable of a quantifier
    std::vector<Formula> args;

    bool operator==(const Formula&) const = default;
};

namespace fm {
Formula truth();
Formula falsity();
Formula eq(Term a, Term b);
Formula lt(Term a, Term b);
Formula ne(Term a, Term b);
Formula le(Term a, Term b);
Formula U(const Int& base, Term t);
/// D_n(t); n must be >= 2.
Formula D(const Int& modulus, Term t);
Formula neg(Formula f);
/// Empty conjunction is `true`, a singleton is its element.
Formula conj(std::vector<Formula> parts);
/// Empty disjunction is `false`, a singleton is its element.
Formula disj(std::vector<Formula> parts);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula forall(const std::string& v, Formula body);
Formula forall(const std::vector<std::string>& vs, Formula body);
Formula exists(const std::string& v, Formula body);
}  // namespace fm

std::string render(const Term& t);
std::string render(const Formula& f);

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& message);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

Formula parse_formula(std::string_view text);
Term parse_term(std::string_view text);

std::set<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);

/// JSON number when it fits in a long, decimal string otherwise.
nlohmann::json int_to_json(const Int& v);
/// Accepts JSON integers and decimal strings.
Int int_from_json(const nlohmann::json& j);

/// Tag, parameters and formula of one emitted axiom.
struct AxiomInstance {
    std::string tag;
    nlohmann::json params = nlohmann::json::object();
    Formula formula;
    std::string completeness = "exact";  // exact | certified | bound_limited
    std::string note;

    /// {tag, params, formula, completeness_flag}
    nlohmann::json to_json() const;
};

}  // namespace powerarith
