#pragma once

// Windowed model checking over (Z, +, -, 0, 1, <, l^N).
//
// Atoms are evaluated exactly on integers (U_l(v) holds iff v is a power of
// l). Quantifiers are relativized: a variable guarded by U_l (a top-level
// conjunct of the antecedent of a universal, or of the matrix of an
// existential) ranges over {l^e <= height}; any other variable ranges over
// [-bound, bound]. Unguarded variables are not enumerated blindly: single
// variables use a finite set of test points that is exact for the window, and
// blocks of several variables whose atoms are linear (in)equalities are
// decided by integer Fourier-Motzkin elimination.

#include "powerarith/formula.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace powerarith {

struct EvalWindow {
    Int bound = 1000000;
    Int height = Int(1) << 40;
    std::uint64_t cost_cap = 50000000;
};

using Assignment = std::map<std::string, Int>;

struct EvalResult {
    enum class Kind { Pass, Counterexample, Unknown };
    Kind kind = Kind::Pass;
    /// Values of the outermost universally quantified variables that falsify
    /// the sentence; re-verified before being returned.
    Assignment assignment;
    std::string reason;
};

const char* to_string(EvalResult::Kind k);

/// Pass is evidence only; Counterexample is definitive for universal
/// sentences; Unknown means the cost cap was hit or no exact method applied.
EvalResult eval_window(const Formula& sentence, const EvalWindow& window);

class EvalBudgetExceeded : public std::runtime_error {
public:
    explicit EvalBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Truth of a formula whose free variables are all assigned in `env`, with
/// quantifiers relativized to the window. Throws EvalBudgetExceeded.
bool holds(const Formula& f, const Assignment& env, const EvalWindow& window);

/// Exact truth of an atomic formula under a full assignment.
bool atom_holds(const Formula& atom, const Assignment& env);

}  // namespace powerarith
