#pragma once

// Pull streams of axiom instances for T(L) (no order) and T_forall(L)
// (universal theory with order), and the definition of l^N over
// (Z, +, k^N) for dependent k, l.

#include "powerarith/formula.hpp"
#include "powerarith/numeric.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

namespace powerarith {

struct AxiomParams {
    std::uint64_t cong_max = 6;        // congruence schemata for n = 2..cong_max
    std::uint64_t mann_arity_max = 2;  // n in a_1 x_1 + ... + a_n x_n = b y
    std::uint64_t mann_coeff_max = 1;  // |a_i| <= this
    std::uint64_t mann_rhs_max = 1;    // |b| <= this
    std::uint64_t e_max = 64;          // exponent bound for Mann solution search
    std::uint64_t car1_m_max = 3;      // car1 for m = 0..car1_m_max
    std::uint64_t car2_n_max = 12;     // car2 for coprime n = 2..car2_n_max

    nlohmann::json to_json() const;
    /// Missing keys keep their defaults; unknown keys are rejected.
    static AxiomParams from_json(const nlohmann::json& j);
};

/// Instances in schema order, produced one schema batch at a time.
class AxiomStream {
public:
    using Stage = std::function<std::vector<AxiomInstance>()>;
    explicit AxiomStream(std::vector<Stage> stages) : stages_(std::move(stages)) {}

    std::optional<AxiomInstance> next();
    std::vector<AxiomInstance> collect();

private:
    std::vector<Stage> stages_;
    std::size_t stage_ = 0;
    std::deque<AxiomInstance> pending_;
};

/// Tags A1..A5. Throws std::invalid_argument when two bases are dependent.
AxiomStream emit_T(const std::vector<Int>& bases, const AxiomParams& params = {});

/// Tags ∀1..∀7. Only |L| <= 2 is supported (the BInequ form of ∀6).
AxiomStream emit_Tforall(const std::vector<Int>& bases, const AxiomParams& params = {});

/// Formula in the free variable `var` over U_k alone that holds exactly on
/// l^N. Requires k, l dependent.
Formula definability_rewrite(const Int& k, const Int& l, const std::string& var = "x");

}  // namespace powerarith
