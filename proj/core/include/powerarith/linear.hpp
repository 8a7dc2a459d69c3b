#pragma once

// Exact Fourier-Motzkin over the rationals for mixed strict / non-strict
// systems sum_i c_i z_i + d (> or >=) 0.

#include "powerarith/numeric.hpp"

#include <cstddef>
#include <vector>

namespace powerarith {

struct LinearRow {
    std::vector<Rat> coeffs;
    Rat constant = 0;
    bool strict = true;
};

struct FmLimits {
    std::size_t max_rows = 20000;
};

/// False only when the system has no real solution. Hitting the row cap
/// answers true, so a false result is always a proof of infeasibility.
bool fm_feasible(std::vector<LinearRow> rows, std::size_t nvars, const FmLimits& limits = {});

}  // namespace powerarith
