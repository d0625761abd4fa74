#pragma once

#include <vector>

#include "psadf/rational.hpp"

namespace psadf {

// maximize objective.x subject to rows[i].x <= rhs[i]; x unrestricted in sign
struct LinearProgram {
    std::size_t vars = 0;
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    std::vector<Rational> objective;

    void add_row(std::vector<Rational> coeffs, Rational bound);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    std::vector<Rational> point;
};

// Dense two-phase simplex with Bland's rule; all pivoting exact.
LpResult solve_lp(const LinearProgram& p);

// Feasibility only (zero objective).
LpResult solve_feasibility(LinearProgram p);

// min objective.x, same constraint form.
LpResult solve_lp_min(LinearProgram p);

}  // namespace psadf
