#pragma once

#include <cstddef>
#include <vector>

namespace rsmdp::lp {

enum class Sense { LessEqual, Equal, GreaterEqual };

struct Constraint {
    std::vector<double> coef; ///< one coefficient per variable
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

/// maximize objective . x subject to the constraints, with x_j >= 0 unless
/// free_var[j] is set.
struct LinearProgram {
    std::size_t n_vars = 0;
    std::vector<double> objective;
    std::vector<bool> free_var;
    std::vector<Constraint> constraints;

    explicit LinearProgram(std::size_t n = 0) : n_vars(n), objective(n, 0.0), free_var(n, false) {}

    Constraint& add(Sense sense, double rhs) {
        constraints.push_back({std::vector<double>(n_vars, 0.0), sense, rhs});
        return constraints.back();
    }
};

struct Solution {
    double value = 0.0;
    std::vector<double> x;
    std::size_t pivots = 0;
};

constexpr double kFeasibilityTolerance = 1e-9;

/**
 * Dense two-phase tableau simplex with Bland's rule.
 *
 * Entering and leaving ties resolve to the lowest index, so the pivot path is
 * deterministic. Throws LpInfeasible when phase one ends with a positive
 * artificial sum and LpUnbounded when an improving column has no positive
 * pivot entry.
 */
Solution solve(const LinearProgram& lp);

} // namespace rsmdp::lp
