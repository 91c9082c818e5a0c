#include "rsmdp/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rsmdp/errors.hpp"

namespace rsmdp::lp {

namespace {

constexpr double kPivotTolerance = 1e-9;

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t i, std::size_t j) { return a_[i * (cols_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * (cols_ + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, cols_); }
    double rhs(std::size_t i) const { return at(i, cols_); }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t r, std::size_t c, std::vector<double>& z) {
        const double p = at(r, c);
        for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        const double f = z[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j <= cols_; ++j) z[j] -= f * at(r, j);
            z[c] = 0.0;
        }
    }

    void drop_row(std::size_t r) {
        a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r * (cols_ + 1)),
                 a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (cols_ + 1)));
        --rows_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> a_;
};

// Reduced costs z_j = c_j - sum_i c_B(i) T(i,j); the rhs slot holds -c_B . x_B.
std::vector<double> reduced_costs(const Tableau& t, const std::vector<double>& c, const std::vector<std::size_t>& basis) {
    std::vector<double> z(t.cols() + 1, 0.0);
    for (std::size_t j = 0; j < t.cols(); ++j) z[j] = c[j];
    for (std::size_t i = 0; i < t.rows(); ++i) {
        const double cb = c[basis[i]];
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= t.cols(); ++j) z[j] -= cb * t.at(i, j);
    }
    return z;
}

// Runs Bland-rule pivots until optimal. Columns with allowed[j] == false never enter.
std::size_t optimize(Tableau& t, std::vector<double>& z, std::vector<std::size_t>& basis,
                     const std::vector<bool>& allowed, std::size_t pivot_cap) {
    std::size_t pivots = 0;
    for (;;) {
        std::size_t enter = t.cols();
        for (std::size_t j = 0; j < t.cols(); ++j) {
            if (allowed[j] && z[j] > kFeasibilityTolerance) {
                enter = j;
                break;
            }
        }
        if (enter == t.cols()) return pivots;

        std::size_t leave = t.rows();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.rows(); ++i) {
            const double a = t.at(i, enter);
            if (a <= kPivotTolerance) continue;
            const double ratio = t.rhs(i) / a;
            if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && leave < t.rows() && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == t.rows()) throw LpUnbounded("objective is unbounded along column " + std::to_string(enter));

        t.pivot(leave, enter, z);
        basis[leave] = enter;
        if (++pivots > pivot_cap) throw Error(ErrorCode::Internal, "simplex pivot cap exceeded");
    }
}

} // namespace

Solution solve(const LinearProgram& lp) {
    const std::size_t n = lp.n_vars;
    if (lp.objective.size() != n || lp.free_var.size() != n) throw InvalidArgument("LP vectors disagree with n_vars");
    for (const auto& c : lp.constraints)
        if (c.coef.size() != n) throw InvalidArgument("LP constraint has the wrong width");

    // Column layout: split structural columns, then one slack/surplus per
    // inequality row, then one artificial per row that needs it.
    std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
    std::size_t cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        pos_col[j] = cols++;
        if (lp.free_var[j]) neg_col[j] = cols++;
    }

    const std::size_t m = lp.constraints.size();
    std::vector<double> sign(m, 1.0);
    std::vector<Sense> sense(m);
    std::vector<std::size_t> slack_col(m, SIZE_MAX), art_col(m, SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        sense[i] = c.sense;
        if (c.rhs < 0.0) {
            sign[i] = -1.0;
            if (c.sense == Sense::LessEqual) sense[i] = Sense::GreaterEqual;
            else if (c.sense == Sense::GreaterEqual) sense[i] = Sense::LessEqual;
        }
        if (sense[i] != Sense::Equal) slack_col[i] = cols++;
    }
    const std::size_t before_art = cols;
    for (std::size_t i = 0; i < m; ++i)
        if (sense[i] != Sense::LessEqual) art_col[i] = cols++;

    Tableau t(m, cols);
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = lp.constraints[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double v = sign[i] * c.coef[j];
            t.at(i, pos_col[j]) = v;
            if (neg_col[j] != SIZE_MAX) t.at(i, neg_col[j]) = -v;
        }
        t.rhs(i) = sign[i] * c.rhs;
        if (sense[i] == Sense::LessEqual) {
            t.at(i, slack_col[i]) = 1.0;
            basis[i] = slack_col[i];
        } else {
            if (sense[i] == Sense::GreaterEqual) t.at(i, slack_col[i]) = -1.0;
            t.at(i, art_col[i]) = 1.0;
            basis[i] = art_col[i];
        }
    }

    const std::size_t pivot_cap = 100 * (m + cols) + 1000;
    std::vector<bool> allowed(cols, true);
    Solution sol;

    // phase one: maximize -sum(artificials)
    if (before_art < cols) {
        std::vector<double> c1(cols, 0.0);
        for (std::size_t j = before_art; j < cols; ++j) c1[j] = -1.0;
        auto z = reduced_costs(t, c1, basis);
        sol.pivots += optimize(t, z, basis, allowed, pivot_cap);
        double infeasibility = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i)
            if (basis[i] >= before_art) infeasibility += t.rhs(i);
        if (infeasibility > kFeasibilityTolerance * (1.0 + static_cast<double>(m)))
            throw LpInfeasible("constraint system is infeasible (phase-one residual " + std::to_string(infeasibility) + ")");

        // drive zero-level artificials out of the basis; drop redundant rows
        for (std::size_t i = 0; i < t.rows();) {
            if (basis[i] < before_art) {
                ++i;
                continue;
            }
            std::size_t enter = before_art;
            for (std::size_t j = 0; j < before_art; ++j) {
                if (std::abs(t.at(i, j)) > kPivotTolerance) {
                    enter = j;
                    break;
                }
            }
            if (enter < before_art) {
                t.pivot(i, enter, z);
                basis[i] = enter;
                ++i;
            } else {
                t.drop_row(i);
                basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
            }
        }
        for (std::size_t j = before_art; j < cols; ++j) allowed[j] = false;
    }

    // phase two
    std::vector<double> c2(cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        c2[pos_col[j]] = lp.objective[j];
        if (neg_col[j] != SIZE_MAX) c2[neg_col[j]] = -lp.objective[j];
    }
    auto z = reduced_costs(t, c2, basis);
    sol.pivots += optimize(t, z, basis, allowed, pivot_cap);

    std::vector<double> col_value(cols, 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i) col_value[basis[i]] = t.rhs(i);
    sol.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        sol.x[j] = col_value[pos_col[j]];
        if (neg_col[j] != SIZE_MAX) sol.x[j] -= col_value[neg_col[j]];
    }
    sol.value = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.value += lp.objective[j] * sol.x[j];
    return sol;
}

} // namespace rsmdp::lp
