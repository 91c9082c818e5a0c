#pragma once

#include <cstddef>

namespace rsmdp {

/**
 * Inputs of the finite-constant complexity bounds. Fields a calculator does not use
 * are ignored by it.
 */
struct BoundParams {
    double c_bar = 1.0;
    double gamma = 0.9;
    double theta = 0.1;
    double alpha1 = 1.0; ///< inner CVaR level (1 for the mean)
    double alpha2 = 1.0; ///< outer CVaR level (1 for the mean)
    std::size_t n_states = 1;
    std::size_t n_actions = 1;
    double a_bar0 = 1.0;  ///< largest prior row mass
    double o_alpha = 1.0; ///< smallest row mass at the start of the stage
    double mu_min = 1.0;  ///< smallest stationary state-action visitation
    double t0 = 0.0;      ///< burn-in after which coverage holds
    double delta = 0.05;  ///< failure probability
    double xi = 0.0;      ///< coverage exponents, informational only
    double eta = 0.0;
    double delta_total = 0.0; ///< observations added (one stage, or summed over a sweep)
    double sweep_index = 0.0; ///< L
    double o0 = 1.0;          ///< smallest prior row mass for the sweep bound

    /// Throws InvalidArgument when gamma, alpha1, alpha2, mu_min or theta are out of range.
    void validate() const;
};

/// T0 + max{16 A0 C / (mu (1-g)^2 a1 a2 theta), 128 |S| C^2 / (mu (1-g)^4 a1^2 a2^2 theta^2), (8/mu) ln(2|S||A|/delta)}.
double sample_complexity_T(const BoundParams& p);

/// (4C/(a1 a2)) |S|^2 |A| / (1-g)^2 ln(1 + Delta / (|S||A| O_alpha)).
double perturbation_bound(const BoundParams& p);

/// ceil( ln(1 + (4C/(a1 a2)) |S|^2 |A| / (theta (1-g)^2) ln(1 + Delta/(|S||A| O_alpha))) / ln(1/g) ).
double stage_iteration_bound(const BoundParams& p);

/// |A||S| ( ln(1 + (4C/(a1 a2)) |S|^2|A| / (theta (1-g)^2) ln(1 + Delta/(|S|^2|A|^2 (O0 + L)))) / ln(1/g) + 1 ).
double sweep_iteration_bound(const BoundParams& p);

} // namespace rsmdp
