#include "rsmdp/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "rsmdp/errors.hpp"

namespace rsmdp {

void BoundParams::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0,1)");
    if (!(alpha1 > 0.0 && alpha1 <= 1.0)) throw InvalidArgument("alpha1 must lie in (0,1]");
    if (!(alpha2 > 0.0 && alpha2 <= 1.0)) throw InvalidArgument("alpha2 must lie in (0,1]");
    if (!(mu_min > 0.0 && mu_min <= 1.0)) throw InvalidArgument("mu_min must lie in (0,1]");
    if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
    if (n_states < 1 || n_actions < 1) throw InvalidArgument("state and action counts must be positive");
}

namespace {

double scale(const BoundParams& p) {
    const double S = double(p.n_states), A = double(p.n_actions);
    return 4.0 * p.c_bar / (p.alpha1 * p.alpha2) * S * S * A / ((1.0 - p.gamma) * (1.0 - p.gamma));
}

} // namespace

double sample_complexity_T(const BoundParams& p) {
    p.validate();
    const double g = 1.0 - p.gamma;
    const double a = p.alpha1 * p.alpha2;
    const double S = double(p.n_states), A = double(p.n_actions);
    const double t1 = 16.0 * p.a_bar0 * p.c_bar / (p.mu_min * g * g * a * p.theta);
    const double t2 = 128.0 * S * p.c_bar * p.c_bar / (p.mu_min * std::pow(g, 4) * a * a * p.theta * p.theta);
    const double t3 = 8.0 / p.mu_min * std::log(2.0 * S * A / p.delta);
    return p.t0 + std::max({t1, t2, t3});
}

double perturbation_bound(const BoundParams& p) {
    p.validate();
    const double S = double(p.n_states), A = double(p.n_actions);
    return scale(p) * std::log1p(p.delta_total / (S * A * p.o_alpha));
}

double stage_iteration_bound(const BoundParams& p) {
    p.validate();
    const double S = double(p.n_states), A = double(p.n_actions);
    const double inner = scale(p) / p.theta * std::log1p(p.delta_total / (S * A * p.o_alpha));
    return std::ceil(std::log1p(inner) / std::log(1.0 / p.gamma));
}

double sweep_iteration_bound(const BoundParams& p) {
    p.validate();
    const double S = double(p.n_states), A = double(p.n_actions);
    const double inner = scale(p) / p.theta * std::log1p(p.delta_total / (S * S * A * A * (p.o0 + p.sweep_index)));
    return A * S * (std::log1p(inner) / std::log(1.0 / p.gamma) + 1.0);
}

} // namespace rsmdp
