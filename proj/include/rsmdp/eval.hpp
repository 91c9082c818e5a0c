#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsmdp/bellman.hpp"
#include "rsmdp/driver.hpp"
#include "rsmdp/envs.hpp"

namespace rsmdp {

struct OracleSolution {
    ValueFunction value;
    QTable q;
    std::vector<ActionIndex> greedy;
    Policy policy; ///< point mass on `greedy`
    std::size_t iterations = 0;
};

/// Exact value iteration against the environment kernel, greedy policy with eps = 0.
OracleSolution oracle_solve(const EnvBundle& env, const InnerRiskSpec& inner, double theta);

/// V of `policy` against the environment kernel.
ValueFunction policy_value(const EnvBundle& env, const Policy& policy, const InnerRiskSpec& inner, double theta);

/// sum_s mu_pi(s) V_pi(s), mu_pi the stationary distribution of the induced chain.
double stationary_weighted_value(const EnvBundle& env, const Policy& policy, const InnerRiskSpec& inner, double theta);

struct RobustnessReport {
    std::vector<std::string> labels;
    std::vector<double> values;
    double worst = 0.0; ///< largest cost across deployments
};

RobustnessReport robustness_sweep(const Policy& policy, const std::vector<EnvBundle>& deployments,
                                  const InnerRiskSpec& inner, double theta);

/// Deployment environments for each grid value of the preset's perturbation parameter.
std::vector<EnvBundle> deployment_envs(const EnvSpec& spec, const std::vector<double>& grid);

/// eta = scale / (1 + visits)^exponent
struct LearningRateSchedule {
    double scale = 1.0;
    double exponent = 0.7;

    double at(std::uint64_t visits) const;
};

struct QLearningConfig {
    std::size_t steps = 2000;
    std::size_t stage_length = 100; ///< epsilon advances once per stage
    EpsilonSchedule epsilon;
    LearningRateSchedule learning_rate;
    std::uint64_t seed = 0;
    std::vector<double> initial; ///< empty means uniform
    std::size_t log_every = 100; ///< stationary-weighted value of the greedy policy every this many steps
    double eval_theta = 1e-6;
};

struct QLearningResult {
    QTable q;
    Policy policy; ///< greedy
    std::vector<std::size_t> logged_steps;
    std::vector<double> logged_values;
};

/// Tabular Watkins Q-learning on costs: Q <- (1 - eta) Q + eta (c + gamma min_a' Q(s',a')).
QLearningResult q_learning_baseline(const EnvBundle& env, const QLearningConfig& cfg);

} // namespace rsmdp
