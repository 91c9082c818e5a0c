#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rsmdp/bayes.hpp"
#include "rsmdp/mdp.hpp"
#include "rsmdp/risk.hpp"

namespace rsmdp {

/// Value function over states, in cost units.
using ValueFunction = std::vector<double>;

class QTable {
public:
    QTable() = default;
    QTable(std::size_t n_states, std::size_t n_actions, double fill = 0.0)
        : n_states_(n_states), n_actions_(n_actions), q_(n_states * n_actions, fill) {}

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    double& operator()(StateIndex s, ActionIndex a) { return q_[s * n_actions_ + a]; }
    double operator()(StateIndex s, ActionIndex a) const { return q_[s * n_actions_ + a]; }
    std::span<const double> row(StateIndex s) const { return {q_.data() + s * n_actions_, n_actions_}; }
    const std::vector<double>& data() const noexcept { return q_; }

    bool operator==(const QTable&) const = default;

private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> q_;
};

struct IterationResult {
    ValueFunction value;
    QTable q;                   ///< Q table of the last backup
    std::size_t iterations = 0; ///< number of backups performed (k_u)
    double final_residual = 0.0;
};

/// Frozen set of posterior draws shared by every backup within a stage.
using KernelSample = std::vector<TransitionKernel>;

/// Q(s,a) = sigma(c(s,a,.) + gamma v, kernel(.|s,a)).
QTable exact_q(const MdpModel& model, const TransitionKernel& kernel, const ValueFunction& v,
               const InnerRiskSpec& inner);

/// Sampling estimator: sigma_i against each draw, then beta over the N values.
QTable estimate_q(const MdpModel& model, const KernelSample& draws, const ValueFunction& v,
                  const InnerRiskSpec& inner, const OuterRiskSpec& outer);

/// Draws `n` kernels from `post` with `seed`, then evaluates as above.
QTable estimate_q(const MdpModel& model, const DirichletPosterior& post, const ValueFunction& v,
                  const InnerRiskSpec& inner, const OuterRiskSpec& outer, std::size_t n, std::uint64_t seed);

/// v(s) = min_a q(s,a).
ValueFunction optimality_step(const QTable& q);

/// argmin_a q(s,a), lowest index on ties.
std::vector<ActionIndex> greedy_actions(const QTable& q);

/// Argmin action gets 1 - (1 - 1/|A|) eps, every other action eps/|A|.
Policy epsilon_greedy(const QTable& q, double epsilon);

/**
 * Iteration cap used by the value and policy iterations:
 * 4 * ceil( ln(2 C / ((1-gamma)^2 theta)) / ln(1/gamma) ), at least 4.
 */
std::size_t iteration_cap(double c_bar, double gamma, double theta);

using Backup = std::function<QTable(const ValueFunction&)>;

/**
 * Repeats v <- min_a backup(v)(s,a) until the sup-norm step falls below theta.
 * Throws IterationCapExceeded when `cap` backups do not reach the tolerance.
 */
IterationResult value_iteration(const Backup& backup, ValueFunction v0, double theta, std::size_t cap);

/// Value iteration with the exact backup against a fixed kernel, from v = 0.
IterationResult exact_value_iteration(const MdpModel& model, const TransitionKernel& kernel,
                                      const InnerRiskSpec& inner, double theta);

/// Fixed point of V <- [s -> sum_a pi(a|s) sigma(c(s,a,.) + gamma V, kernel(.|s,a))], from V = 0.
IterationResult policy_evaluation(const MdpModel& model, const TransitionKernel& kernel, const Policy& policy,
                                  const InnerRiskSpec& inner, double theta);

double sup_norm_distance(std::span<const double> a, std::span<const double> b);

} // namespace rsmdp
