#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rsmdp {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;

/**
 * Finite discounted MDP: dense state/action indices, a cost table c(s,a,s')
 * and a discount factor. The cost bound c_bar = max |c(s,a,s')| is cached at
 * construction.
 */
class MdpModel {
public:
    /// `cost` is laid out as [s][a][s'] and must hold n_states*n_actions*n_states finite entries.
    MdpModel(std::size_t n_states, std::size_t n_actions, std::vector<double> cost, double gamma);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    double gamma() const noexcept { return gamma_; }
    double c_bar() const noexcept { return c_bar_; }

    double cost(StateIndex s, ActionIndex a, StateIndex next) const {
        return cost_[(s * n_actions_ + a) * n_states_ + next];
    }
    std::span<const double> cost_row(StateIndex s, ActionIndex a) const {
        return {cost_.data() + (s * n_actions_ + a) * n_states_, n_states_};
    }
    const std::vector<double>& cost_table() const noexcept { return cost_; }

    /// Sup-norm bound on any value function: c_bar / (1 - gamma).
    double value_bound() const noexcept { return c_bar_ / (1.0 - gamma_); }

private:
    std::size_t n_states_;
    std::size_t n_actions_;
    std::vector<double> cost_;
    double gamma_;
    double c_bar_;
};

/// Row-stochastic table q(s'|s,a). Also used for sampled posterior draws.
class TransitionKernel {
public:
    TransitionKernel() = default;
    /// Zero-filled table; callers fill rows before use.
    TransitionKernel(std::size_t n_states, std::size_t n_actions);
    TransitionKernel(std::size_t n_states, std::size_t n_actions, std::vector<double> probs);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }

    std::span<const double> row(StateIndex s, ActionIndex a) const {
        return {probs_.data() + (s * n_actions_ + a) * n_states_, n_states_};
    }
    std::span<double> row(StateIndex s, ActionIndex a) {
        return {probs_.data() + (s * n_actions_ + a) * n_states_, n_states_};
    }
    double operator()(StateIndex s, ActionIndex a, StateIndex next) const {
        return probs_[(s * n_actions_ + a) * n_states_ + next];
    }
    const std::vector<double>& data() const noexcept { return probs_; }

    bool operator==(const TransitionKernel&) const = default;

private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> probs_;
};

/// Stochastic Markov policy pi(a|s).
class Policy {
public:
    Policy() = default;
    Policy(std::size_t n_states, std::size_t n_actions, std::vector<double> probs);

    static Policy uniform(std::size_t n_states, std::size_t n_actions);
    /// Point mass on actions[s] in every state.
    static Policy deterministic(std::size_t n_actions, const std::vector<ActionIndex>& actions);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    std::span<const double> row(StateIndex s) const { return {probs_.data() + s * n_actions_, n_actions_}; }
    double operator()(StateIndex s, ActionIndex a) const { return probs_[s * n_actions_ + a]; }
    const std::vector<double>& data() const noexcept { return probs_; }

    /// Most probable action per state (lowest index on ties).
    std::vector<ActionIndex> greedy_actions() const;

    bool operator==(const Policy&) const = default;

private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> probs_;
};

struct Step {
    StateIndex state;
    ActionIndex action;
    StateIndex next_state;
    bool operator==(const Step&) const = default;
};

struct Trajectory {
    StateIndex start_state = 0;
    std::vector<Step> steps;

    StateIndex last_state() const { return steps.empty() ? start_state : steps.back().next_state; }
    /// True when next_state of each step equals state of the following step.
    bool is_chained() const;
    bool operator==(const Trajectory&) const = default;
};

/// Occurrence counts m(s,a,s').
class TransitionCounts {
public:
    TransitionCounts(std::size_t n_states, std::size_t n_actions);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    std::uint64_t operator()(StateIndex s, ActionIndex a, StateIndex next) const {
        return counts_[(s * n_actions_ + a) * n_states_ + next];
    }
    void add(StateIndex s, ActionIndex a, StateIndex next, std::uint64_t n = 1) {
        counts_[(s * n_actions_ + a) * n_states_ + next] += n;
    }
    std::uint64_t total() const;
    std::uint64_t pair_total(StateIndex s, ActionIndex a) const;
    const std::vector<std::uint64_t>& data() const noexcept { return counts_; }

    TransitionCounts& operator+=(const TransitionCounts& other);

private:
    std::size_t n_states_;
    std::size_t n_actions_;
    std::vector<std::uint64_t> counts_;
};

/// Action-marginalized chain P(s'|s) = sum_a pi(a|s) q(s'|s,a).
struct StateChain {
    std::size_t n_states = 0;
    std::vector<double> probs;

    std::span<const double> row(StateIndex s) const { return {probs.data() + s * n_states, n_states}; }
};

// ---------------------------------------------------------------------------
// kernel validation

enum class ViolationKind { NegativeEntry, RowSumMismatch };

struct KernelViolation {
    ViolationKind kind;
    StateIndex state;
    ActionIndex action;
    StateIndex next_state; ///< offending entry for NegativeEntry; unused otherwise
    double deviation;      ///< row sum minus one, or the negative entry value
};

struct KernelReport {
    std::vector<KernelViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

constexpr double kRowSumTolerance = 1e-12;

/// Checks that every row is a probability vector within 1e-12.
/// Throws InvalidArgument when the dimensions disagree with `model`.
KernelReport validate_kernel(const MdpModel& model, const TransitionKernel& kernel);
KernelReport validate_kernel(const TransitionKernel& kernel);

/// Policy rows must be probability vectors within 1e-12.
bool is_valid_policy(const Policy& policy);

// ---------------------------------------------------------------------------
// simulation and chain utilities

/// Rolls out `steps` transitions from `start` under `policy` against `kernel`.
Trajectory simulate(const TransitionKernel& kernel, const Policy& policy, StateIndex start, std::size_t steps,
                    std::uint64_t seed);

TransitionCounts count_transitions(const Trajectory& traj, std::size_t n_states, std::size_t n_actions);

StateChain induced_chain(const TransitionKernel& kernel, const Policy& policy);

constexpr double kStationaryTolerance = 1e-10;
constexpr std::size_t kStationaryIterationCap = 1'000'000;

/**
 * Stationary distribution mu = mu P, starting from the uniform vector.
 *
 * Iterates the lazy chain (I + P) / 2. Its iterates are binomially weighted
 * averages of the plain power iterates, so periodic chains converge, and the
 * limit is the Cesàro limit of P from the uniform start. Stops when
 * ||mu P - mu||_1 <= tol; throws NonConvergence after the iteration cap.
 */
std::vector<double> stationary_distribution(const StateChain& chain, double tol = kStationaryTolerance,
                                            std::size_t max_iterations = kStationaryIterationCap);

} // namespace rsmdp
