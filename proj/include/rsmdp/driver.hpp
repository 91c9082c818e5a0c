#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsmdp/bayes.hpp"
#include "rsmdp/bellman.hpp"
#include "rsmdp/errors.hpp"
#include "rsmdp/mdp.hpp"
#include "rsmdp/risk.hpp"

namespace rsmdp {

/// eps_u = max(floor, start * decay^(u-1)) for stage u >= 1.
struct EpsilonSchedule {
    double start = 0.3;
    double decay = 0.9;
    double floor = 0.05;

    double at(std::size_t stage) const;
    void validate() const;
};

constexpr double kMinEpsilonFloor = 0.001;

enum class SchedulerKind { FixedDelta, SweepBased };

struct TrainingConfig {
    std::size_t stages = 20;
    std::size_t delta = 100;
    SchedulerKind scheduler = SchedulerKind::FixedDelta;
    double theta = 0.01;
    std::size_t mc_samples = 200;
    EpsilonSchedule epsilon;
    std::uint64_t seed = 0;
    InnerRiskSpec inner = RiskSpec::mean();
    OuterRiskSpec outer = RiskSpec::mean();
    std::vector<double> initial; ///< empty means uniform
    std::optional<DirichletPosterior> prior; ///< empty means uniform_prior
    std::size_t sweep_step_cap = 100000; ///< longest stage the sweep scheduler may run

    void validate(std::size_t n_states, std::size_t n_actions) const;
};

/**
 * Stage boundaries for the sweep-based scheduler. Each observation of a pair not yet
 * known in the current sweep closes a stage; once every pair is known the sweep closes
 * and the known set resets.
 */
class SweepScheduler {
public:
    enum class Decision { Continue, CloseStage, CloseSweep };

    SweepScheduler(std::size_t n_states, std::size_t n_actions);

    Decision observe(StateIndex s, ActionIndex a);
    /// Report the iteration count of a finished stage.
    void record_stage(std::size_t iterations, bool closes_sweep);

    bool known(StateIndex s, ActionIndex a) const { return known_[s * n_actions_ + a]; }
    std::size_t known_count() const noexcept { return known_count_; }
    std::size_t sweeps_completed() const noexcept { return sweeps_; }
    /// True once a completed sweep had every stage converge within one iteration.
    bool converged() const noexcept { return converged_; }

private:
    std::size_t n_actions_;
    std::vector<bool> known_;
    std::size_t known_count_ = 0;
    std::size_t sweeps_ = 0;
    bool all_single_ = true;
    bool converged_ = false;
};

struct StageResult {
    std::size_t stage = 0;
    std::size_t steps = 0;      ///< transitions observed in this stage
    std::size_t steps_seen = 0; ///< cumulative transitions
    std::size_t iterations = 0;
    double final_residual = 0.0;
    double epsilon = 0.0;
    double wall_ms = 0.0;
    std::size_t sweep = 0; ///< sweep index under the sweep scheduler
    ValueFunction value;
    Policy policy;
    std::map<std::string, double> metrics;
};

/// Mutable training state carried between stages.
struct TrainingState {
    DirichletPosterior posterior;
    Policy policy;
    ValueFunction value;
    StateIndex state = 0;
    std::size_t steps_seen = 0;
    std::optional<SweepScheduler> sweep;
};

struct TrainingFailure {
    std::size_t stage = 0;
    ErrorCode code = ErrorCode::Internal;
    std::string message;
};

struct TrainingLog {
    TrainingConfig config;
    std::vector<StageResult> stages;
    DirichletPosterior posterior;
    Policy policy;
    StateIndex initial_state = 0;
    bool sweep_converged = false;
    std::optional<TrainingFailure> failure;
};

/// Initial state: uniform policy, zero value, prior posterior, start drawn from the initial distribution.
TrainingState initial_training_state(const MdpModel& model, const TrainingConfig& cfg);

/// One stage: rollout, conjugate update, value iteration with the estimated backup, policy refresh.
StageResult run_stage(const MdpModel& model, const TransitionKernel& env_kernel, TrainingState& state,
                      const TrainingConfig& cfg, std::size_t stage);

using StageHook = std::function<void(StageResult&, const TrainingState&)>;

/**
 * Runs cfg.stages stages into `log`. Completed stages stay in `log` when a stage throws;
 * the failure is recorded and the error rethrown.
 */
void run_training(const MdpModel& model, const TransitionKernel& env_kernel, const TrainingConfig& cfg,
                  TrainingLog& log, const StageHook& hook = {});

TrainingLog run_training(const MdpModel& model, const TransitionKernel& env_kernel, const TrainingConfig& cfg,
                         const StageHook& hook = {});

} // namespace rsmdp
