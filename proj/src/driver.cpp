#include "rsmdp/driver.hpp"

#include <chrono>
#include <cmath>

#include "rsmdp/rng.hpp"

namespace rsmdp {

double EpsilonSchedule::at(std::size_t stage) const {
    const double raw = start * std::pow(decay, double(stage > 0 ? stage - 1 : 0));
    return std::max(floor, raw);
}

void EpsilonSchedule::validate() const {
    if (!(start >= 0.0 && start <= 1.0)) throw InvalidArgument("epsilon start must lie in [0,1]");
    if (!(decay >= 0.0 && decay <= 1.0)) throw InvalidArgument("epsilon decay must lie in [0,1]");
    if (!(floor >= kMinEpsilonFloor && floor <= 1.0)) throw InvalidArgument("epsilon floor must lie in [0.001,1]");
}

void TrainingConfig::validate(std::size_t n_states, std::size_t n_actions) const {
    if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
    if (delta < 1) throw InvalidArgument("stage length must be at least 1");
    if (mc_samples < 1) throw InvalidArgument("mc_samples must be at least 1");
    if (sweep_step_cap < 1) throw InvalidArgument("sweep step cap must be at least 1");
    epsilon.validate();
    inner.validate();
    outer.validate();
    if (!initial.empty()) {
        if (initial.size() != n_states) throw InvalidArgument("initial distribution has the wrong length");
        double total = 0.0;
        for (double p : initial) {
            if (!(p >= 0.0)) throw InvalidArgument("initial distribution has a negative entry");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("initial distribution does not sum to one");
    }
    if (prior && (prior->n_states() != n_states || prior->n_actions() != n_actions))
        throw InvalidArgument("prior does not match the model");
}

SweepScheduler::SweepScheduler(std::size_t n_states, std::size_t n_actions)
    : n_actions_(n_actions), known_(n_states * n_actions, false) {
    if (n_states == 0 || n_actions == 0) throw InvalidArgument("sweep scheduler needs a nonempty pair set");
}

SweepScheduler::Decision SweepScheduler::observe(StateIndex s, ActionIndex a) {
    const std::size_t k = s * n_actions_ + a;
    if (known_[k]) return Decision::Continue;
    known_[k] = true;
    if (++known_count_ < known_.size()) return Decision::CloseStage;
    std::fill(known_.begin(), known_.end(), false);
    known_count_ = 0;
    ++sweeps_;
    return Decision::CloseSweep;
}

void SweepScheduler::record_stage(std::size_t iterations, bool closes_sweep) {
    if (iterations > 1) all_single_ = false;
    if (closes_sweep) {
        if (all_single_) converged_ = true;
        all_single_ = true;
    }
}

TrainingState initial_training_state(const MdpModel& model, const TrainingConfig& cfg) {
    const std::size_t ns = model.n_states(), na = model.n_actions();
    TrainingState st;
    st.posterior = cfg.prior ? *cfg.prior : uniform_prior(ns, na);
    st.policy = Policy::uniform(ns, na);
    st.value.assign(ns, 0.0);
    Rng rng(split_seed(cfg.seed, "initial-state"));
    if (cfg.initial.empty()) st.state = rng.below(ns);
    else st.state = rng.categorical(cfg.initial);
    if (cfg.scheduler == SchedulerKind::SweepBased) st.sweep.emplace(ns, na);
    return st;
}

StageResult run_stage(const MdpModel& model, const TransitionKernel& env_kernel, TrainingState& state,
                      const TrainingConfig& cfg, std::size_t stage) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t ns = model.n_states(), na = model.n_actions();
    StageResult res;
    res.stage = stage;

    TransitionCounts counts(ns, na);
    bool closes_sweep = false;
    if (cfg.scheduler == SchedulerKind::FixedDelta) {
        const Trajectory traj =
            simulate(env_kernel, state.policy, state.state, cfg.delta, split_seed(cfg.seed, "rollout", stage));
        counts = count_transitions(traj, ns, na);
        state.state = traj.last_state();
        res.steps = traj.steps.size();
    } else {
        if (!state.sweep) state.sweep.emplace(ns, na);
        Rng rng(split_seed(cfg.seed, "rollout", stage));
        StateIndex s = state.state;
        if (s >= ns) throw InvalidStart(s);
        for (std::size_t t = 0; t < cfg.sweep_step_cap; ++t) {
            const ActionIndex a = rng.categorical(state.policy.row(s));
            const StateIndex next = rng.categorical(env_kernel.row(s, a));
            counts.add(s, a, next);
            ++res.steps;
            const auto decision = state.sweep->observe(s, a);
            s = next;
            if (decision == SweepScheduler::Decision::Continue) continue;
            closes_sweep = decision == SweepScheduler::Decision::CloseSweep;
            break;
        }
        state.state = s;
    }
    state.posterior = posterior_update(state.posterior, counts);
    state.steps_seen += res.steps;
    res.steps_seen = state.steps_seen;

    const KernelSample draws = sample_kernels(state.posterior, cfg.mc_samples, split_seed(cfg.seed, "posterior-draws", stage));
    Backup backup = [&](const ValueFunction& v) { return estimate_q(model, draws, v, cfg.inner, cfg.outer); };
    IterationResult it =
        value_iteration(backup, state.value, cfg.theta, iteration_cap(model.c_bar(), model.gamma(), cfg.theta));

    res.epsilon = cfg.epsilon.at(stage);
    state.value = it.value;
    state.policy = epsilon_greedy(it.q, res.epsilon);
    res.iterations = it.iterations;
    res.final_residual = it.final_residual;
    res.value = std::move(it.value);
    res.policy = state.policy;
    if (state.sweep) {
        state.sweep->record_stage(res.iterations, closes_sweep);
        res.sweep = state.sweep->sweeps_completed();
    }
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

void run_training(const MdpModel& model, const TransitionKernel& env_kernel, const TrainingConfig& cfg,
                  TrainingLog& log, const StageHook& hook) {
    validate_kernel(model, env_kernel);
    cfg.validate(model.n_states(), model.n_actions());
    log = TrainingLog{};
    log.config = cfg;
    TrainingState state = initial_training_state(model, cfg);
    log.initial_state = state.state;
    log.posterior = state.posterior;
    log.policy = state.policy;
    for (std::size_t u = 1; u <= cfg.stages; ++u) {
        try {
            StageResult res = run_stage(model, env_kernel, state, cfg, u);
            if (hook) hook(res, state);
            log.stages.push_back(std::move(res));
            log.posterior = state.posterior;
            log.policy = state.policy;
        } catch (const Error& e) {
            log.failure = TrainingFailure{u, e.code(), e.what()};
            throw;
        }
        if (state.sweep && state.sweep->converged()) {
            log.sweep_converged = true;
            break;
        }
    }
}

TrainingLog run_training(const MdpModel& model, const TransitionKernel& env_kernel, const TrainingConfig& cfg,
                         const StageHook& hook) {
    TrainingLog log;
    run_training(model, env_kernel, cfg, log, hook);
    return log;
}

} // namespace rsmdp
