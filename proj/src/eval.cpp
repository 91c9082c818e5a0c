#include "rsmdp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsmdp/rng.hpp"

namespace rsmdp {

OracleSolution oracle_solve(const EnvBundle& env, const InnerRiskSpec& inner, double theta) {
    IterationResult it = exact_value_iteration(env.model, env.kernel, inner, theta);
    OracleSolution sol;
    sol.greedy = greedy_actions(it.q);
    sol.policy = Policy::deterministic(env.model.n_actions(), sol.greedy);
    sol.value = std::move(it.value);
    sol.q = std::move(it.q);
    sol.iterations = it.iterations;
    return sol;
}

ValueFunction policy_value(const EnvBundle& env, const Policy& policy, const InnerRiskSpec& inner, double theta) {
    return policy_evaluation(env.model, env.kernel, policy, inner, theta).value;
}

double stationary_weighted_value(const EnvBundle& env, const Policy& policy, const InnerRiskSpec& inner, double theta) {
    const ValueFunction v = policy_value(env, policy, inner, theta);
    const std::vector<double> mu = stationary_distribution(induced_chain(env.kernel, policy));
    double total = 0.0;
    for (std::size_t s = 0; s < v.size(); ++s) total += mu[s] * v[s];
    return total;
}

RobustnessReport robustness_sweep(const Policy& policy, const std::vector<EnvBundle>& deployments,
                                  const InnerRiskSpec& inner, double theta) {
    if (deployments.empty()) throw InvalidArgument("robustness sweep needs at least one deployment");
    RobustnessReport rep;
    for (const auto& env : deployments) {
        if (env.model.n_states() != policy.n_states() || env.model.n_actions() != policy.n_actions())
            throw InvalidArgument("deployment dimensions do not match the policy");
        rep.labels.push_back(env.name);
        rep.values.push_back(stationary_weighted_value(env, policy, inner, theta));
    }
    rep.worst = *std::max_element(rep.values.begin(), rep.values.end());
    return rep;
}

std::vector<EnvBundle> deployment_envs(const EnvSpec& spec, const std::vector<double>& grid) {
    std::vector<EnvBundle> out;
    for (double g : grid) {
        EnvBundle env = spec.perturbed(g).build();
        std::ostringstream name;
        name << spec.perturbation_name() << '=' << g;
        env.name = name.str();
        out.push_back(std::move(env));
    }
    return out;
}

double LearningRateSchedule::at(std::uint64_t visits) const {
    return scale / std::pow(1.0 + double(visits), exponent);
}

QLearningResult q_learning_baseline(const EnvBundle& env, const QLearningConfig& cfg) {
    if (cfg.steps < 1) throw InvalidArgument("q-learning needs at least one step");
    if (cfg.stage_length < 1) throw InvalidArgument("stage length must be at least 1");
    cfg.epsilon.validate();
    const MdpModel& m = env.model;
    const std::size_t ns = m.n_states(), na = m.n_actions();
    QLearningResult res;
    res.q = QTable(ns, na);
    std::vector<std::uint64_t> visits(ns * na, 0);

    Rng rng(split_seed(cfg.seed, "q-learning"));
    StateIndex s = cfg.initial.empty() ? rng.below(ns) : rng.categorical(cfg.initial);
    std::vector<double> behaviour(na);
    for (std::size_t t = 0; t < cfg.steps; ++t) {
        const double eps = cfg.epsilon.at(t / cfg.stage_length + 1);
        auto qrow = res.q.row(s);
        const auto best = std::size_t(std::min_element(qrow.begin(), qrow.end()) - qrow.begin());
        std::fill(behaviour.begin(), behaviour.end(), eps / double(na));
        behaviour[best] = 1.0 - eps / double(na) * double(na - 1);
        const ActionIndex a = rng.categorical(behaviour);
        const StateIndex next = rng.categorical(env.kernel.row(s, a));
        const double eta = cfg.learning_rate.at(visits[s * na + a]++);
        auto nrow = res.q.row(next);
        const double target = m.cost(s, a, next) + m.gamma() * *std::min_element(nrow.begin(), nrow.end());
        res.q(s, a) = (1.0 - eta) * res.q(s, a) + eta * target;
        s = next;
        if (cfg.log_every > 0 && (t + 1) % cfg.log_every == 0) {
            res.logged_steps.push_back(t + 1);
            res.logged_values.push_back(stationary_weighted_value(
                env, Policy::deterministic(na, greedy_actions(res.q)), RiskSpec::mean(), cfg.eval_theta));
        }
    }
    res.policy = Policy::deterministic(na, greedy_actions(res.q));
    return res;
}

} // namespace rsmdp
