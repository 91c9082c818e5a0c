#include "rsmdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rsmdp/errors.hpp"
#include "rsmdp/rng.hpp"

namespace rsmdp {

MdpModel::MdpModel(std::size_t n_states, std::size_t n_actions, std::vector<double> cost, double gamma)
    : n_states_(n_states), n_actions_(n_actions), cost_(std::move(cost)), gamma_(gamma), c_bar_(0.0) {
    if (n_states_ == 0 || n_actions_ == 0) throw InvalidArgument("MDP needs at least one state and one action");
    if (cost_.size() != n_states_ * n_actions_ * n_states_)
        throw InvalidArgument("cost table has " + std::to_string(cost_.size()) + " entries, expected " +
                              std::to_string(n_states_ * n_actions_ * n_states_));
    if (!(gamma_ > 0.0 && gamma_ < 1.0)) throw InvalidArgument("discount must lie in (0,1)");
    for (double c : cost_) {
        if (!std::isfinite(c)) throw InvalidArgument("cost table contains a non-finite entry");
        c_bar_ = std::max(c_bar_, std::abs(c));
    }
}

TransitionKernel::TransitionKernel(std::size_t n_states, std::size_t n_actions)
    : n_states_(n_states), n_actions_(n_actions), probs_(n_states * n_actions * n_states, 0.0) {}

TransitionKernel::TransitionKernel(std::size_t n_states, std::size_t n_actions, std::vector<double> probs)
    : n_states_(n_states), n_actions_(n_actions), probs_(std::move(probs)) {
    if (probs_.size() != n_states_ * n_actions_ * n_states_)
        throw InvalidArgument("kernel table has the wrong number of entries");
}

Policy::Policy(std::size_t n_states, std::size_t n_actions, std::vector<double> probs)
    : n_states_(n_states), n_actions_(n_actions), probs_(std::move(probs)) {
    if (probs_.size() != n_states_ * n_actions_) throw InvalidArgument("policy table has the wrong number of entries");
}

Policy Policy::uniform(std::size_t n_states, std::size_t n_actions) {
    return Policy(n_states, n_actions, std::vector<double>(n_states * n_actions, 1.0 / double(n_actions)));
}

Policy Policy::deterministic(std::size_t n_actions, const std::vector<ActionIndex>& actions) {
    std::vector<double> probs(actions.size() * n_actions, 0.0);
    for (std::size_t s = 0; s < actions.size(); ++s) {
        if (actions[s] >= n_actions) throw InvalidArgument("action index out of range");
        probs[s * n_actions + actions[s]] = 1.0;
    }
    return Policy(actions.size(), n_actions, std::move(probs));
}

std::vector<ActionIndex> Policy::greedy_actions() const {
    std::vector<ActionIndex> out(n_states_);
    for (std::size_t s = 0; s < n_states_; ++s) {
        auto r = row(s);
        out[s] = static_cast<ActionIndex>(std::max_element(r.begin(), r.end()) - r.begin());
    }
    return out;
}

bool Trajectory::is_chained() const {
    if (!steps.empty() && steps.front().state != start_state) return false;
    for (std::size_t t = 1; t < steps.size(); ++t)
        if (steps[t - 1].next_state != steps[t].state) return false;
    return true;
}

TransitionCounts::TransitionCounts(std::size_t n_states, std::size_t n_actions)
    : n_states_(n_states), n_actions_(n_actions), counts_(n_states * n_actions * n_states, 0) {}

std::uint64_t TransitionCounts::total() const { return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}); }

std::uint64_t TransitionCounts::pair_total(StateIndex s, ActionIndex a) const {
    auto first = counts_.begin() + static_cast<std::ptrdiff_t>((s * n_actions_ + a) * n_states_);
    return std::accumulate(first, first + static_cast<std::ptrdiff_t>(n_states_), std::uint64_t{0});
}

TransitionCounts& TransitionCounts::operator+=(const TransitionCounts& other) {
    if (other.n_states_ != n_states_ || other.n_actions_ != n_actions_)
        throw InvalidArgument("count tables have different dimensions");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
}

KernelReport validate_kernel(const TransitionKernel& kernel) {
    KernelReport report;
    const std::size_t ns = kernel.n_states();
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < kernel.n_actions(); ++a) {
            auto r = kernel.row(s, a);
            double sum = 0.0;
            for (std::size_t t = 0; t < ns; ++t) {
                if (r[t] < 0.0 || std::isnan(r[t]))
                    report.violations.push_back({ViolationKind::NegativeEntry, s, a, t, r[t]});
                sum += r[t];
            }
            if (!(std::abs(sum - 1.0) <= kRowSumTolerance))
                report.violations.push_back({ViolationKind::RowSumMismatch, s, a, 0, sum - 1.0});
        }
    }
    return report;
}

KernelReport validate_kernel(const MdpModel& model, const TransitionKernel& kernel) {
    if (kernel.n_states() != model.n_states() || kernel.n_actions() != model.n_actions())
        throw InvalidArgument("kernel dimensions do not match the model");
    return validate_kernel(kernel);
}

bool is_valid_policy(const Policy& policy) {
    for (std::size_t s = 0; s < policy.n_states(); ++s) {
        double sum = 0.0;
        for (double p : policy.row(s)) {
            if (!(p >= 0.0)) return false;
            sum += p;
        }
        if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) return false;
    }
    return true;
}

Trajectory simulate(const TransitionKernel& kernel, const Policy& policy, StateIndex start, std::size_t steps,
                    std::uint64_t seed) {
    if (start >= kernel.n_states()) throw InvalidStart(start);
    if (policy.n_states() != kernel.n_states() || policy.n_actions() != kernel.n_actions())
        throw InvalidArgument("policy dimensions do not match the kernel");
    Rng rng(seed);
    Trajectory traj;
    traj.start_state = start;
    traj.steps.reserve(steps);
    StateIndex s = start;
    for (std::size_t t = 0; t < steps; ++t) {
        const ActionIndex a = rng.categorical(policy.row(s));
        const StateIndex next = rng.categorical(kernel.row(s, a));
        traj.steps.push_back({s, a, next});
        s = next;
    }
    return traj;
}

TransitionCounts count_transitions(const Trajectory& traj, std::size_t n_states, std::size_t n_actions) {
    TransitionCounts counts(n_states, n_actions);
    for (const Step& st : traj.steps) {
        if (st.state >= n_states || st.next_state >= n_states || st.action >= n_actions)
            throw InvalidArgument("trajectory step out of range");
        counts.add(st.state, st.action, st.next_state);
    }
    return counts;
}

StateChain induced_chain(const TransitionKernel& kernel, const Policy& policy) {
    if (policy.n_states() != kernel.n_states() || policy.n_actions() != kernel.n_actions())
        throw InvalidArgument("policy dimensions do not match the kernel");
    const std::size_t ns = kernel.n_states();
    StateChain chain{ns, std::vector<double>(ns * ns, 0.0)};
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < kernel.n_actions(); ++a) {
            const double w = policy(s, a);
            if (w == 0.0) continue;
            auto r = kernel.row(s, a);
            for (std::size_t t = 0; t < ns; ++t) chain.probs[s * ns + t] += w * r[t];
        }
    }
    return chain;
}

namespace {

void step_chain(const StateChain& chain, const std::vector<double>& x, std::vector<double>& out) {
    const std::size_t n = chain.n_states;
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        if (x[s] == 0.0) continue;
        auto r = chain.row(s);
        for (std::size_t t = 0; t < n; ++t) out[t] += x[s] * r[t];
    }
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
    return d;
}

} // namespace

std::vector<double> stationary_distribution(const StateChain& chain, double tol, std::size_t max_iterations) {
    if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
    const std::size_t n = chain.n_states;
    if (n == 0 || chain.probs.size() != n * n) throw InvalidArgument("malformed state chain");

    std::vector<double> x(n, 1.0 / double(n));
    std::vector<double> xp(n);
    double residual = 0.0;
    for (std::size_t it = 0; it <= max_iterations; ++it) {
        step_chain(chain, x, xp);
        residual = l1_distance(xp, x);
        if (residual <= tol) {
            // renormalize so the mass is exactly one up to rounding
            const double total = std::accumulate(x.begin(), x.end(), 0.0);
            for (double& v : x) v /= total;
            return x;
        }
        for (std::size_t i = 0; i < n; ++i) x[i] = 0.5 * (x[i] + xp[i]);
    }
    throw NonConvergence(max_iterations, residual);
}

} // namespace rsmdp
