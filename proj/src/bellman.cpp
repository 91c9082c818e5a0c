#include "rsmdp/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsmdp/errors.hpp"

namespace rsmdp {

namespace {

void check_dims(const MdpModel& model, std::size_t ns, std::size_t na, std::size_t nv) {
    if (ns != model.n_states() || na != model.n_actions() || nv != model.n_states())
        throw InvalidArgument("dimensions do not match the model");
}

// c(s,a,.) + gamma v
void backup_target(const MdpModel& model, StateIndex s, ActionIndex a, const ValueFunction& v,
                   std::vector<double>& out) {
    auto c = model.cost_row(s, a);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = c[t] + model.gamma() * v[t];
}

// Same arithmetic as cvar_discrete, with the descending order precomputed
// (the values are shared by every posterior draw).
double cvar_presorted(std::span<const double> values, std::span<const std::size_t> order, std::span<const double> probs,
                      double alpha) {
    if (alpha == 1.0) {
        double mean = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) mean += values[i] * probs[i];
        return mean;
    }
    double remaining = alpha, total = 0.0;
    for (std::size_t k = 0; k < order.size() && remaining > 0.0; ++k) {
        const std::size_t i = order[k];
        const double w = std::min(probs[i], remaining);
        total += w * values[i];
        remaining -= w;
    }
    return total / alpha;
}

} // namespace

double sup_norm_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

QTable exact_q(const MdpModel& model, const TransitionKernel& kernel, const ValueFunction& v,
               const InnerRiskSpec& inner) {
    check_dims(model, kernel.n_states(), kernel.n_actions(), v.size());
    const std::size_t ns = model.n_states(), na = model.n_actions();
    QTable q(ns, na);
    std::vector<double> target(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
            backup_target(model, s, a, v, target);
            q(s, a) = sigma_eval(inner, target, kernel.row(s, a));
        }
    }
    return q;
}

QTable estimate_q(const MdpModel& model, const KernelSample& draws, const ValueFunction& v,
                  const InnerRiskSpec& inner, const OuterRiskSpec& outer) {
    if (draws.empty()) throw InvalidArgument("estimate_q needs at least one posterior draw");
    for (const auto& k : draws) check_dims(model, k.n_states(), k.n_actions(), v.size());
    inner.validate();
    outer.validate();

    const std::size_t ns = model.n_states(), na = model.n_actions(), n = draws.size();
    QTable q(ns, na);
    std::vector<double> target(ns), sigma(n);
    std::vector<std::size_t> order(ns);
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
            backup_target(model, s, a, v, target);
            if (inner.kind == RiskKind::CVaR) {
                std::iota(order.begin(), order.end(), std::size_t{0});
                std::stable_sort(order.begin(), order.end(),
                                 [&](std::size_t x, std::size_t y) { return target[x] > target[y]; });
                for (std::size_t i = 0; i < n; ++i)
                    sigma[i] = cvar_presorted(target, order, draws[i].row(s, a), inner.alpha);
            } else {
                for (std::size_t i = 0; i < n; ++i) sigma[i] = sigma_eval(inner, target, draws[i].row(s, a));
            }
            q(s, a) = beta_eval(outer, sigma);
        }
    }
    return q;
}

QTable estimate_q(const MdpModel& model, const DirichletPosterior& post, const ValueFunction& v,
                  const InnerRiskSpec& inner, const OuterRiskSpec& outer, std::size_t n, std::uint64_t seed) {
    return estimate_q(model, sample_kernels(post, n, seed), v, inner, outer);
}

ValueFunction optimality_step(const QTable& q) {
    ValueFunction v(q.n_states());
    for (std::size_t s = 0; s < q.n_states(); ++s) {
        auto r = q.row(s);
        v[s] = *std::min_element(r.begin(), r.end());
    }
    return v;
}

std::vector<ActionIndex> greedy_actions(const QTable& q) {
    std::vector<ActionIndex> out(q.n_states());
    for (std::size_t s = 0; s < q.n_states(); ++s) {
        auto r = q.row(s);
        out[s] = static_cast<ActionIndex>(std::min_element(r.begin(), r.end()) - r.begin());
    }
    return out;
}

Policy epsilon_greedy(const QTable& q, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in [0,1]");
    const std::size_t ns = q.n_states(), na = q.n_actions();
    const double other = epsilon / double(na);
    const double best = 1.0 - other * double(na - 1);
    const auto argmin = greedy_actions(q);
    std::vector<double> probs(ns * na, other);
    for (std::size_t s = 0; s < ns; ++s) probs[s * na + argmin[s]] = best;
    return Policy(ns, na, std::move(probs));
}

std::size_t iteration_cap(double c_bar, double gamma, double theta) {
    if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
    const double ratio = 2.0 * c_bar / ((1.0 - gamma) * (1.0 - gamma) * theta);
    double k = ratio > 1.0 ? std::ceil(std::log(ratio) / std::log(1.0 / gamma)) : 1.0;
    k = std::max(k, 1.0);
    return 4 * static_cast<std::size_t>(k);
}

IterationResult value_iteration(const Backup& backup, ValueFunction v0, double theta, std::size_t cap) {
    if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
    IterationResult res;
    res.value = std::move(v0);
    for (std::size_t k = 1; k <= cap; ++k) {
        res.q = backup(res.value);
        ValueFunction next = optimality_step(res.q);
        res.final_residual = sup_norm_distance(next, res.value);
        res.value = std::move(next);
        res.iterations = k;
        if (res.final_residual < theta) return res;
    }
    throw IterationCapExceeded(cap, res.final_residual);
}

IterationResult exact_value_iteration(const MdpModel& model, const TransitionKernel& kernel,
                                      const InnerRiskSpec& inner, double theta) {
    Backup backup = [&](const ValueFunction& v) { return exact_q(model, kernel, v, inner); };
    return value_iteration(backup, ValueFunction(model.n_states(), 0.0), theta,
                           iteration_cap(model.c_bar(), model.gamma(), theta));
}

IterationResult policy_evaluation(const MdpModel& model, const TransitionKernel& kernel, const Policy& policy,
                                  const InnerRiskSpec& inner, double theta) {
    if (!(theta > 0.0)) throw InvalidArgument("theta must be positive");
    if (policy.n_states() != model.n_states() || policy.n_actions() != model.n_actions())
        throw InvalidArgument("policy dimensions do not match the model");
    const std::size_t ns = model.n_states(), na = model.n_actions();
    const std::size_t cap = iteration_cap(model.c_bar(), model.gamma(), theta);
    IterationResult res;
    res.value.assign(ns, 0.0);
    res.q = QTable(ns, na);
    std::vector<double> target(ns);
    ValueFunction next(ns);
    for (std::size_t k = 1; k <= cap; ++k) {
        for (std::size_t s = 0; s < ns; ++s) {
            double acc = 0.0;
            for (std::size_t a = 0; a < na; ++a) {
                const double w = policy(s, a);
                backup_target(model, s, a, res.value, target);
                const double qa = sigma_eval(inner, target, kernel.row(s, a));
                res.q(s, a) = qa;
                if (w != 0.0) acc += w * qa;
            }
            next[s] = acc;
        }
        res.final_residual = sup_norm_distance(next, res.value);
        std::swap(res.value, next);
        res.iterations = k;
        if (res.final_residual < theta) return res;
    }
    throw IterationCapExceeded(cap, res.final_residual);
}

} // namespace rsmdp
