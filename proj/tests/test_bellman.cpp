#include "doctest.h"

#include <cmath>
#include <random>

#include "rsmdp/bellman.hpp"
#include "rsmdp/envs.hpp"
#include "rsmdp/errors.hpp"

using namespace rsmdp;

namespace {

struct Instance {
    MdpModel model;
    TransitionKernel kernel;
};

Instance random_instance(std::mt19937_64& g, std::size_t ns, std::size_t na, double gamma = 0.9) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> cost(ns * na * ns), probs(ns * na * ns);
    for (auto& c : cost) c = u(g);
    for (std::size_t r = 0; r < ns * na; ++r) {
        double t = 0.0;
        for (std::size_t k = 0; k < ns; ++k) t += probs[r * ns + k] = e(g);
        for (std::size_t k = 0; k < ns; ++k) probs[r * ns + k] /= t;
    }
    return {MdpModel(ns, na, cost, gamma), TransitionKernel(ns, na, probs)};
}

// V = (I - gamma P_pi)^{-1} c_pi by Gaussian elimination with partial pivoting
std::vector<double> solve_mean_policy(const Instance& in, const Policy& pi) {
    const std::size_t n = in.model.n_states();
    std::vector<double> A(n * n, 0.0), b(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        A[s * n + s] = 1.0;
        for (std::size_t a = 0; a < in.model.n_actions(); ++a)
            for (std::size_t t = 0; t < n; ++t) {
                const double w = pi(s, a) * in.kernel(s, a, t);
                A[s * n + t] -= in.model.gamma() * w;
                b[s] += w * in.model.cost(s, a, t);
            }
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r * n + c]) > std::abs(A[piv * n + c])) piv = r;
        for (std::size_t k = 0; k < n; ++k) std::swap(A[c * n + k], A[piv * n + k]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = A[r * n + c] / A[c * n + c];
            for (std::size_t k = 0; k < n; ++k) A[r * n + k] -= f * A[c * n + k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t r = 0; r < n; ++r) b[r] /= A[r * n + r];
    return b;
}

} // namespace

TEST_CASE("exact backup on small instances") {
    MdpModel one(1, 1, {1.0}, 0.9);
    TransitionKernel k1(1, 1, {1.0});
    CHECK(exact_q(one, k1, {0.0}, RiskSpec::mean())(0, 0) == 1.0);

    MdpModel two(2, 1, {0, 0, 0, 0}, 0.9);
    TransitionKernel k2(2, 1, {0.9, 0.1, 0.5, 0.5});
    CHECK(exact_q(two, k2, {0.0, 10.0}, RiskSpec::mean())(0, 0) == doctest::Approx(0.9));
    CHECK(exact_q(two, k2, {0.0, 10.0}, RiskSpec::cvar(0.5))(0, 0) == doctest::Approx(1.8));
}

TEST_CASE("optimality step and greedy actions") {
    QTable q(3, 3);
    const double rows[3][3] = {{0.5, 0.2, 0.9}, {1, 1, 1}, {3, -1, -1}};
    for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t a = 0; a < 3; ++a) q(s, a) = rows[s][a];
    const auto v = optimality_step(q);
    CHECK(v[0] == 0.2);
    CHECK(v[1] == 1.0);
    CHECK(greedy_actions(q) == std::vector<ActionIndex>{1, 0, 1});

    QTable single(2, 1);
    single(0, 0) = 4;
    single(1, 0) = -2;
    CHECK(optimality_step(single) == ValueFunction{4, -2});
}

TEST_CASE("epsilon-greedy rows") {
    QTable q(1, 3);
    q(0, 0) = 0.5;
    q(0, 1) = 0.2;
    q(0, 2) = 0.9;
    const auto p = epsilon_greedy(q, 0.3);
    CHECK(p(0, 0) == doctest::Approx(0.1));
    CHECK(p(0, 1) == doctest::Approx(0.8));
    CHECK(p(0, 2) == doctest::Approx(0.1));
    CHECK(is_valid_policy(p));
    CHECK(epsilon_greedy(q, 0.0)(0, 1) == 1.0);
    const auto uniform = epsilon_greedy(q, 1.0);
    for (double x : uniform.data()) CHECK(x == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(epsilon_greedy(q, 1.5), InvalidArgument);
}

TEST_CASE("value iteration on a geometric series") {
    MdpModel one(1, 1, {1.0}, 0.9);
    TransitionKernel k(1, 1, {1.0});
    const auto r = exact_value_iteration(one, k, RiskSpec::mean(), 0.01);
    CHECK(std::abs(r.value[0] - 10.0) <= 0.1);
    CHECK(r.final_residual < 0.01);

    Backup b = [&](const ValueFunction& v) { return exact_q(one, k, v, RiskSpec::mean()); };
    const auto fixed = value_iteration(b, {10.0}, 0.01, 10);
    CHECK(fixed.iterations == 1);

    CHECK_THROWS_AS(value_iteration(b, {0.0}, 1e-12, 3), IterationCapExceeded);
}

TEST_CASE("iteration cap formula") {
    // 4 * ceil(ln(2 / (0.01 * 0.01)) / ln(1/0.9)) = 4 * ceil(94.0) ...
    const double k = std::ceil(std::log(2.0 / (0.01 * 0.01)) / std::log(1.0 / 0.9));
    CHECK(iteration_cap(1.0, 0.9, 0.01) == 4 * std::size_t(k));
    CHECK(iteration_cap(0.0, 0.9, 0.01) == 4);
}

TEST_CASE("fixed-point error is within theta/(1-gamma)") {
    std::mt19937_64 g(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto in = random_instance(g, 4, 3);
        for (const RiskSpec& inner : {RiskSpec::mean(), RiskSpec::cvar(0.4)}) {
            const auto coarse = exact_value_iteration(in.model, in.kernel, inner, 0.01);
            const auto fine = exact_value_iteration(in.model, in.kernel, inner, 1e-13);
            CHECK(sup_norm_distance(coarse.value, fine.value) <= 0.01 / 0.1);
            for (double x : coarse.value) CHECK(std::abs(x) <= in.model.value_bound() + 1e-9);
        }
    }
}

TEST_CASE("policy evaluation") {
    MdpModel one(1, 2, {1.0, 1.0}, 0.9);
    TransitionKernel k(1, 2, {1.0, 1.0});
    const auto v = policy_evaluation(one, k, Policy::uniform(1, 2), RiskSpec::mean(), 1e-6);
    CHECK(std::abs(v.value[0] - 10.0) <= 1e-5);

    std::mt19937_64 g(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto in = random_instance(g, 2, 2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double p0 = u(g), p1 = u(g);
        Policy pi(2, 2, {p0, 1 - p0, p1, 1 - p1});
        const auto exact = solve_mean_policy(in, pi);
        const auto r = policy_evaluation(in.model, in.kernel, pi, RiskSpec::mean(), 1e-6);
        CHECK(sup_norm_distance(r.value, exact) <= 1e-6 / 0.1);

        // deterministic policy: value iteration restricted to the chosen action
        Policy det = Policy::deterministic(2, {1, 0});
        const auto pv = policy_evaluation(in.model, in.kernel, det, RiskSpec::cvar(0.5), 1e-10);
        ValueFunction w(2, 0.0);
        for (int it = 0; it < 2000; ++it) {
            const auto q = exact_q(in.model, in.kernel, w, RiskSpec::cvar(0.5));
            w = {q(0, 1), q(1, 0)};
        }
        CHECK(sup_norm_distance(pv.value, w) <= 1e-10 / 0.1);
    }
}

TEST_CASE("estimated backup") {
    const EnvBundle env = build_coin_toss(0.6);
    const auto post = uniform_prior(11, 3);
    ValueFunction v(11);
    for (std::size_t s = 0; s < 11; ++s) v[s] = double(s) - 5.0;

    // one draw: beta is the identity
    const auto draws = sample_kernels(post, 1, 4);
    for (const RiskSpec& outer : {RiskSpec::mean(), RiskSpec::cvar(0.6)}) {
        const auto est = estimate_q(env.model, draws, v, RiskSpec::cvar(0.5), outer);
        const auto ex = exact_q(env.model, draws[0], v, RiskSpec::cvar(0.5));
        for (std::size_t i = 0; i < est.data().size(); ++i) CHECK(est.data()[i] == doctest::Approx(ex.data()[i]));
    }
    CHECK(estimate_q(env.model, post, v, RiskSpec::mean(), RiskSpec::mean(), 30, 5) ==
          estimate_q(env.model, sample_kernels(post, 30, 5), v, RiskSpec::mean(), RiskSpec::mean()));

    // presorted cvar path equals the generic sigma evaluation bit for bit
    const auto many = sample_kernels(post, 25, 6);
    const auto fast = estimate_q(env.model, many, v, RiskSpec::cvar(0.3), RiskSpec::mean());
    QTable slow(11, 3);
    for (std::size_t s = 0; s < 11; ++s)
        for (std::size_t a = 0; a < 3; ++a) {
            std::vector<double> target(11), sig;
            for (std::size_t t = 0; t < 11; ++t) target[t] = env.model.cost(s, a, t) + 0.9 * v[t];
            for (const auto& k : many) sig.push_back(cvar_discrete(target, k.row(s, a), 0.3));
            slow(s, a) = beta_eval(RiskSpec::mean(), sig);
        }
    CHECK(fast == slow);
}

TEST_CASE("backup properties on random instances") {
    std::mt19937_64 g(21);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto in = random_instance(g, 3, 2);
        DirichletPosterior post(3, 2, std::vector<double>(18, 0.7));
        const auto draws = sample_kernels(post, 40, trial);
        ValueFunction v1(3), v2(3);
        for (auto& x : v1) x = u(g);
        for (auto& x : v2) x = u(g);
        const double d = sup_norm_distance(v1, v2);
        auto exact = [&](const ValueFunction& v) { return optimality_step(exact_q(in.model, in.kernel, v, RiskSpec::cvar(0.3))); };
        auto est = [&](const ValueFunction& v) {
            return optimality_step(estimate_q(in.model, draws, v, RiskSpec::cvar(0.3), RiskSpec::cvar(0.6)));
        };
        CHECK(sup_norm_distance(exact(v1), exact(v2)) <= 0.9 * d + 1e-10);
        CHECK(sup_norm_distance(est(v1), est(v2)) <= 0.9 * d + 1e-10);
    }
}
