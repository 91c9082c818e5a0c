#include "doctest.h"

#include <cmath>

#include "rsmdp/bayes.hpp"
#include "rsmdp/envs.hpp"
#include "rsmdp/errors.hpp"

using namespace rsmdp;

TEST_CASE("uniform prior") {
    for (std::size_t ns : {1u, 2u, 11u}) {
        const auto p = uniform_prior(ns, 3);
        for (double a : p.data()) CHECK(a == doctest::Approx(1.0 / double(ns)));
    }
}

TEST_CASE("informative prior") {
    const auto pmf = binomial_pmf(10, 2.0 / 3.0);
    TransitionKernel k(11, 1);
    for (std::size_t s = 0; s < 11; ++s) std::copy(pmf.begin(), pmf.end(), k.row(s, 0).begin());
    const auto p = informative_prior(k, 1.0);
    for (std::size_t t = 0; t < 11; ++t) CHECK(p(3, 0, t) == doctest::Approx(std::max(pmf[t], kPriorFloor)));

    TransitionKernel uni(4, 2, std::vector<double>(32, 0.25));
    CHECK(informative_prior(uni, 1.0) == uniform_prior(4, 2));

    TransitionKernel point(2, 1, {1, 0, 0, 1});
    const auto pp = informative_prior(point, 5.0);
    CHECK(pp(0, 0, 0) == 5.0);
    CHECK(pp(0, 0, 1) == kPriorFloor);
    CHECK_THROWS_AS(informative_prior(point, 0.0), InvalidArgument);
}

TEST_CASE("conjugate update") {
    DirichletPosterior p(2, 1, {0.5, 0.5, 0.5, 0.5});
    TransitionCounts c(2, 1);
    c.add(0, 0, 0, 2);
    c.add(0, 0, 1, 1);
    const auto q = posterior_update(p, c);
    CHECK(q(0, 0, 0) == 2.5);
    CHECK(q(0, 0, 1) == 1.5);
    CHECK(p(0, 0, 0) == 0.5);
    CHECK(posterior_update(p, TransitionCounts(2, 1)) == p);

    TransitionCounts c2(2, 1);
    c2.add(1, 0, 1, 4);
    TransitionCounts sum = c;
    sum += c2;
    CHECK(posterior_update(posterior_update(p, c), c2) == posterior_update(p, sum));
}

TEST_CASE("sampled kernels are valid and deterministic") {
    const auto p = uniform_prior(5, 2);
    const auto a = sample_kernels(p, 20, 9);
    const auto b = sample_kernels(p, 20, 9);
    CHECK(a == b);
    for (const auto& k : a) CHECK(validate_kernel(k).ok());
    CHECK(sample_kernels(p, 20, 10) != a);
}

TEST_CASE("concentrated Dirichlet rows") {
    DirichletPosterior p(2, 1, {1e9, 1e9, 1e9, 1e9});
    for (const auto& k : sample_kernels(p, 50, 1)) CHECK(std::abs(k(0, 0, 0) - 0.5) < 1e-3);
}

TEST_CASE("Dirichlet sample mean") {
    DirichletPosterior p(3, 1, {0.2, 1.0, 3.0, 1, 1, 1, 5, 0.5, 0.5});
    const std::size_t n = 100000;
    const auto draws = sample_kernels(p, n, 77);
    for (std::size_t s = 0; s < 3; ++s) {
        const double total = p.row_mass(s, 0);
        for (std::size_t t = 0; t < 3; ++t) {
            double mean = 0.0;
            for (const auto& k : draws) mean += k(s, 0, t);
            CHECK(std::abs(mean / double(n) - p(s, 0, t) / total) < 0.01);
        }
    }
}

TEST_CASE("mean absolute deviation bound sqrt(K/(sum alpha + 1))") {
    for (const std::vector<double>& alpha :
         {std::vector<double>{1, 1}, std::vector<double>{0.1, 0.1, 0.1}, std::vector<double>{5, 2, 1, 0.5}}) {
        const std::size_t k = alpha.size();
        DirichletPosterior p(k, 1, [&] {
            std::vector<double> a;
            for (std::size_t s = 0; s < k; ++s) a.insert(a.end(), alpha.begin(), alpha.end());
            return a;
        }());
        double a0 = 0.0;
        for (double a : alpha) a0 += a;
        const std::size_t n = 20000;
        const auto draws = sample_kernels(p, n, 5);
        double s1 = 0.0, s2 = 0.0;
        for (const auto& kr : draws) {
            double d = 0.0;
            for (std::size_t t = 0; t < k; ++t) d += std::abs(kr(0, 0, t) - alpha[t] / a0);
            s1 += d;
            s2 += d * d;
        }
        const double mean = s1 / double(n);
        const double se = std::sqrt((s2 / double(n) - mean * mean) / double(n));
        CHECK(mean <= std::sqrt(double(k) / (a0 + 1.0)) + 3 * se);
    }
}

TEST_CASE("posterior mean") {
    DirichletPosterior p(2, 1, {2, 2, 1, 3});
    const auto m = posterior_mean(p);
    CHECK(m(0, 0, 0) == 0.5);
    CHECK(m(1, 0, 0) == 0.25);
    CHECK(m(1, 0, 1) == 0.75);
    const auto u = posterior_mean(uniform_prior(4, 2));
    for (double x : u.data()) CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("posterior L1 accuracy") {
    const EnvBundle env = build_coin_toss(0.6);
    std::vector<double> conc(env.kernel.data().size());
    for (std::size_t i = 0; i < conc.size(); ++i) conc[i] = std::max(1e9 * env.kernel.data()[i], 1e-6);
    DirichletPosterior tight(11, 3, conc);
    const auto acc = posterior_l1_accuracy(tight, env.kernel, RiskSpec::mean(), 500, 3);
    CHECK(acc.max_value < 1e-3);

    // Beta(1,1) row against reference (1,0): E|p1 - 1| + E p2 = 2 E p2 = 1
    DirichletPosterior flat(2, 1, {1, 1, 1, 1});
    TransitionKernel ref(2, 1, {1, 0, 1, 0});
    const auto mean_acc = posterior_l1_accuracy(flat, ref, RiskSpec::mean(), 20000, 8);
    CHECK(std::abs(mean_acc.per_sa[0] - 1.0) <= 3 * mean_acc.std_error[0]);
    CHECK(mean_acc.max_value == doctest::Approx(*std::max_element(mean_acc.per_sa.begin(), mean_acc.per_sa.end())));

    const auto cvar_acc = posterior_l1_accuracy(flat, ref, RiskSpec::cvar(0.3), 20000, 8);
    for (std::size_t i = 0; i < 2; ++i) CHECK(cvar_acc.per_sa[i] >= mean_acc.per_sa[i]);
    for (double v : cvar_acc.per_sa) CHECK((v >= 0.0 && v <= 2.0));
}

TEST_CASE("accuracy does not grow with more true-kernel data") {
    const EnvBundle env = build_coin_toss(0.6);
    auto post = uniform_prior(11, 3);
    const auto before = posterior_l1_accuracy(post, env.kernel, RiskSpec::mean(), 2000, 4);
    TransitionCounts c(11, 3);
    const auto traj = simulate(env.kernel, Policy::uniform(11, 3), 0, 5000, 6);
    c = count_transitions(traj, 11, 3);
    const auto after = posterior_l1_accuracy(posterior_update(post, c), env.kernel, RiskSpec::mean(), 2000, 4);
    CHECK(after.max_value <= before.max_value + 3 * (after.max_std_error() + before.max_std_error()));
}
