#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rsmdp/errors.hpp"
#include "rsmdp/risk.hpp"

using namespace rsmdp;

namespace {

// min_y { y + (1/alpha) sum m (v - y)^+ }, evaluated at every atom (the minimizer is an atom)
double cvar_grid(const std::vector<double>& v, const std::vector<double>& m, double alpha) {
    double best = INFINITY;
    for (double y : v) {
        double t = y;
        for (std::size_t i = 0; i < v.size(); ++i) t += m[i] * std::max(v[i] - y, 0.0) / alpha;
        best = std::min(best, t);
    }
    return best;
}

std::vector<double> random_simplex(std::mt19937_64& g, std::size_t k) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(k);
    for (auto& x : p) x = e(g);
    const double t = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) x /= t;
    return p;
}

std::vector<double> random_values(std::mt19937_64& g, std::size_t k, double lo = -10, double hi = 10) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(k);
    for (auto& x : v) x = u(g);
    return v;
}

} // namespace

TEST_CASE("cvar of a uniform four-point distribution") {
    const std::vector<double> v{4, 3, 2, 1}, m(4, 0.25);
    CHECK(cvar_discrete(v, m, 0.5) == doctest::Approx(3.5));
    CHECK(cvar_discrete(v, m, 0.3) == doctest::Approx((0.25 * 4 + 0.05 * 3) / 0.3));
    CHECK(cvar_discrete(v, m, 1.0) == doctest::Approx(2.5));
    CHECK_THROWS_AS(cvar_discrete(v, m, 0.0), DegenerateAlpha);
    CHECK_THROWS_AS(cvar_discrete(v, m, -0.1), DegenerateAlpha);
}

TEST_CASE("cvar matches the Rockafellar-Uryasev minimization") {
    std::mt19937_64 g(5);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 1 + trial % 9;
        const auto v = random_values(g, k), m = random_simplex(g, k);
        const double alpha = std::uniform_real_distribution<double>(0.01, 1.0)(g);
        CHECK(cvar_discrete(v, m, alpha) == doctest::Approx(cvar_grid(v, m, alpha)).epsilon(1e-10));
    }
}

TEST_CASE("sigma evaluation") {
    CHECK(sigma_eval(RiskSpec::mean(), std::vector<double>{1, 2, 3}, std::vector<double>(3, 1.0 / 3)) ==
          doctest::Approx(2.0));
    CHECK(sigma_eval(RiskSpec::cvar(0.5), std::vector<double>{0, 1}, std::vector<double>{0.5, 0.5}) ==
          doctest::Approx(1.0));
}

TEST_CASE("cvar envelope LP agrees with the closed form") {
    std::mt19937_64 g(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 2 + trial % 7;
        const auto v = random_values(g, k), m = random_simplex(g, k);
        const double alpha = std::uniform_real_distribution<double>(0.05, 1.0)(g);
        const double lp = sigma_eval(RiskSpec::polyhedral(PolyhedralEnvelope::cvar(alpha)), v, m);
        CHECK(std::abs(lp - cvar_discrete(v, m, alpha)) <= 1e-8);
    }
    const std::vector<double> v{4, 3, 2, 1}, m(4, 0.25);
    CHECK(envelope_lp_solve(PolyhedralEnvelope::cvar(0.3), v, m).value == doctest::Approx(3.8333333333));
    CHECK(envelope_lp_solve(PolyhedralEnvelope::cvar(1.0), v, m).value == doctest::Approx(2.5));
}

TEST_CASE("envelope without the mean-one row is unbounded") {
    auto env = PolyhedralEnvelope::cvar(0.5);
    env.mean_one = false;
    env.per_atom.clear();
    CHECK_THROWS_AS(envelope_lp_solve(env, std::vector<double>{1, 2}, std::vector<double>{0.5, 0.5}), LpUnbounded);
}

TEST_CASE("semideviation envelope matches its closed form") {
    std::mt19937_64 g(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 2 + trial % 5;
        const auto v = random_values(g, k), m = random_simplex(g, k);
        const double c = std::uniform_real_distribution<double>(0.0, 1.0)(g);
        double mean = 0.0, semi = 0.0;
        for (std::size_t i = 0; i < k; ++i) mean += m[i] * v[i];
        for (std::size_t i = 0; i < k; ++i) semi += m[i] * std::max(v[i] - mean, 0.0);
        const double lp = sigma_eval(RiskSpec::polyhedral(PolyhedralEnvelope::upper_semideviation(c)), v, m);
        CHECK(lp == doctest::Approx(mean + c * semi).epsilon(1e-8));
    }
}

TEST_CASE("beta evaluation over uniform samples") {
    const std::vector<double> s{1, 2, 3, 4};
    CHECK(beta_eval(RiskSpec::mean(), s) == doctest::Approx(2.5));
    CHECK(beta_eval(RiskSpec::cvar(0.5), s) == doctest::Approx(3.5));
    const std::vector<double> one{7.25};
    CHECK(beta_eval(RiskSpec::mean(), one) == 7.25);
    CHECK(beta_eval(RiskSpec::cvar(0.3), one) == 7.25);
    CHECK(beta_eval(RiskSpec::polyhedral(PolyhedralEnvelope::cvar(0.3)), one) == doctest::Approx(7.25));
}

TEST_CASE("coherence properties") {
    std::mt19937_64 g(17);
    const std::vector<RiskSpec> specs{RiskSpec::mean(), RiskSpec::cvar(0.3),
                                      RiskSpec::polyhedral(PolyhedralEnvelope::upper_semideviation(0.5))};
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t k = 2 + trial % 6;
        const auto m = random_simplex(g, k);
        const auto v2 = random_values(g, k);
        auto v1 = v2;
        for (auto& x : v1) x += std::uniform_real_distribution<double>(0.0, 3.0)(g);
        const double c = std::uniform_real_distribution<double>(-5, 5)(g);
        const double h = std::uniform_real_distribution<double>(0, 4)(g);
        const auto& spec = specs[trial % specs.size()];
        CHECK(sigma_eval(spec, v1, m) >= sigma_eval(spec, v2, m) - 1e-10);
        auto shifted = v2, scaled = v2;
        for (auto& x : shifted) x += c;
        for (auto& x : scaled) x *= h;
        CHECK(std::abs(sigma_eval(spec, shifted, m) - sigma_eval(spec, v2, m) - c) <= 1e-9);
        CHECK(std::abs(sigma_eval(spec, scaled, m) - h * sigma_eval(spec, v2, m)) <= 1e-9 * (1 + std::abs(h * 10)));
        CHECK(std::abs(beta_eval(spec, shifted) - beta_eval(spec, v2) - c) <= 1e-9);
    }
}

TEST_CASE("cvar dominance and the 1/alpha bound") {
    std::mt19937_64 g(23);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 1 + trial % 8;
        const auto v = random_values(g, k, 0.0, 10.0), m = random_simplex(g, k);
        const double alpha = std::uniform_real_distribution<double>(0.01, 1.0)(g);
        double mean = 0.0;
        for (std::size_t i = 0; i < k; ++i) mean += m[i] * v[i];
        const double c = cvar_discrete(v, m, alpha);
        CHECK(c >= mean - 1e-10);
        CHECK(c <= *std::max_element(v.begin(), v.end()) + 1e-10);
        CHECK(c <= mean / alpha + 1e-10);
    }
    const std::vector<double> v{3, -1, 2}, m{0.2, 0.5, 0.3};
    CHECK(cvar_discrete(v, m, 1.0) == 0.2 * 3 + 0.5 * -1 + 0.3 * 2);
}

TEST_CASE("Lipschitz constants") {
    CHECK(lipschitz_b_sigma(RiskSpec::mean(), 1.0, 0.9) == doctest::Approx(10.0));
    CHECK(lipschitz_b_sigma(RiskSpec::cvar(0.5), 1.0, 0.9) == doctest::Approx(40.0));
    CHECK(lipschitz_b_sigma(RiskSpec::cvar(1.0), 2.0, 0.5) == doctest::Approx(8.0));
    CHECK_THROWS_AS(lipschitz_b_sigma(RiskSpec::polyhedral(PolyhedralEnvelope::cvar(0.5)), 1.0, 0.9), Unsupported);
}

TEST_CASE("cross-section continuity holds with the Lipschitz constant") {
    std::mt19937_64 g(31);
    const double c_bar = 1.0, gamma = 0.9, bound = c_bar / (1 - gamma);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t k = 2 + trial % 6;
        const auto v = random_values(g, k, -bound, bound);
        const auto m1 = random_simplex(g, k), m2 = random_simplex(g, k);
        double l1 = 0.0;
        for (std::size_t i = 0; i < k; ++i) l1 += std::abs(m1[i] - m2[i]);
        for (const RiskSpec& spec : {RiskSpec::mean(), RiskSpec::cvar(0.25)}) {
            const double b = lipschitz_b_sigma(spec, c_bar, gamma);
            CHECK(std::abs(sigma_eval(spec, v, m1) - sigma_eval(spec, v, m2)) <= b * l1 + 1e-10);
        }
    }
}
