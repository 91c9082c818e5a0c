#include "rsmdp/envs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "rsmdp/errors.hpp"

namespace rsmdp {

std::vector<double> binomial_pmf(std::size_t n, double p) {
    std::vector<double> pmf(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double log_choose = std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) - std::lgamma(double(n - k) + 1.0);
        pmf[k] = std::exp(log_choose + double(k) * std::log(p) + double(n - k) * std::log1p(-p));
    }
    return pmf;
}

std::vector<double> exponential_tilt(std::size_t n, double theta) {
    if (!std::isfinite(theta)) throw InvalidArgument("tilt must be finite");
    std::vector<double> w(n + 1);
    // shift by the largest exponent so large |theta| cannot overflow
    const double top = std::max(theta * (0.0 - double(n) / 2.0), theta * (double(n) - double(n) / 2.0));
    double total = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        w[i] = std::exp(theta * (double(i) - double(n) / 2.0) - top);
        total += w[i];
    }
    for (double& x : w) x /= total;
    return w;
}

EnvBundle build_coin_toss(double p_head) {
    if (!(p_head > 0.0 && p_head < 1.0)) throw InvalidArgument("p_head must lie in (0,1)");
    const std::size_t ns = kCoinFlips + 1, na = 3;
    const std::vector<int> actions{-1, 0, 1};
    std::vector<double> cost(ns * na * ns);
    for (std::size_t x = 0; x < ns; ++x) {
        for (std::size_t a = 0; a < na; ++a) {
            const int act = actions[a];
            for (std::size_t y = 0; y < ns; ++y) {
                double c;
                if (x < y) c = -act;
                else if (x > y) c = act;
                else c = std::abs(act);
                cost[(x * na + a) * ns + y] = c;
            }
        }
    }
    const auto pmf = binomial_pmf(kCoinFlips, p_head);
    TransitionKernel kernel(ns, na);
    for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t a = 0; a < na; ++a) std::copy(pmf.begin(), pmf.end(), kernel.row(s, a).begin());

    EnvBundle env{"coin_toss", MdpModel(ns, na, std::move(cost), kEnvDiscount), std::move(kernel), {}, actions, pmf};
    for (std::size_t s = 0; s < ns; ++s) env.state_labels.push_back(int(s));
    return env;
}

EnvBundle build_inventory(const InventoryParams& params) {
    if (params.n < 1) throw InvalidArgument("inventory capacity must be at least 1");
    const int n = int(params.n);
    const std::size_t ns = 2 * params.n + 1, na = params.n + 1;
    const auto demand = exponential_tilt(params.n, params.tilt);
    std::vector<double> cost(ns * na * ns, 0.0);
    TransitionKernel kernel(ns, na);
    for (std::size_t si = 0; si < ns; ++si) {
        const int s = int(si) - n;
        const int stock = std::max(s, 0);
        for (std::size_t a = 0; a < na; ++a) {
            const int order = std::max(int(a) - stock, 0);
            for (std::size_t ti = 0; ti < ns; ++ti) {
                const int next = int(ti) - n;
                cost[(si * na + a) * ns + ti] = params.k * (order > 0 ? 1.0 : 0.0) + params.h * std::max(next, 0) +
                                                params.p * std::max(-next, 0);
            }
            auto row = kernel.row(si, a);
            for (int d = 0; d <= n; ++d) {
                const int next = stock + order - d;
                if (next < -n || next > n) throw Error(ErrorCode::Internal, "inventory dynamics left the state range");
                row[std::size_t(next + n)] += demand[std::size_t(d)];
            }
        }
    }
    std::vector<double> initial(ns, 0.0);
    initial[params.n] = 1.0;
    EnvBundle env{"inventory", MdpModel(ns, na, std::move(cost), kEnvDiscount), std::move(kernel), {}, {}, std::move(initial)};
    for (int s = -n; s <= n; ++s) env.state_labels.push_back(s);
    for (int a = 0; a <= n; ++a) env.action_labels.push_back(a);
    return env;
}

EnvBundle EnvSpec::build() const {
    return preset == EnvPreset::CoinToss ? build_coin_toss(p_head) : build_inventory(inventory);
}

EnvSpec EnvSpec::perturbed(double value) const {
    EnvSpec out = *this;
    if (preset == EnvPreset::CoinToss) out.p_head = value;
    else out.inventory.tilt = value;
    return out;
}

const char* EnvSpec::perturbation_name() const { return preset == EnvPreset::CoinToss ? "p_head" : "tilt"; }

const char* EnvSpec::preset_name() const { return preset == EnvPreset::CoinToss ? "coin_toss" : "inventory"; }

} // namespace rsmdp
