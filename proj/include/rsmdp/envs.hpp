#pragma once

#include <string>
#include <vector>

#include "rsmdp/mdp.hpp"

namespace rsmdp {

/// A concrete environment: model, true kernel and the domain labels of its indices.
struct EnvBundle {
    std::string name;
    MdpModel model;
    TransitionKernel kernel;
    std::vector<int> state_labels;
    std::vector<int> action_labels;
    std::vector<double> initial; ///< initial state distribution
};

struct InventoryParams {
    std::size_t n = 10;
    double k = 3.0; ///< fixed ordering cost
    double h = 1.0; ///< holding cost per unit
    double p = 2.0; ///< unmet-demand penalty per unit
    double tilt = 0.0;
};

constexpr double kCoinHeadProbability = 0.6;
constexpr std::size_t kCoinFlips = 10;
constexpr double kEnvDiscount = 0.9;

/// Eleven states (number of heads), actions {-1, 0, +1}; every row is Binom(10, p_head).
EnvBundle build_coin_toss(double p_head = kCoinHeadProbability);

/// States -n..n, actions 0..n, demand drawn from exponential_tilt(n, tilt).
EnvBundle build_inventory(const InventoryParams& params = {});

/// P(D = i) proportional to exp(theta (i - n/2)), i = 0..n.
std::vector<double> exponential_tilt(std::size_t n, double theta);

/// Binomial(n, p) pmf over 0..n.
std::vector<double> binomial_pmf(std::size_t n, double p);

enum class EnvPreset { CoinToss, Inventory };

/// Preset name plus parameters; `perturbed` rebuilds it with a different p_head or tilt.
struct EnvSpec {
    EnvPreset preset = EnvPreset::CoinToss;
    double p_head = kCoinHeadProbability;
    InventoryParams inventory;

    EnvBundle build() const;
    /// Copy with the preset's perturbation parameter (p_head or tilt) replaced.
    EnvSpec perturbed(double value) const;
    /// "p_head" or "tilt".
    const char* perturbation_name() const;
    const char* preset_name() const;
};

} // namespace rsmdp
