#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rsmdp/mdp.hpp"
#include "rsmdp/risk.hpp"
#include "rsmdp/rng.hpp"

namespace rsmdp {

/// Product of independent Dirichlet distributions, one per (s,a) row.
class DirichletPosterior {
public:
    DirichletPosterior() = default;
    /// Throws InvalidArgument unless every parameter is strictly positive and finite.
    DirichletPosterior(std::size_t n_states, std::size_t n_actions, std::vector<double> alpha);

    std::size_t n_states() const noexcept { return n_states_; }
    std::size_t n_actions() const noexcept { return n_actions_; }
    std::span<const double> row(StateIndex s, ActionIndex a) const {
        return {alpha_.data() + (s * n_actions_ + a) * n_states_, n_states_};
    }
    double operator()(StateIndex s, ActionIndex a, StateIndex next) const {
        return alpha_[(s * n_actions_ + a) * n_states_ + next];
    }
    const std::vector<double>& data() const noexcept { return alpha_; }

    double row_mass(StateIndex s, ActionIndex a) const;
    /// max_{s,a} sum_{s'} alpha(s'|s,a)
    double max_row_mass() const;
    /// min_{s,a} sum_{s'} alpha(s'|s,a)
    double min_row_mass() const;

    bool operator==(const DirichletPosterior&) const = default;

private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> alpha_;
};

/// alpha(s'|s,a) = 1/|S| everywhere.
DirichletPosterior uniform_prior(std::size_t n_states, std::size_t n_actions);

constexpr double kPriorFloor = 1e-6;

/// alpha = mass * pmf, with zero pmf entries floored at 1e-6.
DirichletPosterior informative_prior(const TransitionKernel& pmf, double mass);

/// Conjugate update alpha + counts.
DirichletPosterior posterior_update(const DirichletPosterior& post, const TransitionCounts& counts);

/// `n` kernels drawn i.i.d. from the posterior. Row (s,a) of every draw comes
/// from its own stream split_seed(seed, "dirichlet", s, a).
std::vector<TransitionKernel> sample_kernels(const DirichletPosterior& post, std::size_t n, std::uint64_t seed);

/// Draws one Dirichlet vector from `alpha` into `out` using log-space gamma variates.
void sample_dirichlet(Rng& rng, std::span<const double> alpha, std::span<double> out);

TransitionKernel posterior_mean(const DirichletPosterior& post);

struct PosteriorAccuracy {
    std::vector<double> per_sa;     ///< beta of the L1 deviation, indexed s * |A| + a
    std::vector<double> std_error;  ///< Monte Carlo standard error of each entry
    double max_value = 0.0;
    std::size_t argmax = 0;
    std::size_t mc_samples = 0;

    double max_std_error() const { return std_error.empty() ? 0.0 : std_error[argmax]; }
};

constexpr std::size_t kDefaultAccuracySamples = 2000;

/// Monte Carlo estimate of beta_{p~post}( sum_s' |p(s'|s,a) - reference(s'|s,a)| ) for every (s,a).
PosteriorAccuracy posterior_l1_accuracy(const DirichletPosterior& post, const TransitionKernel& reference,
                                        const OuterRiskSpec& outer, std::size_t n, std::uint64_t seed);

} // namespace rsmdp
