#include "rsmdp/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rsmdp/errors.hpp"
#include "rsmdp/rng.hpp"

namespace rsmdp {

DirichletPosterior::DirichletPosterior(std::size_t n_states, std::size_t n_actions, std::vector<double> alpha)
    : n_states_(n_states), n_actions_(n_actions), alpha_(std::move(alpha)) {
    if (n_states_ == 0 || n_actions_ == 0) throw InvalidArgument("posterior needs at least one state and action");
    if (alpha_.size() != n_states_ * n_actions_ * n_states_)
        throw InvalidArgument("posterior table has the wrong number of entries");
    for (double a : alpha_)
        if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument("Dirichlet parameters must be positive and finite");
}

double DirichletPosterior::row_mass(StateIndex s, ActionIndex a) const {
    auto r = row(s, a);
    return std::accumulate(r.begin(), r.end(), 0.0);
}

double DirichletPosterior::max_row_mass() const {
    double m = 0.0;
    for (std::size_t s = 0; s < n_states_; ++s)
        for (std::size_t a = 0; a < n_actions_; ++a) m = std::max(m, row_mass(s, a));
    return m;
}

double DirichletPosterior::min_row_mass() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n_states_; ++s)
        for (std::size_t a = 0; a < n_actions_; ++a) m = std::min(m, row_mass(s, a));
    return m;
}

DirichletPosterior uniform_prior(std::size_t n_states, std::size_t n_actions) {
    return DirichletPosterior(n_states, n_actions,
                              std::vector<double>(n_states * n_actions * n_states, 1.0 / double(n_states)));
}

DirichletPosterior informative_prior(const TransitionKernel& pmf, double mass) {
    if (!(mass > 0.0)) throw InvalidArgument("prior mass must be positive");
    if (!validate_kernel(pmf).ok()) throw InvalidArgument("prior pmf rows must be probability vectors");
    std::vector<double> alpha(pmf.data().size());
    for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = std::max(mass * pmf.data()[i], kPriorFloor);
    return DirichletPosterior(pmf.n_states(), pmf.n_actions(), std::move(alpha));
}

DirichletPosterior posterior_update(const DirichletPosterior& post, const TransitionCounts& counts) {
    if (counts.n_states() != post.n_states() || counts.n_actions() != post.n_actions())
        throw InvalidArgument("count table does not match the posterior");
    std::vector<double> alpha = post.data();
    for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] += static_cast<double>(counts.data()[i]);
    return DirichletPosterior(post.n_states(), post.n_actions(), std::move(alpha));
}

void sample_dirichlet(Rng& rng, std::span<const double> alpha, std::span<double> out) {
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        out[i] = rng.log_gamma_variate(alpha[i]);
        max_log = std::max(max_log, out[i]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        out[i] = std::exp(out[i] - max_log);
        total += out[i];
    }
    for (std::size_t i = 0; i < alpha.size(); ++i) out[i] /= total;
}

std::vector<TransitionKernel> sample_kernels(const DirichletPosterior& post, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidArgument("sample_kernels needs n >= 1");
    const std::size_t ns = post.n_states(), na = post.n_actions();
    std::vector<TransitionKernel> out(n, TransitionKernel(ns, na));
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
            Rng rng(split_seed(seed, "dirichlet", s, a));
            for (std::size_t i = 0; i < n; ++i) sample_dirichlet(rng, post.row(s, a), out[i].row(s, a));
        }
    }
    return out;
}

TransitionKernel posterior_mean(const DirichletPosterior& post) {
    TransitionKernel k(post.n_states(), post.n_actions());
    for (std::size_t s = 0; s < post.n_states(); ++s) {
        for (std::size_t a = 0; a < post.n_actions(); ++a) {
            const double total = post.row_mass(s, a);
            auto src = post.row(s, a);
            auto dst = k.row(s, a);
            for (std::size_t t = 0; t < post.n_states(); ++t) dst[t] = src[t] / total;
        }
    }
    return k;
}

PosteriorAccuracy posterior_l1_accuracy(const DirichletPosterior& post, const TransitionKernel& reference,
                                        const OuterRiskSpec& outer, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw InvalidArgument("posterior_l1_accuracy needs n >= 2");
    if (reference.n_states() != post.n_states() || reference.n_actions() != post.n_actions())
        throw InvalidArgument("reference kernel does not match the posterior");
    const std::size_t ns = post.n_states(), na = post.n_actions();
    PosteriorAccuracy acc;
    acc.mc_samples = n;
    acc.per_sa.resize(ns * na);
    acc.std_error.resize(ns * na);
    std::vector<double> draw(ns), dist(n);
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
            Rng rng(split_seed(seed, "l1-accuracy", s, a));
            auto ref = reference.row(s, a);
            for (std::size_t i = 0; i < n; ++i) {
                sample_dirichlet(rng, post.row(s, a), draw);
                double d = 0.0;
                for (std::size_t t = 0; t < ns; ++t) d += std::abs(draw[t] - ref[t]);
                dist[i] = d;
            }
            const std::size_t k = s * na + a;
            acc.per_sa[k] = beta_eval(outer, dist);
            acc.std_error[k] = beta_standard_error(outer, dist);
            if (k == 0 || acc.per_sa[k] > acc.max_value) {
                acc.max_value = acc.per_sa[k];
                acc.argmax = k;
            }
        }
    }
    return acc;
}

} // namespace rsmdp
