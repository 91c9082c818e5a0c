#include "rsmdp/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsmdp/errors.hpp"

namespace rsmdp {

void PolyhedralEnvelope::validate() const {
    auto check = [&](const Row& r) {
        if (r.atom_aux.size() != atom_aux || r.shared_aux.size() != shared_aux)
            throw InvalidArgument("envelope row width disagrees with its auxiliary variable counts");
        if (!std::isfinite(r.rhs) || !std::isfinite(r.xi)) throw InvalidArgument("envelope row has non-finite entries");
    };
    for (const auto& r : per_atom) check(r);
    for (const auto& r : aggregate) check(r);
}

PolyhedralEnvelope PolyhedralEnvelope::cvar(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DegenerateAlpha(alpha);
    PolyhedralEnvelope env;
    env.per_atom.push_back({1.0, {}, {}, lp::Sense::LessEqual, 1.0 / alpha});
    return env;
}

PolyhedralEnvelope PolyhedralEnvelope::upper_semideviation(double c) {
    if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgument("semideviation weight must lie in [0,1]");
    // xi_i = 1 + g_i - h,  h = sum_j w_j g_j,  0 <= g_i <= c
    PolyhedralEnvelope env;
    env.atom_aux = 1;
    env.shared_aux = 1;
    env.per_atom.push_back({1.0, {-1.0}, {1.0}, lp::Sense::Equal, 1.0});
    env.per_atom.push_back({0.0, {1.0}, {0.0}, lp::Sense::LessEqual, c});
    env.per_atom.push_back({0.0, {1.0}, {0.0}, lp::Sense::GreaterEqual, 0.0});
    env.aggregate.push_back({0.0, {1.0}, {-1.0}, lp::Sense::Equal, 0.0});
    return env;
}

void RiskSpec::validate() const {
    switch (kind) {
    case RiskKind::Mean: break;
    case RiskKind::CVaR:
        if (!(alpha > 0.0 && alpha <= 1.0)) throw DegenerateAlpha(alpha);
        break;
    case RiskKind::Envelope:
        if (!envelope) throw InvalidArgument("envelope risk without constraints");
        envelope->validate();
        break;
    }
}

double cvar_discrete(std::span<const double> values, std::span<const double> probs, double alpha) {
    if (values.size() != probs.size()) throw InvalidArgument("cvar_discrete: length mismatch");
    if (!(alpha > 0.0)) throw DegenerateAlpha(alpha);
    if (alpha > 1.0) throw DegenerateAlpha(alpha);
    if (alpha == 1.0) {
        double mean = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) mean += values[i] * probs[i];
        return mean;
    }

    // small supports dominate the workload; avoid heap traffic for them
    constexpr std::size_t kStack = 64;
    std::size_t stack_idx[kStack];
    std::vector<std::size_t> heap_idx;
    std::size_t* idx = stack_idx;
    if (values.size() > kStack) {
        heap_idx.resize(values.size());
        idx = heap_idx.data();
    }
    std::iota(idx, idx + values.size(), std::size_t{0});
    std::stable_sort(idx, idx + values.size(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    double remaining = alpha;
    double total = 0.0;
    for (std::size_t k = 0; k < values.size() && remaining > 0.0; ++k) {
        const std::size_t i = idx[k];
        const double w = std::min(probs[i], remaining);
        total += w * values[i];
        remaining -= w;
    }
    return total / alpha;
}

lp::Solution envelope_lp_solve(const PolyhedralEnvelope& env, std::span<const double> values,
                               std::span<const double> weights) {
    env.validate();
    if (values.size() != weights.size()) throw InvalidArgument("envelope LP: length mismatch");
    const std::size_t k = values.size();
    const std::size_t per = 1 + env.atom_aux;
    const std::size_t n = k * per + env.shared_aux;
    auto xi_col = [&](std::size_t i) { return i * per; };
    auto aux_col = [&](std::size_t i, std::size_t a) { return i * per + 1 + a; };
    auto shared_col = [&](std::size_t j) { return k * per + j; };

    lp::LinearProgram prog(n);
    for (std::size_t i = 0; i < k; ++i) {
        prog.objective[xi_col(i)] = weights[i] * values[i];
        for (std::size_t a = 0; a < env.atom_aux; ++a) prog.free_var[aux_col(i, a)] = true;
    }
    for (std::size_t j = 0; j < env.shared_aux; ++j) prog.free_var[shared_col(j)] = true;

    if (env.mean_one) {
        auto& row = prog.add(lp::Sense::Equal, 1.0);
        for (std::size_t i = 0; i < k; ++i) row.coef[xi_col(i)] = weights[i];
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (const auto& r : env.per_atom) {
            auto& row = prog.add(r.sense, r.rhs);
            row.coef[xi_col(i)] = r.xi;
            for (std::size_t a = 0; a < env.atom_aux; ++a) row.coef[aux_col(i, a)] = r.atom_aux[a];
            for (std::size_t j = 0; j < env.shared_aux; ++j) row.coef[shared_col(j)] = r.shared_aux[j];
        }
    }
    for (const auto& r : env.aggregate) {
        auto& row = prog.add(r.sense, r.rhs);
        for (std::size_t i = 0; i < k; ++i) {
            row.coef[xi_col(i)] = r.xi * weights[i];
            for (std::size_t a = 0; a < env.atom_aux; ++a) row.coef[aux_col(i, a)] = r.atom_aux[a] * weights[i];
        }
        for (std::size_t j = 0; j < env.shared_aux; ++j) row.coef[shared_col(j)] = r.shared_aux[j];
    }
    return lp::solve(prog);
}

double sigma_eval(const InnerRiskSpec& spec, std::span<const double> v, std::span<const double> m) {
    if (v.size() != m.size()) throw InvalidArgument("sigma_eval: length mismatch");
    switch (spec.kind) {
    case RiskKind::Mean: {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * m[i];
        return s;
    }
    case RiskKind::CVaR: return cvar_discrete(v, m, spec.alpha);
    case RiskKind::Envelope:
        if (!spec.envelope) throw InvalidArgument("envelope risk without constraints");
        return envelope_lp_solve(*spec.envelope, v, m).value;
    }
    throw Error(ErrorCode::Internal, "unknown risk kind");
}

double beta_eval(const OuterRiskSpec& spec, std::span<const double> samples) {
    if (samples.empty()) throw InvalidArgument("beta_eval needs at least one sample");
    const std::size_t n = samples.size();
    switch (spec.kind) {
    case RiskKind::Mean: return std::accumulate(samples.begin(), samples.end(), 0.0) / double(n);
    case RiskKind::CVaR: {
        std::vector<double> w(n, 1.0 / double(n));
        return cvar_discrete(samples, w, spec.alpha);
    }
    case RiskKind::Envelope: {
        if (!spec.envelope) throw InvalidArgument("envelope risk without constraints");
        std::vector<double> w(n, 1.0 / double(n));
        return envelope_lp_solve(*spec.envelope, samples, w).value;
    }
    }
    throw Error(ErrorCode::Internal, "unknown risk kind");
}

namespace {

double sample_sd(std::span<const double> x) {
    const double n = double(x.size());
    if (x.size() < 2) return 0.0;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (n - 1.0));
}

} // namespace

double beta_standard_error(const OuterRiskSpec& spec, std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) return 0.0;
    switch (spec.kind) {
    case RiskKind::Mean: return sample_sd(samples) / std::sqrt(double(n));
    case RiskKind::CVaR: {
        // influence function of CVaR: (X - VaR)^+ / alpha
        std::vector<double> sorted(samples.begin(), samples.end());
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        const std::size_t tail = std::min(n - 1, static_cast<std::size_t>(std::floor(spec.alpha * double(n))));
        const double var = sorted[tail];
        std::vector<double> excess(n);
        for (std::size_t i = 0; i < n; ++i) excess[i] = std::max(samples[i] - var, 0.0) / spec.alpha;
        return sample_sd(excess) / std::sqrt(double(n));
    }
    case RiskKind::Envelope: {
        // batch means over 10 contiguous batches
        const std::size_t batches = std::min<std::size_t>(10, n);
        const std::size_t len = n / batches;
        std::vector<double> est;
        for (std::size_t b = 0; b < batches; ++b) est.push_back(beta_eval(spec, samples.subspan(b * len, len)));
        return sample_sd(est) / std::sqrt(double(batches));
    }
    }
    return 0.0;
}

double lipschitz_b_sigma(const InnerRiskSpec& spec, double c_bar, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("discount must lie in (0,1)");
    switch (spec.kind) {
    case RiskKind::Mean: return c_bar / (1.0 - gamma);
    case RiskKind::CVaR:
        if (!(spec.alpha > 0.0 && spec.alpha <= 1.0)) throw DegenerateAlpha(spec.alpha);
        return 2.0 * c_bar / (spec.alpha * (1.0 - gamma));
    case RiskKind::Envelope: throw Unsupported("no Lipschitz constant is available for a general polyhedral envelope");
    }
    throw Error(ErrorCode::Internal, "unknown risk kind");
}

} // namespace rsmdp
