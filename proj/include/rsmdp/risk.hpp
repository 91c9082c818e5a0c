#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rsmdp/simplex.hpp"

namespace rsmdp {

enum class RiskKind { Mean, CVaR, Envelope };

/**
 * Polyhedral risk envelope over a finite set of weighted atoms.
 *
 * Decision variables: one weight xi_i >= 0 per atom, `atom_aux` free
 * auxiliary variables g_{i,k} per atom, and `shared_aux` free variables h_j
 * shared by all atoms. With atom weights w_i (the transition row m for the
 * inner measure, 1/N for the outer one) the risk of values x is
 *
 *     max  sum_i w_i xi_i x_i
 *     s.t. sum_i w_i xi_i = 1                  (if mean_one)
 *          per-atom rows, one copy for each atom i
 *          aggregate rows over sum_i w_i xi_i and sum_i w_i g_{i,k}
 *
 * Example: CVaR_alpha is a single per-atom row xi_i <= 1/alpha.
 */
struct PolyhedralEnvelope {
    struct Row {
        double xi = 0.0;                ///< coefficient on xi_i (per-atom) or on sum_i w_i xi_i (aggregate)
        std::vector<double> atom_aux;   ///< size atom_aux; same convention as `xi`
        std::vector<double> shared_aux; ///< size shared_aux
        lp::Sense sense = lp::Sense::LessEqual;
        double rhs = 0.0;
    };

    bool mean_one = true;
    std::size_t atom_aux = 0;
    std::size_t shared_aux = 0;
    std::vector<Row> per_atom;
    std::vector<Row> aggregate;

    /// Throws InvalidArgument when the row widths disagree with the aux counts.
    void validate() const;

    /// Envelope {0 <= xi <= 1/alpha, E[xi] = 1}, i.e. CVaR_alpha.
    static PolyhedralEnvelope cvar(double alpha);
    /// Envelope of the mean-upper-semideviation of order one,
    /// E[X] + c E[(X - E X)^+] with c in [0,1].
    static PolyhedralEnvelope upper_semideviation(double c);
};

struct RiskSpec {
    RiskKind kind = RiskKind::Mean;
    double alpha = 1.0; ///< CVaR level, used when kind == CVaR
    std::optional<PolyhedralEnvelope> envelope;

    static RiskSpec mean() { return {}; }
    static RiskSpec cvar(double alpha) { return {RiskKind::CVaR, alpha, std::nullopt}; }
    static RiskSpec polyhedral(PolyhedralEnvelope env) { return {RiskKind::Envelope, 1.0, std::move(env)}; }

    /// Throws on an out-of-range CVaR level or a malformed envelope.
    void validate() const;
};

/// Inner risk-transition mapping sigma(v, m) over next-state randomness.
struct InnerRiskSpec : RiskSpec {
    InnerRiskSpec() = default;
    InnerRiskSpec(RiskSpec spec) : RiskSpec(std::move(spec)) {}
};

/// Outer risk measure beta over posterior draws of the transition kernel.
struct OuterRiskSpec : RiskSpec {
    OuterRiskSpec() = default;
    OuterRiskSpec(RiskSpec spec) : RiskSpec(std::move(spec)) {}
};

/**
 * Upper-tail CVaR of a discrete cost distribution,
 * min_y { y + (1/alpha) sum_i m_i (v_i - y)^+ }.
 *
 * Sorts atoms by decreasing value and takes probability mass until alpha is
 * filled; the atom straddling the boundary contributes a fraction of its
 * mass. alpha == 1 returns the plain expectation. Throws DegenerateAlpha for
 * alpha <= 0.
 */
double cvar_discrete(std::span<const double> values, std::span<const double> probs, double alpha);

/// Envelope LP instantiated at (values, atom weights); returns value and optimizer.
lp::Solution envelope_lp_solve(const PolyhedralEnvelope& env, std::span<const double> values,
                               std::span<const double> weights);

double sigma_eval(const InnerRiskSpec& spec, std::span<const double> v, std::span<const double> m);

/// beta over N equally weighted sample values.
double beta_eval(const OuterRiskSpec& spec, std::span<const double> samples);

/// Standard error of the Monte Carlo estimate beta_eval(spec, samples).
double beta_standard_error(const OuterRiskSpec& spec, std::span<const double> samples);

/// Cross-section Lipschitz constant B_sigma of sigma in its second argument.
/// Mean: C/(1-gamma). CVaR(a): 2C/(a(1-gamma)). Throws Unsupported for envelopes.
double lipschitz_b_sigma(const InnerRiskSpec& spec, double c_bar, double gamma);

} // namespace rsmdp
