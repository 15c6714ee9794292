#ifndef COOPT_PRICING_HPP
#define COOPT_PRICING_HPP

#include "coopt/coopt_model.hpp"

#include <vector>

namespace coopt {

/// Marginal prices per participant and period, with the base/scenario
/// decomposition that the fluctuation settlement needs. Headline prices are
/// the exact sums of their components.
struct PriceSystem {
    int T = 0, K = 0, J = 0, L = 0;
    std::vector<double> gen_energy;       // [t*J+j] $/MWh
    std::vector<double> gen_energy_base;  // [t*J+j]
    std::vector<double> gen_energy_scen;  // [(t*K+k)*J+j]
    std::vector<double> load_energy;      // [t*L+l] $/MWh
    std::vector<double> load_energy_base; // [t*L+l]
    std::vector<double> load_energy_scen; // [(t*K+k)*L+l]
    std::vector<double> load_shed_credit; // [t*L+l] sum of shedding-cap duals
    std::vector<double> reserve_up;       // [t*J+j] $/MW
    std::vector<double> reserve_down;     // [t*J+j]

    int tj(int t, int j) const { return t * J + j; }
    int tl(int t, int l) const { return t * L + l; }
    int tkj(int t, int k, int j) const { return (t * K + k) * J + j; }
    int tkl(int t, int k, int l) const { return (t * K + k) * L + l; }
};

/// Energy prices: balance dual minus the shift-factor-weighted congestion
/// duals, base case plus every scenario. Load prices additionally subtract the
/// shedding-cap duals. Reserve prices are the sums of the re-dispatch cap
/// duals across scenarios.
PriceSystem compute_prices(const PreparedCase& pc, const CooptSolution& sol);

struct EnvelopeEntry {
    char quantity = 'g'; // 'g', 'U', 'D'
    double analytic = 0.0;
    double param = 0.0;
    double fd_left = 0.0;   // price estimate from the left difference
    double fd_right = 0.0;  // from the right difference
    double fd_central = 0.0;
    double abs_error = 0.0; // |analytic - fd_central| when smooth
    bool infeasible_left = false, infeasible_right = false;
    bool kink = false;
    bool boundary = false;       // parameter at an offer-cap or zero bound
    bool ramping_active = false; // this generator's ramping rows not slack
    bool bracketed = false;      // analytic within the one-sided estimates
    bool smooth_pass = false;    // two-sided, no kink, matches within tol
};

struct EnvelopeReport {
    int generator = 0, period = 0;
    double step = 0.0;
    std::vector<EnvelopeEntry> entries; // g, U, D
};

/// Finite-difference validation of the price formulas against the restricted
/// model: re-solves at parameter +/- h and compares slopes. Flags kinks
/// (one-sided slopes disagree), boundary parameters, infeasible perturbations
/// and active ramping, all of which void the smooth comparison but still allow
/// the bracketing check.
EnvelopeReport envelope_check(const PreparedCase& pc, const CooptSolution& sol,
                              const PriceSystem& prices, int generator, int period,
                              double h = 1e-3, const SolveOptions& opts = {});

} // namespace coopt

#endif
