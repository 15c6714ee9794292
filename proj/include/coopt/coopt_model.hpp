#ifndef COOPT_COOPT_MODEL_HPP
#define COOPT_COOPT_MODEL_HPP

#include "coopt/lp.hpp"
#include "coopt/market.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coopt {

struct MissingInitialState : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownGenerator : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PeriodOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Resolves (constraint family, period, scenario, participant) to LP rows and
/// variables so named duals can be pulled out of a PrimalDualSolution.
struct ModelIndex {
    int T = 0, K = 0, J = 0, L = 0, NL = 0;

    // variables
    std::vector<int> v_g, v_ru, v_rd;       // [t*J + j]
    std::vector<int> v_up, v_dn;            // [(t*K + k)*J + j] scenario re-dispatch
    std::vector<int> v_shed;                // [(t*K + k)*L + l]
    // rows (-1 where a family is not emitted, e.g. ramping at t=0)
    std::vector<int> r_balance;             // [t]
    std::vector<int> r_flow;                // [t*NL + line]
    std::vector<int> r_cap_lo, r_cap_hi;    // [t*J + j]
    std::vector<int> r_ramp_up, r_ramp_dn;  // [t*J + j]
    std::vector<int> r_s_balance;           // [t*K + k]
    std::vector<std::vector<int>> r_s_flow; // [t*K + k] -> per contingency line
    std::vector<int> r_up_cap, r_dn_cap;    // [(t*K + k)*J + j]

    int tj(int t, int j) const { return t * J + j; }
    int tk(int t, int k) const { return t * K + k; }
    int tkj(int t, int k, int j) const { return (t * K + k) * J + j; }
    int tkl(int t, int k, int l) const { return (t * K + k) * L + l; }
};

enum class InitialRamping { Auto, Require, Ignore };

struct BuildOptions {
    InitialRamping initial = InitialRamping::Auto;
    // Omit one generator's capacity/reserve-cap rows at one period (the
    // restricted pricing model). Everything else stays.
    std::optional<std::pair<int, int>> skip_private_rows; // (generator, period)
};

struct BuiltModel {
    LinearProgram lp;
    ModelIndex ix;
};

/// Multi-period co-optimization LP: expected cost objective over base energy,
/// reserves, and probability-weighted scenario re-dispatch and shedding;
/// per-period balance/flow/capacity rows, ramping rows coupling consecutive
/// periods (reserve held in t-1 consumes ramp range into t), and per-scenario
/// balance/flow/coupling rows.
BuiltModel build_coopt_model(const PreparedCase& pc, const BuildOptions& opts = {});

struct CooptSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    std::string diagnostic;
    long iterations = 0;
    double objective = 0.0;
    int T = 0, K = 0, J = 0, L = 0;

    // primal
    std::vector<double> g, r_up, r_down;        // [t*J + j]
    std::vector<double> redisp_up, redisp_down; // [(t*K+k)*J + j]
    std::vector<double> shed;                   // [(t*K+k)*L + l]

    // duals, named per constraint family
    std::vector<double> balance_dual;                    // [t]
    std::vector<double> flow_dual;                       // [t*NL + line]
    std::vector<double> cap_lo_dual, cap_hi_dual;        // [t*J + j]
    std::vector<double> r_up_lo_dual, r_up_hi_dual;      // [t*J + j] reserve bound duals
    std::vector<double> r_dn_lo_dual, r_dn_hi_dual;      // [t*J + j]
    std::vector<double> ramp_up_dual, ramp_dn_dual;      // [t*J + j], 0 when row absent
    std::vector<double> s_balance_dual;                  // [t*K + k]
    std::vector<std::vector<double>> s_flow_dual;        // [t*K + k] -> per contingency line
    std::vector<double> up_cap_dual, up_lo_dual;         // [(t*K+k)*J + j]
    std::vector<double> dn_cap_dual, dn_lo_dual;         // [(t*K+k)*J + j]
    std::vector<double> shed_hi_dual, shed_lo_dual;      // [(t*K+k)*L + l]

    KktReport kkt;

    int tj(int t, int j) const { return t * J + j; }
    int tk(int t, int k) const { return t * K + k; }
    int tkj(int t, int k, int j) const { return (t * K + k) * J + j; }
    int tkl(int t, int k, int l) const { return (t * K + k) * L + l; }
};

struct ModelSolveOptions {
    SolveOptions lp;
    BuildOptions build;
    // Canonical dual selection on degenerate optima (see refine_duals).
    bool refine_duals = true;
    KktTolerances kkt;
};

CooptSolution solve_coopt_model(const PreparedCase& pc, const ModelSolveOptions& opts = {});

/// Same, reusing an already-built model (e.g. after dumping it).
CooptSolution solve_built_model(const PreparedCase& pc, const BuiltModel& model,
                                const ModelSolveOptions& opts = {});

/// Restricted model for marginal pricing: one generator's energy and reserve
/// quantities at one period become fixed parameters, its capacity and
/// reserve-cap rows at that period are dropped, and its bid cost there leaves
/// the objective. set_params moves the parameters; solve re-solves cold.
struct RestrictedModel {
    LinearProgram lp;
    int v_g = -1, v_ru = -1, v_rd = -1;
    double g_opt = 0.0, ru_opt = 0.0, rd_opt = 0.0;

    void set_params(double gv, double ruv, double rdv);
    PrimalDualSolution solve(const SolveOptions& opts = {}) const;
};

RestrictedModel build_restricted_pricing_model(const PreparedCase& pc, const CooptSolution& sol,
                                           int generator, int period);

} // namespace coopt

#endif
