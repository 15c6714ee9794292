#ifndef COOPT_BASELINE_HPP
#define COOPT_BASELINE_HPP

#include "coopt/coopt_model.hpp"

#include <vector>

namespace coopt {

/// Exogenous reserve requirement as fractions of total period demand:
/// q_up(t) = kappa_up * total demand in t, likewise down.
struct ReserveRequirement {
    double kappa_up = 0.0;
    double kappa_down = 0.0;
};

/// A base-case schedule from either model.
struct BaseDispatch {
    SolveStatus status = SolveStatus::NumericalFailure;
    std::string diagnostic;
    int T = 0, J = 0;
    std::vector<double> g, r_up, r_down; // [t*J+j]
    double base_cost = 0.0;              // bid-in cost of the schedule
    KktReport kkt;                       // certificate of the solve behind it
    int tj(int t, int j) const { return t * J + j; }
};

/// Deterministic dispatch with requirement-driven reserves: base-case rows
/// only, plain ramping limits (no reserve term), and one system-wide reserve
/// inequality per direction per period. No scenario rows.
BaseDispatch solve_traditional(const PreparedCase& pc, const ReserveRequirement& req,
                               const SolveOptions& opts = {});

BaseDispatch dispatch_from_coopt(const PreparedCase& pc, const CooptSolution& sol);

/// Optimal re-dispatch of a fixed schedule against one realized scenario in
/// one period: min redispatch + shedding cost subject to the scenario balance,
/// scenario flow limits, and the procured reserves as caps. scenario = -1 is
/// the base realization (zero cost by construction).
struct RecourseResult {
    SolveStatus status = SolveStatus::NumericalFailure;
    double cost = 0.0;
    std::vector<double> redisp_up, redisp_down; // per generator
    std::vector<double> shed;                   // per load
    KktReport kkt;
};
RecourseResult recourse_evaluate(const PreparedCase& pc, const BaseDispatch& dispatch,
                                 int scenario, int period, const SolveOptions& opts = {});

/// base cost + sum_t sum_k eps_k * recourse(k,t). Scenario/period pairs with
/// infeasible recourse are reported, not priced.
struct ExpectedCost {
    bool feasible = false;
    double base_cost = 0.0;
    double expected_recourse = 0.0;
    double total = 0.0;
    std::vector<double> recourse_cost;              // [t*K+k], NaN when infeasible
    std::vector<std::pair<int, int>> infeasible_kt; // (scenario, period)
    int tk(int t, int k, int K) const { return t * K + k; }
};
ExpectedCost expected_total_cost(const PreparedCase& pc, const BaseDispatch& dispatch,
                                 const SolveOptions& opts = {});

} // namespace coopt

#endif
