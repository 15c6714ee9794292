#ifndef COOPT_MONTECARLO_HPP
#define COOPT_MONTECARLO_HPP

#include "coopt/baseline.hpp"
#include "coopt/pricing.hpp"
#include "coopt/settlement.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace coopt {

/// Realized scenario per period: -1 base, otherwise scenario index.
struct Realization {
    std::vector<int> period_scenario;
};

/// Deterministic counter-based draw: the result depends only on
/// (seed, sample_index) and the scenario set, never on evaluation order.
Realization sample_realization(std::uint64_t seed, std::uint64_t sample_index,
                               const std::vector<double>& scenario_probabilities, int periods);

struct SimulationResult {
    bool feasible = false;
    std::vector<std::pair<int, int>> infeasible_kt; // recourse gaps (scenario, period)
    int samples = 0;
    std::uint64_t seed = 0;
    bool has_net_revenue = false;

    std::vector<double> sample_cost;              // per sample realized total cost
    std::vector<double> running_avg_cost;         // cumulative means, fixed order
    std::vector<double> running_avg_net_revenue;  // empty without prices

    double mean_cost = 0.0, se_cost = 0.0;
    double mean_net_revenue = 0.0, se_net_revenue = 0.0;
    double expected_cost = 0.0;        // analytic probability-weighted value
    double expected_net_revenue = 0.0; // analytic expected merchandise surplus
};

/// Samples N multi-period realizations and evaluates the dispatch against
/// them: realized cost = base cost + per-period recourse cost at the realized
/// scenario; with prices, operator net revenue = ex-ante surplus plus realized
/// ex-post net inflow. Per-(scenario, period) recourse solves are memoized;
/// sample evaluation runs in parallel with bit-identical aggregation.
SimulationResult run_simulation(const PreparedCase& pc, const BaseDispatch& dispatch,
                                const PriceSystem* prices, const CooptSolution* coopt_sol,
                                int samples, std::uint64_t seed,
                                const SolveOptions& opts = {}, bool parallel = true);

struct ComparisonRow {
    std::string label; // "coopt" or "kappa=..."
    bool coopt = false;
    double kappa_up = 0.0, kappa_down = 0.0;
    std::string status; // ok | infeasible | recourse_infeasible
    double base_cost = 0.0;
    double expected_recourse = 0.0;
    double expected_total = 0.0;
    double mc_avg_cost = 0.0;
    double mc_se = 0.0;
    double pct_gap_vs_coopt = 0.0; // on expected totals
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    int samples = 0;
    std::uint64_t seed = 0;
};

/// Requirement sweep against the co-optimized dispatch under common random
/// numbers (every row sees the same realizations).
ComparisonTable compare_models(const PreparedCase& pc,
                               const std::vector<ReserveRequirement>& grid, int samples,
                               std::uint64_t seed, const ModelSolveOptions& opts = {},
                               bool parallel = true);

} // namespace coopt

#endif
