#ifndef COOPT_MARKET_HPP
#define COOPT_MARKET_HPP

#include "coopt/grid.hpp"
#include "coopt/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coopt {

struct GeneratorParams {
    std::string id;
    std::string bus;
    double energy_bid = 0.0;             // $/MWh
    double reserve_up_bid = 0.0;         // $/MW
    double reserve_down_bid = 0.0;       // $/MW
    double redispatch_up_price = 0.0;    // $/MWh, paid for upward deviations
    double redispatch_down_price = 0.0;  // $/MWh, refunded for downward deviations
    double min_output = 0.0;             // MW
    double max_output = 0.0;             // MW
    double reserve_up_cap = 0.0;         // MW offer cap
    double reserve_down_cap = 0.0;       // MW offer cap
    double ramp_up = 0.0;                // MW per period
    double ramp_down = 0.0;              // MW per period
};

struct LoadParams {
    std::string id;
    std::string bus;
    double shed_price = 0.0;  // $/MWh, value of lost load
};

struct InitialState {
    std::vector<double> g;            // per generator, MW
    std::vector<double> reserve_up;   // MW
    std::vector<double> reserve_down; // MW
};

struct MarketCase {
    std::string name;
    Grid grid;
    std::vector<GeneratorParams> generators;
    std::vector<LoadParams> loads;
    DemandProfile demand;     // max_demand aligned with loads
    ScenarioSet scenarios;
    std::optional<InitialState> initial_state;

    int periods() const { return demand.periods(); }
    int num_generators() const { return static_cast<int>(generators.size()); }
    int num_loads() const { return static_cast<int>(loads.size()); }
    int generator_index(const std::string& id) const;
    int load_index(const std::string& id) const;
    std::vector<std::string> load_ids() const;
};

struct CaseValidationError : std::runtime_error {
    std::vector<Issue> issues;
    explicit CaseValidationError(std::vector<Issue> iss);
};

/// Every structural and semantic problem in the case, errors and warnings,
/// in one pass. An empty error set means the case is solvable.
std::vector<Issue> validate_case(const MarketCase& c);

std::string format_issues(const std::vector<Issue>& issues);

/// Case plus everything derived from it that model building needs: the base
/// shift factors, per-scenario contingency grids and shift factors (topologies
/// deduplicated), materialized fluctuations, and probabilities. Immutable
/// after construction. Throws CaseValidationError when validation fails.
struct PreparedCase {
    MarketCase data;
    ShiftFactorMatrix base_sf;
    std::vector<Grid> scenario_grid;           // per scenario
    std::vector<ShiftFactorMatrix> scenario_sf;
    std::vector<Matrix> fluctuation;           // per scenario: periods x loads
    std::vector<double> probability;           // epsilon_k
    double base_probability = 1.0;
    std::vector<int> gen_bus;   // bus column per generator
    std::vector<int> load_bus;  // bus column per load

    int periods() const { return data.periods(); }
    int num_scenarios() const { return data.scenarios.size(); }
    int num_generators() const { return data.num_generators(); }
    int num_loads() const { return data.num_loads(); }
    // Effective scenario rating of a line in a contingency grid.
    static double scenario_limit(const Line& ln) {
        return ln.scenario_limit ? *ln.scenario_limit : ln.limit;
    }
};

PreparedCase prepare_case(const MarketCase& c, bool parallel = true);

} // namespace coopt

#endif
