#ifndef COOPT_SCENARIO_HPP
#define COOPT_SCENARIO_HPP

#include "coopt/linalg.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace coopt {

struct NegativePostFluctuationDemand : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-load peak demand plus a shared per-period coefficient; realized base
/// demand is coefficient_t * max_demand_l.
struct DemandProfile {
    std::vector<double> max_demand;    // per load, MW
    std::vector<double> coefficients;  // per period

    int periods() const { return static_cast<int>(coefficients.size()); }
    int num_loads() const { return static_cast<int>(max_demand.size()); }
    double demand(int t, int l) const { return coefficients[t] * max_demand[l]; }
    double total_demand(int t) const {
        double s = 0.0;
        for (double m : max_demand) s += m;
        return coefficients[t] * s;
    }
};

/// Load fluctuation, either as per-load percentages of the period demand
/// (with a default for unlisted loads) or as explicit signed MW series.
struct FluctuationRule {
    enum class Kind { Percent, ExplicitMw };
    Kind kind = Kind::Percent;
    double percent_default = 0.0;
    std::map<std::string, double> percent_overrides;        // load id -> percent
    std::map<std::string, std::vector<double>> mw;          // load id -> MW per period
};

struct NonBaseScenario {
    std::string id;
    double probability = 0.0;            // epsilon_k in (0,1)
    std::vector<std::string> outages;    // line ids, possibly empty
    FluctuationRule fluctuation;
};

struct ScenarioSet {
    std::vector<NonBaseScenario> scenarios;

    int size() const { return static_cast<int>(scenarios.size()); }
    double base_probability() const {
        double s = 1.0;
        for (const auto& k : scenarios) s -= k.probability;
        return s;
    }
};

/// Expands a scenario's fluctuation rule into explicit per-period MW vectors
/// (periods x loads). Explicit vectors pass through unchanged. Throws
/// NegativePostFluctuationDemand when demand + fluctuation dips below zero and
/// UnknownId when the rule names a load id not in load_ids.
Matrix materialize_fluctuations(const NonBaseScenario& scenario, const DemandProfile& profile,
                                const std::vector<std::string>& load_ids);

/// (base-case residual, epsilon_1, ..., epsilon_K); sums to 1.
std::vector<double> scenario_probabilities(const ScenarioSet& set);

} // namespace coopt

#endif
