#include "coopt/scenario.hpp"

#include "coopt/grid.hpp"

#include <cmath>
#include <sstream>

namespace coopt {

Matrix materialize_fluctuations(const NonBaseScenario& scenario, const DemandProfile& profile,
                                const std::vector<std::string>& load_ids) {
    const int T = profile.periods();
    const int L = profile.num_loads();
    if (static_cast<int>(load_ids.size()) != L)
        throw std::invalid_argument("load id list does not match the demand profile");

    auto load_ix = [&](const std::string& id) {
        for (int l = 0; l < L; ++l)
            if (load_ids[l] == id) return l;
        throw UnknownId("fluctuation rule references unknown load " + id);
    };

    Matrix pi(T, L);
    const auto& rule = scenario.fluctuation;
    if (rule.kind == FluctuationRule::Kind::Percent) {
        std::vector<double> pct(L, rule.percent_default);
        for (const auto& [id, p] : rule.percent_overrides) pct[load_ix(id)] = p;
        for (int t = 0; t < T; ++t)
            for (int l = 0; l < L; ++l) pi.at(t, l) = pct[l] / 100.0 * profile.demand(t, l);
    } else {
        for (const auto& [id, series] : rule.mw) {
            const int l = load_ix(id);
            if (static_cast<int>(series.size()) != T)
                throw std::invalid_argument("fluctuation series for load " + id + " has " +
                                            std::to_string(series.size()) + " entries, expected " +
                                            std::to_string(T));
            for (int t = 0; t < T; ++t) pi.at(t, l) = series[t];
        }
    }

    for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
            if (profile.demand(t, l) + pi.at(t, l) < 0.0) {
                std::ostringstream os;
                os << "scenario " << scenario.id << ": demand of load " << load_ids[l]
                   << " in period " << t + 1 << " would become "
                   << profile.demand(t, l) + pi.at(t, l) << " MW";
                throw NegativePostFluctuationDemand(os.str());
            }
    return pi;
}

std::vector<double> scenario_probabilities(const ScenarioSet& set) {
    std::vector<double> p;
    p.reserve(set.size() + 1);
    p.push_back(set.base_probability());
    for (const auto& k : set.scenarios) p.push_back(k.probability);
    return p;
}

} // namespace coopt
