#include "coopt/market.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace coopt {

int MarketCase::generator_index(const std::string& id) const {
    for (int j = 0; j < num_generators(); ++j)
        if (generators[j].id == id) return j;
    return -1;
}

int MarketCase::load_index(const std::string& id) const {
    for (int l = 0; l < num_loads(); ++l)
        if (loads[l].id == id) return l;
    return -1;
}

std::vector<std::string> MarketCase::load_ids() const {
    std::vector<std::string> ids;
    ids.reserve(loads.size());
    for (const auto& l : loads) ids.push_back(l.id);
    return ids;
}

CaseValidationError::CaseValidationError(std::vector<Issue> iss)
    : std::runtime_error(format_issues(iss)), issues(std::move(iss)) {}

std::string format_issues(const std::vector<Issue>& issues) {
    std::ostringstream os;
    for (const auto& i : issues)
        os << (i.warning ? "warning" : "error") << " [" << i.code << "] " << i.where << ": "
           << i.message << '\n';
    return os.str();
}

std::vector<Issue> validate_case(const MarketCase& c) {
    std::vector<Issue> issues = validate_grid(c.grid);
    auto err = [&](const char* code, const std::string& where, const std::string& msg) {
        issues.push_back({code, where, msg, false});
    };
    auto warn = [&](const char* code, const std::string& where, const std::string& msg) {
        issues.push_back({code, where, msg, true});
    };

    std::set<std::string> ids;
    double max_redispatch_up = 0.0;
    for (const auto& g : c.generators) {
        const std::string where = "generator " + g.id;
        if (!ids.insert(g.id).second) err("DuplicateId", where, "duplicate generator id");
        if (c.grid.bus_index(g.bus) < 0) err("UnknownBus", where, "bus " + g.bus + " not defined");
        if (g.min_output > g.max_output) err("BadBounds", where, "min_output exceeds max_output");
        if (g.reserve_up_cap < 0 || g.reserve_down_cap < 0)
            err("BadBounds", where, "reserve offer caps must be nonnegative");
        if (g.ramp_up < 0 || g.ramp_down < 0) err("BadBounds", where, "ramp limits must be nonnegative");
        for (double v : {g.energy_bid, g.reserve_up_bid, g.reserve_down_bid, g.redispatch_up_price,
                         g.redispatch_down_price, g.min_output, g.max_output, g.reserve_up_cap,
                         g.reserve_down_cap, g.ramp_up, g.ramp_down})
            if (!std::isfinite(v)) err("NonFinite", where, "non-finite parameter");
        if (!(g.redispatch_down_price <= g.energy_bid && g.energy_bid <= g.redispatch_up_price))
            warn("BidOrdering", where,
                 "expected redispatch_down_price <= energy_bid <= redispatch_up_price");
        max_redispatch_up = std::max(max_redispatch_up, g.redispatch_up_price);
    }
    ids.clear();
    for (const auto& l : c.loads) {
        const std::string where = "load " + l.id;
        if (!ids.insert(l.id).second) err("DuplicateId", where, "duplicate load id");
        if (c.grid.bus_index(l.bus) < 0) err("UnknownBus", where, "bus " + l.bus + " not defined");
        if (!std::isfinite(l.shed_price)) err("NonFinite", where, "non-finite shed price");
        if (l.shed_price <= max_redispatch_up)
            warn("LowShedPrice", where, "shed price does not exceed every redispatch price");
    }

    if (c.demand.periods() < 1) err("BadProfile", "load_coefficients", "at least one period required");
    if (c.demand.num_loads() != c.num_loads())
        err("BadProfile", "loads", "demand profile covers " + std::to_string(c.demand.num_loads()) +
                                       " loads, case defines " + std::to_string(c.num_loads()));
    for (int t = 0; t < c.demand.periods(); ++t) {
        const double co = c.demand.coefficients[t];
        if (!(co > 0.0) || !std::isfinite(co))
            err("BadProfile", "load_coefficients[" + std::to_string(t) + "]", "coefficient must be > 0");
        else if (co > 1.05)
            warn("HighCoefficient", "load_coefficients[" + std::to_string(t) + "]",
                 "coefficient above 1.05");
    }
    for (int l = 0; l < c.demand.num_loads(); ++l)
        if (c.demand.max_demand[l] < 0 || !std::isfinite(c.demand.max_demand[l]))
            err("BadProfile", "load " + (l < c.num_loads() ? c.loads[l].id : std::to_string(l)),
                "max demand must be nonnegative");

    ids.clear();
    double prob_sum = 0.0;
    for (const auto& k : c.scenarios.scenarios) {
        const std::string where = "scenario " + k.id;
        if (!ids.insert(k.id).second) err("DuplicateId", where, "duplicate scenario id");
        if (!(k.probability > 0.0 && k.probability < 1.0))
            err("BadProbability", where, "probability must lie in (0,1)");
        prob_sum += k.probability;
        try {
            apply_outages(c.grid, k.outages);
        } catch (const IslandingOutage& e) {
            err("IslandingOutage", where, e.what());
        } catch (const UnknownId& e) {
            err("UnknownLine", where, e.what());
        }
        if (c.demand.num_loads() == c.num_loads() && c.demand.periods() >= 1) {
            try {
                materialize_fluctuations(k, c.demand, c.load_ids());
            } catch (const NegativePostFluctuationDemand& e) {
                err("NegativePostFluctuationDemand", where, e.what());
            } catch (const UnknownId& e) {
                err("UnknownLoad", where, e.what());
            } catch (const std::invalid_argument& e) {
                err("BadFluctuation", where, e.what());
            }
        }
    }
    if (prob_sum >= 1.0)
        err("BadProbability", "scenarios", "scenario probabilities sum to " +
                                               std::to_string(prob_sum) + ", must stay below 1");

    if (c.initial_state) {
        const auto& s = *c.initial_state;
        const size_t J = c.generators.size();
        if (s.g.size() != J || s.reserve_up.size() != J || s.reserve_down.size() != J)
            err("BadInitialState", "initial_state", "entries must cover every generator");
    }
    return issues;
}

PreparedCase prepare_case(const MarketCase& c, bool parallel) {
    {
        std::vector<Issue> errors;
        for (auto& i : validate_case(c))
            if (!i.warning) errors.push_back(i);
        if (!errors.empty()) throw CaseValidationError(std::move(errors));
    }

    PreparedCase pc;
    pc.data = c;
    pc.base_sf = compute_shift_factors(c.grid, parallel);
    pc.base_probability = c.scenarios.base_probability();

    const auto load_ids = c.load_ids();
    // Deduplicate contingency topologies: same outage set, same factors.
    std::vector<std::vector<std::string>> seen_outages;
    std::vector<int> seen_at;
    for (const auto& k : c.scenarios.scenarios) {
        pc.probability.push_back(k.probability);
        pc.fluctuation.push_back(materialize_fluctuations(k, c.demand, load_ids));
        std::vector<std::string> key = k.outages;
        std::sort(key.begin(), key.end());
        int found = -1;
        for (size_t i = 0; i < seen_outages.size(); ++i)
            if (seen_outages[i] == key) { found = static_cast<int>(seen_at[i]); break; }
        if (found >= 0) {
            pc.scenario_grid.push_back(pc.scenario_grid[found]);
            pc.scenario_sf.push_back(pc.scenario_sf[found]);
        } else {
            Grid g = apply_outages(c.grid, k.outages);
            pc.scenario_sf.push_back(compute_shift_factors(g, parallel));
            pc.scenario_grid.push_back(std::move(g));
            seen_outages.push_back(std::move(key));
            seen_at.push_back(static_cast<int>(pc.scenario_grid.size()) - 1);
        }
    }

    for (const auto& g : c.generators) pc.gen_bus.push_back(c.grid.bus_index(g.bus));
    for (const auto& l : c.loads) pc.load_bus.push_back(c.grid.bus_index(l.bus));
    return pc;
}

} // namespace coopt
