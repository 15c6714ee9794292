#include "coopt/montecarlo.hpp"

#include <cmath>
#include <cstdio>

namespace coopt {

namespace {

// splitmix64; stable across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Stream {
    std::uint64_t state;
    Stream(std::uint64_t seed, std::uint64_t index) : state(mix64(seed ^ mix64(index + 1))) {}
    double u01() {
        state = mix64(state);
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    }
};

} // namespace

Realization sample_realization(std::uint64_t seed, std::uint64_t sample_index,
                               const std::vector<double>& probs, int periods) {
    Stream rng(seed, sample_index);
    Realization r;
    r.period_scenario.assign(periods, -1);
    for (int t = 0; t < periods; ++t) {
        const double u = rng.u01();
        double acc = 0.0;
        int pick = -1;
        for (size_t k = 0; k < probs.size(); ++k) {
            acc += probs[k];
            if (u < acc) { pick = static_cast<int>(k); break; }
        }
        r.period_scenario[t] = pick; // falls through to base with prob 1 - sum
    }
    return r;
}

SimulationResult run_simulation(const PreparedCase& pc, const BaseDispatch& dispatch,
                                const PriceSystem* prices, const CooptSolution* coopt_sol,
                                int samples, std::uint64_t seed, const SolveOptions& opts,
                                bool parallel) {
    const int T = dispatch.T, K = pc.num_scenarios();
    SimulationResult res;
    res.samples = samples;
    res.seed = seed;

    // Realized per-(period, scenario) recourse cost table. For an optimal
    // co-optimized schedule these equal the model's own re-dispatch costs.
    const ExpectedCost ec = expected_total_cost(pc, dispatch, opts);
    res.infeasible_kt = ec.infeasible_kt;
    res.feasible = ec.feasible;
    if (!res.feasible) return res;
    res.expected_cost = ec.total;

    // Ex-ante operator surplus per period when prices are given.
    std::vector<double> exante_surplus(T, 0.0);
    res.has_net_revenue = prices != nullptr && coopt_sol != nullptr;
    if (res.has_net_revenue) {
        for (const auto& e : ex_ante_settlement(pc, *coopt_sol, *prices))
            exante_surplus[e.period] -= e.amount;
        for (const auto& e : fluctuation_charges(pc, *coopt_sol, *prices).entries)
            exante_surplus[e.period] -= e.amount;
        double total_surplus = 0.0;
        for (int t = 0; t < T; ++t) {
            total_surplus += exante_surplus[t];
            for (int k = 0; k < K; ++k)
                total_surplus -= pc.probability[k] * ec.recourse_cost[t * K + k];
        }
        res.expected_net_revenue = total_surplus;
    }

    res.sample_cost.assign(samples, 0.0);
    std::vector<double> sample_netrev(res.has_net_revenue ? samples : 0, 0.0);

#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < samples; ++i) {
        const Realization r = sample_realization(seed, i, pc.probability, T);
        double cost = dispatch.base_cost;
        double netrev = 0.0;
        for (int t = 0; t < T; ++t) {
            const int k = r.period_scenario[t];
            const double rc = k < 0 ? 0.0 : ec.recourse_cost[t * K + k];
            cost += rc;
            if (res.has_net_revenue) netrev += exante_surplus[t] - rc;
        }
        res.sample_cost[i] = cost;
        if (res.has_net_revenue) sample_netrev[i] = netrev;
    }

    // Fixed-order cumulative averages: identical for any thread count.
    res.running_avg_cost.assign(samples, 0.0);
    if (res.has_net_revenue) res.running_avg_net_revenue.assign(samples, 0.0);
    double acc_c = 0.0, acc_r = 0.0;
    for (int i = 0; i < samples; ++i) {
        acc_c += res.sample_cost[i];
        res.running_avg_cost[i] = acc_c / (i + 1);
        if (res.has_net_revenue) {
            acc_r += sample_netrev[i];
            res.running_avg_net_revenue[i] = acc_r / (i + 1);
        }
    }
    auto moments = [samples](const std::vector<double>& v, double mean) {
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return samples > 1 ? std::sqrt(ss / (samples - 1)) / std::sqrt(double(samples)) : 0.0;
    };
    res.mean_cost = samples ? res.running_avg_cost.back() : 0.0;
    res.se_cost = moments(res.sample_cost, res.mean_cost);
    if (res.has_net_revenue && samples) {
        res.mean_net_revenue = res.running_avg_net_revenue.back();
        res.se_net_revenue = moments(sample_netrev, res.mean_net_revenue);
    }
    return res;
}

ComparisonTable compare_models(const PreparedCase& pc, const std::vector<ReserveRequirement>& grid,
                               int samples, std::uint64_t seed, const ModelSolveOptions& opts,
                               bool parallel) {
    ComparisonTable table;
    table.samples = samples;
    table.seed = seed;

    const CooptSolution sol = solve_coopt_model(pc, opts);
    ComparisonRow coopt_row;
    coopt_row.label = "coopt";
    coopt_row.coopt = true;
    double coopt_avg = 0.0;
    if (sol.status == SolveStatus::Optimal) {
        const BaseDispatch d = dispatch_from_coopt(pc, sol);
        const SimulationResult sim =
            run_simulation(pc, d, nullptr, nullptr, samples, seed, opts.lp, parallel);
        coopt_row.status = sim.feasible ? "ok" : "recourse_infeasible";
        coopt_row.base_cost = d.base_cost;
        coopt_row.expected_total = sim.expected_cost;
        coopt_row.expected_recourse = sim.expected_cost - d.base_cost;
        coopt_row.mc_avg_cost = sim.mean_cost;
        coopt_row.mc_se = sim.se_cost;
        coopt_avg = sim.mean_cost;
    } else {
        coopt_row.status = to_string(sol.status);
    }
    table.rows.push_back(coopt_row);

    for (const auto& req : grid) {
        ComparisonRow row;
        row.kappa_up = req.kappa_up;
        row.kappa_down = req.kappa_down;
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "kappa=%.4g/%.4g", req.kappa_up, req.kappa_down);
            row.label = buf;
        }
        const BaseDispatch d = solve_traditional(pc, req, opts.lp);
        if (d.status != SolveStatus::Optimal) {
            row.status = to_string(d.status);
            table.rows.push_back(row);
            continue;
        }
        row.base_cost = d.base_cost;
        const SimulationResult sim =
            run_simulation(pc, d, nullptr, nullptr, samples, seed, opts.lp, parallel);
        if (!sim.feasible) {
            row.status = "recourse_infeasible";
            table.rows.push_back(row);
            continue;
        }
        row.status = "ok";
        row.expected_total = sim.expected_cost;
        row.expected_recourse = sim.expected_cost - d.base_cost;
        row.mc_avg_cost = sim.mean_cost;
        row.mc_se = sim.se_cost;
        // gap on the sampled averages, which share realizations with the
        // co-optimized row
        if (coopt_avg > 0.0)
            row.pct_gap_vs_coopt = 100.0 * (sim.mean_cost - coopt_avg) / coopt_avg;
        table.rows.push_back(row);
    }
    return table;
}

} // namespace coopt
