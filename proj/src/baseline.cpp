#include "coopt/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coopt {

BaseDispatch solve_traditional(const PreparedCase& pc, const ReserveRequirement& req,
                               const SolveOptions& opts) {
    const MarketCase& c = pc.data;
    const int T = c.periods(), J = c.num_generators(), NL = c.grid.num_lines();

    LinearProgram lp;
    std::vector<int> v_g(T * J), v_ru(T * J), v_rd(T * J);
    auto tj = [J](int t, int j) { return t * J + j; };
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < J; ++j) {
            const auto& gen = c.generators[j];
            v_g[tj(t, j)] = lp.add_var(gen.energy_bid, -kInf, kInf);
            v_ru[tj(t, j)] = lp.add_var(gen.reserve_up_bid, 0.0, gen.reserve_up_cap);
            v_rd[tj(t, j)] = lp.add_var(gen.reserve_down_bid, 0.0, gen.reserve_down_cap);
        }
    for (int t = 0; t < T; ++t) {
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < J; ++j) terms.push_back({v_g[tj(t, j)], 1.0});
        lp.add_row(RowKind::Equal, c.demand.total_demand(t), std::move(terms),
                   "balance[t" + std::to_string(t + 1) + "]");
        for (int ln = 0; ln < NL; ++ln) {
            std::vector<std::pair<int, double>> ft;
            for (int j = 0; j < J; ++j) {
                const double s = pc.base_sf.at(ln, pc.gen_bus[j]);
                if (s != 0.0) ft.push_back({v_g[tj(t, j)], s});
            }
            double rhs = c.grid.lines[ln].limit;
            for (int l = 0; l < c.num_loads(); ++l)
                rhs += pc.base_sf.at(ln, pc.load_bus[l]) * c.demand.demand(t, l);
            lp.add_row(RowKind::LessEq, rhs, std::move(ft),
                       "flow[t" + std::to_string(t + 1) + "][" + c.grid.lines[ln].id + "]");
        }
        for (int j = 0; j < J; ++j) {
            const auto& gen = c.generators[j];
            lp.add_row(RowKind::LessEq, -gen.min_output,
                       {{v_g[tj(t, j)], -1.0}, {v_rd[tj(t, j)], 1.0}});
            lp.add_row(RowKind::LessEq, gen.max_output,
                       {{v_g[tj(t, j)], 1.0}, {v_ru[tj(t, j)], 1.0}});
            // Plain ramping between consecutive periods; reserves do not enter.
            if (t > 0) {
                lp.add_row(RowKind::LessEq, gen.ramp_up,
                           {{v_g[tj(t, j)], 1.0}, {v_g[tj(t - 1, j)], -1.0}},
                           "ramp_up[t" + std::to_string(t + 1) + "][" + gen.id + "]");
                lp.add_row(RowKind::LessEq, gen.ramp_down,
                           {{v_g[tj(t, j)], -1.0}, {v_g[tj(t - 1, j)], 1.0}},
                           "ramp_dn[t" + std::to_string(t + 1) + "][" + gen.id + "]");
            } else if (c.initial_state) {
                const auto& s0 = *c.initial_state;
                lp.add_row(RowKind::LessEq, gen.ramp_up + s0.g[j], {{v_g[tj(t, j)], 1.0}});
                lp.add_row(RowKind::LessEq, gen.ramp_down - s0.g[j], {{v_g[tj(t, j)], -1.0}});
            }
        }
        // System-wide requirements.
        std::vector<std::pair<int, double>> ru_terms, rd_terms;
        for (int j = 0; j < J; ++j) {
            ru_terms.push_back({v_ru[tj(t, j)], -1.0});
            rd_terms.push_back({v_rd[tj(t, j)], -1.0});
        }
        lp.add_row(RowKind::LessEq, -req.kappa_up * c.demand.total_demand(t), std::move(ru_terms),
                   "req_up[t" + std::to_string(t + 1) + "]");
        lp.add_row(RowKind::LessEq, -req.kappa_down * c.demand.total_demand(t), std::move(rd_terms),
                   "req_dn[t" + std::to_string(t + 1) + "]");
    }

    const PrimalDualSolution s = solve_lp(lp, opts);
    BaseDispatch d;
    d.status = s.status;
    d.diagnostic = s.diagnostic;
    d.T = T;
    d.J = J;
    if (s.status != SolveStatus::Optimal) return d;
    d.kkt = check_kkt(lp, s);
    d.g.assign(T * J, 0.0);
    d.r_up.assign(T * J, 0.0);
    d.r_down.assign(T * J, 0.0);
    for (int t = 0; t < T; ++t)
        for (int j = 0; j < J; ++j) {
            d.g[tj(t, j)] = s.x[v_g[tj(t, j)]];
            d.r_up[tj(t, j)] = s.x[v_ru[tj(t, j)]];
            d.r_down[tj(t, j)] = s.x[v_rd[tj(t, j)]];
        }
    d.base_cost = s.objective;
    return d;
}

BaseDispatch dispatch_from_coopt(const PreparedCase& pc, const CooptSolution& sol) {
    BaseDispatch d;
    d.status = sol.status;
    d.diagnostic = sol.diagnostic;
    d.T = sol.T;
    d.J = sol.J;
    if (sol.status != SolveStatus::Optimal) return d;
    d.g = sol.g;
    d.r_up = sol.r_up;
    d.r_down = sol.r_down;
    d.base_cost = 0.0;
    for (int t = 0; t < sol.T; ++t)
        for (int j = 0; j < sol.J; ++j) {
            const auto& gen = pc.data.generators[j];
            d.base_cost += gen.energy_bid * d.g[d.tj(t, j)] +
                           gen.reserve_up_bid * d.r_up[d.tj(t, j)] +
                           gen.reserve_down_bid * d.r_down[d.tj(t, j)];
        }
    return d;
}

RecourseResult recourse_evaluate(const PreparedCase& pc, const BaseDispatch& dispatch,
                                 int scenario, int period, const SolveOptions& opts) {
    const MarketCase& c = pc.data;
    const int J = c.num_generators(), L = c.num_loads();
    RecourseResult out;
    if (scenario < 0) { // base realization: no deviation, no cost
        out.status = SolveStatus::Optimal;
        out.cost = 0.0;
        out.redisp_up.assign(J, 0.0);
        out.redisp_down.assign(J, 0.0);
        out.shed.assign(L, 0.0);
        return out;
    }
    if (scenario >= pc.num_scenarios())
        throw UnknownId("scenario index " + std::to_string(scenario) + " out of range");

    const int t = period, k = scenario;
    LinearProgram lp;
    std::vector<int> v_up(J), v_dn(J), v_shed(L);
    for (int j = 0; j < J; ++j) {
        const auto& gen = c.generators[j];
        // procured reserves can carry refactorization noise at the 1e-14 level
        const double ru = std::max(0.0, dispatch.r_up[dispatch.tj(t, j)]);
        const double rd = std::max(0.0, dispatch.r_down[dispatch.tj(t, j)]);
        v_up[j] = lp.add_var(gen.redispatch_up_price, 0.0, ru);
        v_dn[j] = lp.add_var(-gen.redispatch_down_price, 0.0, rd);
    }
    for (int l = 0; l < L; ++l)
        v_shed[l] = lp.add_var(c.loads[l].shed_price, 0.0,
                               c.demand.demand(t, l) + pc.fluctuation[k].at(t, l));

    double total = 0.0, gen_fixed = 0.0;
    for (int l = 0; l < L; ++l) total += c.demand.demand(t, l) + pc.fluctuation[k].at(t, l);
    for (int j = 0; j < J; ++j) gen_fixed += dispatch.g[dispatch.tj(t, j)];
    {
        std::vector<std::pair<int, double>> terms;
        for (int j = 0; j < J; ++j) {
            terms.push_back({v_up[j], 1.0});
            terms.push_back({v_dn[j], -1.0});
        }
        for (int l = 0; l < L; ++l) terms.push_back({v_shed[l], 1.0});
        lp.add_row(RowKind::Equal, total - gen_fixed, std::move(terms), "s_balance");
    }
    const Grid& sg = pc.scenario_grid[k];
    const ShiftFactorMatrix& sf = pc.scenario_sf[k];
    for (int ln = 0; ln < sg.num_lines(); ++ln) {
        std::vector<std::pair<int, double>> terms;
        double rhs = PreparedCase::scenario_limit(sg.lines[ln]);
        for (int j = 0; j < J; ++j) {
            const double s = sf.at(ln, pc.gen_bus[j]);
            if (s == 0.0) continue;
            terms.push_back({v_up[j], s});
            terms.push_back({v_dn[j], -s});
            rhs -= s * dispatch.g[dispatch.tj(t, j)];
        }
        for (int l = 0; l < L; ++l) {
            const double s = sf.at(ln, pc.load_bus[l]);
            if (s == 0.0) continue;
            terms.push_back({v_shed[l], s});
            rhs += s * (c.demand.demand(t, l) + pc.fluctuation[k].at(t, l));
        }
        lp.add_row(RowKind::LessEq, rhs, std::move(terms), "s_flow[" + sg.lines[ln].id + "]");
    }

    const PrimalDualSolution s = solve_lp(lp, opts);
    out.status = s.status;
    if (s.status != SolveStatus::Optimal) return out;
    out.kkt = check_kkt(lp, s);
    out.cost = s.objective;
    out.redisp_up.assign(J, 0.0);
    out.redisp_down.assign(J, 0.0);
    out.shed.assign(L, 0.0);
    for (int j = 0; j < J; ++j) {
        out.redisp_up[j] = s.x[v_up[j]];
        out.redisp_down[j] = s.x[v_dn[j]];
    }
    for (int l = 0; l < L; ++l) out.shed[l] = s.x[v_shed[l]];
    return out;
}

ExpectedCost expected_total_cost(const PreparedCase& pc, const BaseDispatch& dispatch,
                                 const SolveOptions& opts) {
    const int T = dispatch.T, K = pc.num_scenarios();
    ExpectedCost ec;
    ec.base_cost = dispatch.base_cost;
    ec.recourse_cost.assign(T * K, std::numeric_limits<double>::quiet_NaN());
    ec.feasible = dispatch.status == SolveStatus::Optimal;
    if (!ec.feasible) return ec;
    for (int t = 0; t < T; ++t)
        for (int k = 0; k < K; ++k) {
            const RecourseResult r = recourse_evaluate(pc, dispatch, k, t, opts);
            if (r.status != SolveStatus::Optimal) {
                ec.feasible = false;
                ec.infeasible_kt.push_back({k, t});
                continue;
            }
            ec.recourse_cost[t * K + k] = r.cost;
            ec.expected_recourse += pc.probability[k] * r.cost;
        }
    ec.total = ec.base_cost + ec.expected_recourse;
    return ec;
}

} // namespace coopt
