#include "coopt/coopt_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coopt {

namespace {

std::string tag(const char* base, int t) { return std::string(base) + "[t" + std::to_string(t + 1) + "]"; }
std::string tag(const char* base, int t, const std::string& id) {
    return std::string(base) + "[t" + std::to_string(t + 1) + "][" + id + "]";
}
std::string tag(const char* base, int t, const std::string& k, const std::string& id) {
    return std::string(base) + "[t" + std::to_string(t + 1) + "][" + k + "][" + id + "]";
}

} // namespace

BuiltModel build_coopt_model(const PreparedCase& pc, const BuildOptions& opts) {
    const MarketCase& c = pc.data;
    const int T = c.periods();
    const int K = pc.num_scenarios();
    const int J = c.num_generators();
    const int L = c.num_loads();
    const int NL = c.grid.num_lines();

    if (opts.initial == InitialRamping::Require && !c.initial_state)
        throw MissingInitialState("period-1 ramping requested but the case has no initial state");
    const bool t0_ramp = opts.initial != InitialRamping::Ignore && c.initial_state.has_value();

    BuiltModel bm;
    LinearProgram& lp = bm.lp;
    ModelIndex& ix = bm.ix;
    ix.T = T; ix.K = K; ix.J = J; ix.L = L; ix.NL = NL;
    ix.v_g.assign(T * J, -1); ix.v_ru.assign(T * J, -1); ix.v_rd.assign(T * J, -1);
    ix.v_up.assign(T * K * J, -1); ix.v_dn.assign(T * K * J, -1);
    ix.v_shed.assign(T * K * L, -1);
    ix.r_balance.assign(T, -1);
    ix.r_flow.assign(T * NL, -1);
    ix.r_cap_lo.assign(T * J, -1); ix.r_cap_hi.assign(T * J, -1);
    ix.r_ramp_up.assign(T * J, -1); ix.r_ramp_dn.assign(T * J, -1);
    ix.r_s_balance.assign(T * K, -1);
    ix.r_s_flow.assign(T * K, {});
    ix.r_up_cap.assign(T * K * J, -1); ix.r_dn_cap.assign(T * K * J, -1);

    for (int t = 0; t < T; ++t) {
        for (int j = 0; j < J; ++j) {
            const auto& gen = c.generators[j];
            ix.v_g[ix.tj(t, j)] = lp.add_var(gen.energy_bid, -kInf, kInf, tag("g", t, gen.id));
            ix.v_ru[ix.tj(t, j)] = lp.add_var(gen.reserve_up_bid, 0.0, gen.reserve_up_cap,
                                              tag("r_up", t, gen.id));
            ix.v_rd[ix.tj(t, j)] = lp.add_var(gen.reserve_down_bid, 0.0, gen.reserve_down_cap,
                                              tag("r_dn", t, gen.id));
        }
        for (int k = 0; k < K; ++k) {
            const auto& sid = c.scenarios.scenarios[k].id;
            const double eps = pc.probability[k];
            for (int j = 0; j < J; ++j) {
                const auto& gen = c.generators[j];
                ix.v_up[ix.tkj(t, k, j)] = lp.add_var(eps * gen.redispatch_up_price, 0.0, kInf,
                                                      tag("re_up", t, sid, gen.id));
                ix.v_dn[ix.tkj(t, k, j)] = lp.add_var(-eps * gen.redispatch_down_price, 0.0, kInf,
                                                      tag("re_dn", t, sid, gen.id));
            }
            for (int l = 0; l < L; ++l) {
                const double cap = c.demand.demand(t, l) + pc.fluctuation[k].at(t, l);
                ix.v_shed[ix.tkl(t, k, l)] = lp.add_var(eps * c.loads[l].shed_price, 0.0, cap,
                                                        tag("shed", t, sid, c.loads[l].id));
            }
        }
    }

    for (int t = 0; t < T; ++t) {
        // base-case balance
        {
            std::vector<std::pair<int, double>> terms;
            for (int j = 0; j < J; ++j) terms.push_back({ix.v_g[ix.tj(t, j)], 1.0});
            ix.r_balance[t] = lp.add_row(RowKind::Equal, c.demand.total_demand(t), std::move(terms),
                                         tag("balance", t));
        }
        // base-case flow limits
        for (int ln = 0; ln < NL; ++ln) {
            std::vector<std::pair<int, double>> terms;
            for (int j = 0; j < J; ++j) {
                const double s = pc.base_sf.at(ln, pc.gen_bus[j]);
                if (s != 0.0) terms.push_back({ix.v_g[ix.tj(t, j)], s});
            }
            double rhs = c.grid.lines[ln].limit;
            for (int l = 0; l < L; ++l)
                rhs += pc.base_sf.at(ln, pc.load_bus[l]) * c.demand.demand(t, l);
            ix.r_flow[t * NL + ln] =
                lp.add_row(RowKind::LessEq, rhs, std::move(terms), tag("flow", t, c.grid.lines[ln].id));
        }
        // capacity coupling with reserves
        for (int j = 0; j < J; ++j) {
            if (opts.skip_private_rows && opts.skip_private_rows->first == j &&
                opts.skip_private_rows->second == t)
                continue;
            const auto& gen = c.generators[j];
            ix.r_cap_lo[ix.tj(t, j)] =
                lp.add_row(RowKind::LessEq, -gen.min_output,
                           {{ix.v_g[ix.tj(t, j)], -1.0}, {ix.v_rd[ix.tj(t, j)], 1.0}},
                           tag("cap_lo", t, gen.id));
            ix.r_cap_hi[ix.tj(t, j)] =
                lp.add_row(RowKind::LessEq, gen.max_output,
                           {{ix.v_g[ix.tj(t, j)], 1.0}, {ix.v_ru[ix.tj(t, j)], 1.0}},
                           tag("cap_hi", t, gen.id));
        }
        // ramping, coupled to the reserve held in the previous period
        for (int j = 0; j < J; ++j) {
            const auto& gen = c.generators[j];
            if (t == 0) {
                if (!t0_ramp) continue;
                const auto& s0 = *c.initial_state;
                ix.r_ramp_up[ix.tj(t, j)] = lp.add_row(
                    RowKind::LessEq, gen.ramp_up + s0.g[j] - s0.reserve_up[j],
                    {{ix.v_g[ix.tj(t, j)], 1.0}}, tag("ramp_up", t, gen.id));
                ix.r_ramp_dn[ix.tj(t, j)] = lp.add_row(
                    RowKind::LessEq, gen.ramp_down - s0.g[j] - s0.reserve_down[j],
                    {{ix.v_g[ix.tj(t, j)], -1.0}}, tag("ramp_dn", t, gen.id));
            } else {
                ix.r_ramp_up[ix.tj(t, j)] = lp.add_row(
                    RowKind::LessEq, gen.ramp_up,
                    {{ix.v_g[ix.tj(t, j)], 1.0}, {ix.v_g[ix.tj(t - 1, j)], -1.0},
                     {ix.v_ru[ix.tj(t - 1, j)], 1.0}},
                    tag("ramp_up", t, gen.id));
                ix.r_ramp_dn[ix.tj(t, j)] = lp.add_row(
                    RowKind::LessEq, gen.ramp_down,
                    {{ix.v_g[ix.tj(t, j)], -1.0}, {ix.v_g[ix.tj(t - 1, j)], 1.0},
                     {ix.v_rd[ix.tj(t - 1, j)], 1.0}},
                    tag("ramp_dn", t, gen.id));
            }
        }
        // non-base scenarios
        for (int k = 0; k < K; ++k) {
            const auto& scen = c.scenarios.scenarios[k];
            const Grid& sg = pc.scenario_grid[k];
            const ShiftFactorMatrix& sf = pc.scenario_sf[k];
            double total = 0.0;
            for (int l = 0; l < L; ++l) total += c.demand.demand(t, l) + pc.fluctuation[k].at(t, l);
            {
                std::vector<std::pair<int, double>> terms;
                for (int j = 0; j < J; ++j) {
                    terms.push_back({ix.v_g[ix.tj(t, j)], 1.0});
                    terms.push_back({ix.v_up[ix.tkj(t, k, j)], 1.0});
                    terms.push_back({ix.v_dn[ix.tkj(t, k, j)], -1.0});
                }
                for (int l = 0; l < L; ++l) terms.push_back({ix.v_shed[ix.tkl(t, k, l)], 1.0});
                ix.r_s_balance[ix.tk(t, k)] =
                    lp.add_row(RowKind::Equal, total, std::move(terms), tag("s_balance", t, scen.id));
            }
            auto& flow_rows = ix.r_s_flow[ix.tk(t, k)];
            for (int ln = 0; ln < sg.num_lines(); ++ln) {
                std::vector<std::pair<int, double>> terms;
                for (int j = 0; j < J; ++j) {
                    const double s = sf.at(ln, pc.gen_bus[j]);
                    if (s == 0.0) continue;
                    terms.push_back({ix.v_g[ix.tj(t, j)], s});
                    terms.push_back({ix.v_up[ix.tkj(t, k, j)], s});
                    terms.push_back({ix.v_dn[ix.tkj(t, k, j)], -s});
                }
                double rhs = PreparedCase::scenario_limit(sg.lines[ln]);
                for (int l = 0; l < L; ++l) {
                    const double s = sf.at(ln, pc.load_bus[l]);
                    if (s == 0.0) continue;
                    terms.push_back({ix.v_shed[ix.tkl(t, k, l)], s});
                    rhs += s * (c.demand.demand(t, l) + pc.fluctuation[k].at(t, l));
                }
                flow_rows.push_back(lp.add_row(RowKind::LessEq, rhs, std::move(terms),
                                               tag("s_flow", t, scen.id, sg.lines[ln].id)));
            }
            for (int j = 0; j < J; ++j) {
                const auto& gen = c.generators[j];
                ix.r_up_cap[ix.tkj(t, k, j)] = lp.add_row(
                    RowKind::LessEq, 0.0,
                    {{ix.v_up[ix.tkj(t, k, j)], 1.0}, {ix.v_ru[ix.tj(t, j)], -1.0}},
                    tag("re_up_cap", t, scen.id, gen.id));
                ix.r_dn_cap[ix.tkj(t, k, j)] = lp.add_row(
                    RowKind::LessEq, 0.0,
                    {{ix.v_dn[ix.tkj(t, k, j)], 1.0}, {ix.v_rd[ix.tj(t, j)], -1.0}},
                    tag("re_dn_cap", t, scen.id, gen.id));
            }
        }
    }
    return bm;
}

CooptSolution solve_built_model(const PreparedCase& pc, const BuiltModel& model,
                                const ModelSolveOptions& opts) {
    (void)pc;
    PrimalDualSolution raw = solve_lp(model.lp, opts.lp);
    if (raw.status == SolveStatus::Optimal && opts.refine_duals)
        raw = refine_duals(model.lp, raw, opts.lp);

    const ModelIndex& ix = model.ix;
    CooptSolution sol;
    sol.status = raw.status;
    sol.diagnostic = raw.diagnostic;
    sol.iterations = raw.iterations;
    sol.T = ix.T; sol.K = ix.K; sol.J = ix.J; sol.L = ix.L;
    if (raw.status != SolveStatus::Optimal) return sol;

    sol.objective = raw.objective;
    auto pick = [&raw](const std::vector<int>& ixs) {
        std::vector<double> v(ixs.size(), 0.0);
        for (size_t i = 0; i < ixs.size(); ++i)
            if (ixs[i] >= 0) v[i] = raw.x[ixs[i]];
        return v;
    };
    sol.g = pick(ix.v_g);
    sol.r_up = pick(ix.v_ru);
    sol.r_down = pick(ix.v_rd);
    sol.redisp_up = pick(ix.v_up);
    sol.redisp_down = pick(ix.v_dn);
    sol.shed = pick(ix.v_shed);

    auto row_dual = [&raw](const std::vector<int>& ixs) {
        std::vector<double> v(ixs.size(), 0.0);
        for (size_t i = 0; i < ixs.size(); ++i)
            if (ixs[i] >= 0) v[i] = raw.row_dual[ixs[i]];
        return v;
    };
    sol.balance_dual = row_dual(ix.r_balance);
    sol.flow_dual = row_dual(ix.r_flow);
    sol.cap_lo_dual = row_dual(ix.r_cap_lo);
    sol.cap_hi_dual = row_dual(ix.r_cap_hi);
    sol.ramp_up_dual = row_dual(ix.r_ramp_up);
    sol.ramp_dn_dual = row_dual(ix.r_ramp_dn);
    sol.s_balance_dual = row_dual(ix.r_s_balance);
    sol.up_cap_dual = row_dual(ix.r_up_cap);
    sol.dn_cap_dual = row_dual(ix.r_dn_cap);
    sol.s_flow_dual.resize(ix.r_s_flow.size());
    for (size_t i = 0; i < ix.r_s_flow.size(); ++i) {
        sol.s_flow_dual[i].reserve(ix.r_s_flow[i].size());
        for (int r : ix.r_s_flow[i]) sol.s_flow_dual[i].push_back(raw.row_dual[r]);
    }

    // Bound multipliers from reduced costs: positive part belongs to the lower
    // bound, negative part to the upper.
    auto lo_dual = [&raw](const std::vector<int>& ixs) {
        std::vector<double> v(ixs.size(), 0.0);
        for (size_t i = 0; i < ixs.size(); ++i)
            if (ixs[i] >= 0) v[i] = std::max(raw.reduced_cost[ixs[i]], 0.0);
        return v;
    };
    auto hi_dual = [&raw](const std::vector<int>& ixs) {
        std::vector<double> v(ixs.size(), 0.0);
        for (size_t i = 0; i < ixs.size(); ++i)
            if (ixs[i] >= 0) v[i] = std::max(-raw.reduced_cost[ixs[i]], 0.0);
        return v;
    };
    sol.r_up_lo_dual = lo_dual(ix.v_ru);
    sol.r_up_hi_dual = hi_dual(ix.v_ru);
    sol.r_dn_lo_dual = lo_dual(ix.v_rd);
    sol.r_dn_hi_dual = hi_dual(ix.v_rd);
    sol.up_lo_dual = lo_dual(ix.v_up);
    sol.dn_lo_dual = lo_dual(ix.v_dn);
    sol.up_cap_dual = row_dual(ix.r_up_cap);
    sol.dn_cap_dual = row_dual(ix.r_dn_cap);
    sol.shed_lo_dual = lo_dual(ix.v_shed);
    sol.shed_hi_dual = hi_dual(ix.v_shed);

    sol.kkt = check_kkt(model.lp, raw, opts.kkt);
    return sol;
}

CooptSolution solve_coopt_model(const PreparedCase& pc, const ModelSolveOptions& opts) {
    const BuiltModel bm = build_coopt_model(pc, opts.build);
    return solve_built_model(pc, bm, opts);
}

void RestrictedModel::set_params(double gv, double ruv, double rdv) {
    lp.lower[v_g] = lp.upper[v_g] = gv;
    lp.lower[v_ru] = lp.upper[v_ru] = ruv;
    lp.lower[v_rd] = lp.upper[v_rd] = rdv;
}

PrimalDualSolution RestrictedModel::solve(const SolveOptions& opts) const {
    return solve_lp(lp, opts);
}

RestrictedModel build_restricted_pricing_model(const PreparedCase& pc, const CooptSolution& sol,
                                           int generator, int period) {
    if (generator < 0 || generator >= pc.num_generators())
        throw UnknownGenerator("no generator with index " + std::to_string(generator));
    if (period < 0 || period >= pc.periods())
        throw PeriodOutOfRange("period " + std::to_string(period) + " outside horizon");
    if (sol.status != SolveStatus::Optimal)
        throw std::invalid_argument("restricted model needs an optimal solution");

    BuildOptions bo;
    bo.skip_private_rows = {{generator, period}};
    bo.initial = pc.data.initial_state ? InitialRamping::Auto : InitialRamping::Ignore;
    BuiltModel bm = build_coopt_model(pc, bo);

    RestrictedModel rm;
    rm.v_g = bm.ix.v_g[bm.ix.tj(period, generator)];
    rm.v_ru = bm.ix.v_ru[bm.ix.tj(period, generator)];
    rm.v_rd = bm.ix.v_rd[bm.ix.tj(period, generator)];
    rm.g_opt = sol.g[sol.tj(period, generator)];
    rm.ru_opt = sol.r_up[sol.tj(period, generator)];
    rm.rd_opt = sol.r_down[sol.tj(period, generator)];
    rm.lp = std::move(bm.lp);
    // The fixed quantities leave the objective: the restricted cost excludes
    // this generator's bid-in cost at this period.
    rm.lp.cost[rm.v_g] = 0.0;
    rm.lp.cost[rm.v_ru] = 0.0;
    rm.lp.cost[rm.v_rd] = 0.0;
    rm.set_params(rm.g_opt, rm.ru_opt, rm.rd_opt);
    return rm;
}

} // namespace coopt
