#include "coopt/settlement.hpp"

#include <cmath>

namespace coopt {

double SettlementLedger::sum(const std::string& party, int period) const {
    double s = 0.0;
    for (const auto& e : entries)
        if (e.party == party && (period < 0 || e.period == period)) s += e.amount;
    return s;
}

double SettlementLedger::sum_component(const std::string& component, int period) const {
    double s = 0.0;
    for (const auto& e : entries)
        if (e.component == component && (period < 0 || e.period == period)) s += e.amount;
    return s;
}

double SettlementLedger::period_total(int period) const {
    double s = 0.0;
    for (const auto& e : entries)
        if (e.period == period) s += e.amount;
    return s;
}

std::vector<LedgerEntry> ex_ante_settlement(const PreparedCase& pc, const CooptSolution& sol,
                                            const PriceSystem& prices) {
    std::vector<LedgerEntry> out;
    const auto& c = pc.data;
    for (int t = 0; t < sol.T; ++t) {
        for (int j = 0; j < sol.J; ++j) {
            const int ij = sol.tj(t, j);
            const std::string party = "generator:" + c.generators[j].id;
            out.push_back({t, party, "ex_ante_energy", "", prices.gen_energy[ij] * sol.g[ij]});
            out.push_back({t, party, "ex_ante_reserve_up", "", prices.reserve_up[ij] * sol.r_up[ij]});
            out.push_back(
                {t, party, "ex_ante_reserve_down", "", prices.reserve_down[ij] * sol.r_down[ij]});
        }
        for (int l = 0; l < sol.L; ++l) {
            const int il = prices.tl(t, l);
            out.push_back({t, "load:" + c.loads[l].id, "ex_ante_energy", "",
                           -prices.load_energy[il] * c.demand.demand(t, l)});
        }
    }
    return out;
}

FluctuationCharges fluctuation_charges(const PreparedCase& pc, const CooptSolution& sol,
                                       const PriceSystem& prices) {
    FluctuationCharges fc;
    fc.T = sol.T; fc.K = sol.K; fc.L = sol.L;
    fc.charge.assign(sol.T * sol.K * sol.L, 0.0);
    fc.per_period.assign(sol.T * sol.L, 0.0);
    for (int t = 0; t < sol.T; ++t)
        for (int l = 0; l < sol.L; ++l) {
            double total = 0.0;
            for (int k = 0; k < sol.K; ++k) {
                const double ch =
                    prices.load_energy_scen[prices.tkl(t, k, l)] * pc.fluctuation[k].at(t, l);
                fc.charge[fc.tkl(t, k, l)] = ch;
                total += ch;
            }
            fc.per_period[fc.tl(t, l)] = total;
            fc.entries.push_back(
                {t, "load:" + pc.data.loads[l].id, "fluctuation_charge", "", -total});
        }
    return fc;
}

std::vector<LedgerEntry> ex_post_settlement(const PreparedCase& pc, const CooptSolution& sol,
                                            int realized_scenario, int period,
                                            const SettlementDirections& dir) {
    if (realized_scenario >= sol.K || realized_scenario < -1)
        throw UnknownScenario("scenario index " + std::to_string(realized_scenario));
    std::vector<LedgerEntry> out;
    if (realized_scenario < 0) return out; // base realization settles nothing
    const auto& c = pc.data;
    const int k = realized_scenario;
    const std::string& sid = c.scenarios.scenarios[k].id;
    for (int j = 0; j < sol.J; ++j) {
        const int ix = sol.tkj(period, k, j);
        const auto& gen = c.generators[j];
        const double up = dir.redispatch_up_to_generator * gen.redispatch_up_price *
                          sol.redisp_up[ix];
        const double dn = dir.redispatch_down_refund * gen.redispatch_down_price *
                          sol.redisp_down[ix];
        if (sol.redisp_up[ix] != 0.0)
            out.push_back({period, "generator:" + gen.id, "ex_post_redispatch_up", sid, up});
        if (sol.redisp_down[ix] != 0.0)
            out.push_back({period, "generator:" + gen.id, "ex_post_redispatch_down_refund", sid, -dn});
    }
    for (int l = 0; l < sol.L; ++l) {
        const int ix = sol.tkl(period, k, l);
        if (sol.shed[ix] == 0.0) continue;
        out.push_back({period, "load:" + c.loads[l].id, "ex_post_shedding_compensation", sid,
                       dir.shed_compensation * c.loads[l].shed_price * sol.shed[ix]});
    }
    return out;
}

std::vector<LedgerEntry> expected_ex_post(const PreparedCase& pc, const CooptSolution& sol,
                                          const SettlementDirections& dir) {
    std::vector<LedgerEntry> out;
    for (int t = 0; t < sol.T; ++t)
        for (int k = 0; k < sol.K; ++k) {
            auto step = ex_post_settlement(pc, sol, k, t, dir);
            for (auto& e : step) {
                e.amount *= pc.probability[k];
                e.scenario = "expected:" + e.scenario;
                out.push_back(std::move(e));
            }
        }
    return out;
}

SurplusReport expected_merchandise_surplus(const PreparedCase& pc, const CooptSolution& sol,
                                           const PriceSystem& prices,
                                           const SettlementDirections& dir) {
    SurplusReport rep;
    rep.ex_ante.assign(sol.T, 0.0);
    rep.expected_ex_post.assign(sol.T, 0.0);
    rep.surplus.assign(sol.T, 0.0);

    const auto exante = ex_ante_settlement(pc, sol, prices);
    for (const auto& e : exante) rep.ex_ante[e.period] -= e.amount; // operator side
    const auto fc = fluctuation_charges(pc, sol, prices);
    for (const auto& e : fc.entries) rep.ex_ante[e.period] -= e.amount;

    for (int t = 0; t < sol.T; ++t)
        for (int k = 0; k < sol.K; ++k)
            for (const auto& e : ex_post_settlement(pc, sol, k, t, dir))
                rep.expected_ex_post[t] += pc.probability[k] * e.amount;

    for (int t = 0; t < sol.T; ++t) {
        rep.surplus[t] = rep.ex_ante[t] - rep.expected_ex_post[t];
        rep.total += rep.surplus[t];
    }
    return rep;
}

SettlementLedger build_expected_ledger(const PreparedCase& pc, const CooptSolution& sol,
                                       const PriceSystem& prices,
                                       const SettlementDirections& dir) {
    SettlementLedger ledger;
    auto append = [&ledger](std::vector<LedgerEntry> v) {
        for (auto& e : v) ledger.entries.push_back(std::move(e));
    };
    append(ex_ante_settlement(pc, sol, prices));
    append(fluctuation_charges(pc, sol, prices).entries);
    append(expected_ex_post(pc, sol, dir));

    // Operator rows close each period exactly.
    std::vector<double> balance(sol.T, 0.0);
    for (const auto& e : ledger.entries) balance[e.period] += e.amount;
    for (int t = 0; t < sol.T; ++t)
        ledger.entries.push_back({t, "operator", "merchandise_surplus", "", -balance[t]});
    return ledger;
}

ProfitReport generator_profit_report(const PreparedCase& pc, const CooptSolution& sol,
                                     const PriceSystem& prices,
                                     const SettlementDirections& dir) {
    ProfitReport rep;
    const auto& c = pc.data;
    rep.total.assign(sol.J, 0.0);
    for (int j = 0; j < sol.J; ++j) rep.generator_ids.push_back(c.generators[j].id);

    for (int j = 0; j < sol.J; ++j) {
        for (int t = 0; t < sol.T; ++t) {
            const int ij = sol.tj(t, j);
            const auto& gen = c.generators[j];
            ProfitReport::Row row;
            row.generator = gen.id;
            row.period = t;
            row.ex_ante_receipts = prices.gen_energy[ij] * sol.g[ij] +
                                   prices.reserve_up[ij] * sol.r_up[ij] +
                                   prices.reserve_down[ij] * sol.r_down[ij];
            row.base_bid_cost = gen.energy_bid * sol.g[ij] + gen.reserve_up_bid * sol.r_up[ij] +
                                gen.reserve_down_bid * sol.r_down[ij];
            for (int k = 0; k < sol.K; ++k) {
                const int ikx = sol.tkj(t, k, j);
                const double eps = pc.probability[k];
                row.expected_ex_post_receipts +=
                    eps * (dir.redispatch_up_to_generator * gen.redispatch_up_price *
                               sol.redisp_up[ikx] -
                           dir.redispatch_down_refund * gen.redispatch_down_price *
                               sol.redisp_down[ikx]);
                row.expected_redispatch_cost +=
                    eps * (gen.redispatch_up_price * sol.redisp_up[ikx] -
                           gen.redispatch_down_price * sol.redisp_down[ikx]);
            }
            row.profit = row.ex_ante_receipts + row.expected_ex_post_receipts -
                         row.base_bid_cost - row.expected_redispatch_cost;
            rep.total[j] += row.profit;
            rep.rows.push_back(row);
        }
    }
    return rep;
}

} // namespace coopt
