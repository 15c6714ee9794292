#include "coopt/pricing.hpp"

#include <algorithm>
#include <cmath>

namespace coopt {

PriceSystem compute_prices(const PreparedCase& pc, const CooptSolution& sol) {
    const int T = sol.T, K = sol.K, J = sol.J, L = sol.L;
    const int NL = pc.data.grid.num_lines();
    PriceSystem p;
    p.T = T; p.K = K; p.J = J; p.L = L;
    p.gen_energy.assign(T * J, 0.0);
    p.gen_energy_base.assign(T * J, 0.0);
    p.gen_energy_scen.assign(T * K * J, 0.0);
    p.load_energy.assign(T * L, 0.0);
    p.load_energy_base.assign(T * L, 0.0);
    p.load_energy_scen.assign(T * K * L, 0.0);
    p.load_shed_credit.assign(T * L, 0.0);
    p.reserve_up.assign(T * J, 0.0);
    p.reserve_down.assign(T * J, 0.0);

    auto congestion = [&](const ShiftFactorMatrix& sf, const double* mu, int nlines, int bus) {
        double s = 0.0;
        for (int ln = 0; ln < nlines; ++ln) s += sf.at(ln, bus) * mu[ln];
        return s;
    };

    for (int t = 0; t < T; ++t) {
        const double* mu_base = NL > 0 ? &sol.flow_dual[t * NL] : nullptr;
        for (int j = 0; j < J; ++j) {
            const double w0 =
                sol.balance_dual[t] - (NL ? congestion(pc.base_sf, mu_base, NL, pc.gen_bus[j]) : 0.0);
            p.gen_energy_base[p.tj(t, j)] = w0;
            double eta = w0;
            double res_up = 0.0, res_dn = 0.0;
            for (int k = 0; k < K; ++k) {
                const auto& mu_k = sol.s_flow_dual[sol.tk(t, k)];
                const int snl = static_cast<int>(mu_k.size());
                const double wk =
                    sol.s_balance_dual[sol.tk(t, k)] -
                    (snl ? congestion(pc.scenario_sf[k], mu_k.data(), snl, pc.gen_bus[j]) : 0.0);
                p.gen_energy_scen[p.tkj(t, k, j)] = wk;
                eta += wk;
                res_up += sol.up_cap_dual[sol.tkj(t, k, j)];
                res_dn += sol.dn_cap_dual[sol.tkj(t, k, j)];
            }
            p.gen_energy[p.tj(t, j)] = eta;
            p.reserve_up[p.tj(t, j)] = res_up;
            p.reserve_down[p.tj(t, j)] = res_dn;
        }
        for (int l = 0; l < L; ++l) {
            const double w0 =
                sol.balance_dual[t] - (NL ? congestion(pc.base_sf, mu_base, NL, pc.load_bus[l]) : 0.0);
            p.load_energy_base[p.tl(t, l)] = w0;
            double eta = w0, shed_credit = 0.0;
            for (int k = 0; k < K; ++k) {
                const auto& mu_k = sol.s_flow_dual[sol.tk(t, k)];
                const int snl = static_cast<int>(mu_k.size());
                const double wk =
                    sol.s_balance_dual[sol.tk(t, k)] -
                    (snl ? congestion(pc.scenario_sf[k], mu_k.data(), snl, pc.load_bus[l]) : 0.0);
                p.load_energy_scen[p.tkl(t, k, l)] = wk;
                eta += wk;
                shed_credit += sol.shed_hi_dual[sol.tkl(t, k, l)];
            }
            p.load_shed_credit[p.tl(t, l)] = shed_credit;
            p.load_energy[p.tl(t, l)] = eta - shed_credit;
        }
    }
    return p;
}

EnvelopeReport envelope_check(const PreparedCase& pc, const CooptSolution& sol,
                              const PriceSystem& prices, int generator, int period, double h,
                              const SolveOptions& opts) {
    EnvelopeReport rep;
    rep.generator = generator;
    rep.period = period;
    rep.step = h;

    RestrictedModel rm = build_restricted_pricing_model(pc, sol, generator, period);
    const double g0 = rm.g_opt, ru0 = rm.ru_opt, rd0 = rm.rd_opt;

    rm.set_params(g0, ru0, rd0);
    const PrimalDualSolution base = rm.solve(opts);
    const bool base_ok = base.status == SolveStatus::Optimal;

    // Ramping rows of this generator touching period t: the rows at t and t+1
    // contain its period-t quantities. Binding rows (or nonzero duals) put the
    // formula outside its stated domain.
    bool ramping = false;
    const int T = sol.T;
    for (int tt = period; tt <= period + 1 && tt < T; ++tt) {
        const int ij = sol.tj(tt, generator);
        if (std::fabs(sol.ramp_up_dual[ij]) > 1e-7 || std::fabs(sol.ramp_dn_dual[ij]) > 1e-7)
            ramping = true;
        if (tt == 0) continue;
        const auto& gen = pc.data.generators[generator];
        const double up_slack = gen.ramp_up - (sol.g[sol.tj(tt, generator)] -
                                               sol.g[sol.tj(tt - 1, generator)] +
                                               sol.r_up[sol.tj(tt - 1, generator)]);
        const double dn_slack = gen.ramp_down - (-sol.g[sol.tj(tt, generator)] +
                                                 sol.g[sol.tj(tt - 1, generator)] +
                                                 sol.r_down[sol.tj(tt - 1, generator)]);
        if (up_slack < 1e-7 || dn_slack < 1e-7) ramping = true;
    }

    struct Spec {
        char q;
        double value;
        double analytic;
        bool boundary;
    };
    // The restricted model drops this generator's capacity and offer-cap rows,
    // so g and the cap side of the reserves may be crossed freely; only the
    // zero side of a reserve is structural (re-dispatch stays nonnegative).
    const Spec specs[3] = {
        {'g', g0, prices.gen_energy[prices.tj(period, generator)], false},
        {'U', ru0, prices.reserve_up[prices.tj(period, generator)], ru0 < h},
        {'D', rd0, prices.reserve_down[prices.tj(period, generator)], rd0 < h},
    };

    for (const auto& s : specs) {
        EnvelopeEntry e;
        e.quantity = s.q;
        e.analytic = s.analytic;
        e.param = s.value;
        e.ramping_active = ramping;
        e.boundary = s.boundary;

        auto solve_at = [&](double v) {
            double gg = g0, ru = ru0, rd = rd0;
            if (s.q == 'g') gg = v;
            else if (s.q == 'U') ru = v;
            else rd = v;
            rm.set_params(gg, ru, rd);
            return rm.solve(opts);
        };
        const PrimalDualSolution plus = solve_at(s.value + h);
        const PrimalDualSolution minus = solve_at(s.value - h);
        e.infeasible_right = plus.status != SolveStatus::Optimal;
        e.infeasible_left = minus.status != SolveStatus::Optimal;

        const double f0 = base_ok ? base.objective : 0.0;
        if (base_ok && !e.infeasible_right) e.fd_right = -(plus.objective - f0) / h;
        if (base_ok && !e.infeasible_left) e.fd_left = -(f0 - minus.objective) / h;
        if (!e.infeasible_left && !e.infeasible_right) {
            e.fd_central = -(plus.objective - minus.objective) / (2.0 * h);
            const double scale = 1.0 + std::max(std::fabs(e.fd_left), std::fabs(e.fd_right));
            e.kink = std::fabs(e.fd_left - e.fd_right) > 1e-5 * scale;
            e.abs_error = std::fabs(e.analytic - e.fd_central);
            // The value function is convex in the parameter, so every valid
            // price lies between the one-sided estimates.
            const double lo = std::min(e.fd_left, e.fd_right) - 1e-6 * scale;
            const double hi = std::max(e.fd_left, e.fd_right) + 1e-6 * scale;
            e.bracketed = e.analytic >= lo && e.analytic <= hi;
            e.smooth_pass = !e.kink && !e.ramping_active &&
                            e.abs_error <= 1e-4 * (1.0 + std::fabs(e.analytic));
        }
        rep.entries.push_back(e);
    }
    rm.set_params(g0, ru0, rd0);
    return rep;
}

} // namespace coopt
