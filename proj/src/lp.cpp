#include "coopt/lp.hpp"

#include "coopt/linalg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <cstdio>

namespace coopt {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "?";
}

int LinearProgram::add_var(double c, double lo, double up, std::string name) {
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(up);
    var_names.push_back(std::move(name));
    return static_cast<int>(cost.size()) - 1;
}

int LinearProgram::add_row(RowKind kind, double rhs, std::vector<std::pair<int, double>> terms,
                           std::string name) {
    Row r;
    r.kind = kind;
    r.rhs = rhs;
    r.terms = std::move(terms);
    r.name = std::move(name);
    rows.push_back(std::move(r));
    return static_cast<int>(rows.size()) - 1;
}

namespace {

enum VStat : uint8_t { AT_LOWER, AT_UPPER, NB_FREE, BASIC, FIXED };

// Bounded-variable primal simplex on a dense tableau. Phase 1 drives
// artificials out, phase 2 optimizes the real cost. The final basis is
// re-factorized from the original data so the returned point and duals do not
// carry tableau drift.
class Simplex {
public:
    Simplex(const LinearProgram& lp, const SolveOptions& opts) : lp_(lp), opts_(opts) {}

    PrimalDualSolution run();

private:
    const LinearProgram& lp_;
    SolveOptions opts_;

    int m_ = 0, nstruct_ = 0, nslack_ = 0, nart_ = 0, ntot_ = 0;
    std::vector<double> lo_, up_, cost_;
    std::vector<double> tab_;   // m x ntot
    std::vector<double> beta_;  // basic variable values
    std::vector<double> dual_;  // reduced costs, current phase
    std::vector<int> basis_;
    std::vector<uint8_t> stat_;
    std::vector<int> slack_of_, art_of_;  // per row, -1 when absent
    std::vector<double> art_sign_;
    std::vector<std::vector<std::pair<int, double>>> cols_;  // original columns, all vars
    std::vector<double> alpha_;                              // scratch column
    long iters_ = 0;
    long max_iters_ = 0;
    int degen_streak_ = 0;
    bool bland_ = false;
    bool phase1_ = true;
    std::string note_;

    bool is_art(int j) const { return j >= nstruct_ + nslack_; }
    double value_of(int j) const {
        switch (stat_[j]) {
            case AT_LOWER: case FIXED: return lo_[j];
            case AT_UPPER: return up_[j];
            default: return 0.0; // NB_FREE
        }
    }
    double* tab_row(int i) { return tab_.data() + static_cast<size_t>(i) * ntot_; }

    void build();
    void recompute_duals();
#ifdef COOPT_LP_DEBUG
    void debug_feasibility(const char* where, int entering);
#endif
    int price(int* dir_out);
    enum class StepResult { Moved, Unbounded, Stalled };
    StepResult step();
    bool drive_out_artificials();
    void reconstruct(std::vector<double>& x, std::vector<double>& y, std::vector<double>& d);
    PrimalDualSolution extract(SolveStatus st);
};

void Simplex::build() {
    nstruct_ = lp_.num_vars();
    m_ = lp_.num_rows();
    nslack_ = 0;
    for (const auto& r : lp_.rows)
        if (r.kind == RowKind::LessEq) ++nslack_;

    // Place structural variables at their bound closest to zero.
    stat_.assign(nstruct_, AT_LOWER);
    lo_.assign(lp_.lower.begin(), lp_.lower.end());
    up_.assign(lp_.upper.begin(), lp_.upper.end());
    for (int j = 0; j < nstruct_; ++j) {
        const double lo = lo_[j], up = up_[j];
        if (lo == up) stat_[j] = FIXED;
        else if (std::isfinite(lo) && std::isfinite(up)) stat_[j] = std::fabs(lo) <= std::fabs(up) ? AT_LOWER : AT_UPPER;
        else if (std::isfinite(lo)) stat_[j] = AT_LOWER;
        else if (std::isfinite(up)) stat_[j] = AT_UPPER;
        else stat_[j] = NB_FREE;
    }

    std::vector<double> resid(m_);
    for (int i = 0; i < m_; ++i) {
        double s = lp_.rows[i].rhs;
        for (const auto& [j, a] : lp_.rows[i].terms) s -= a * value_of(j);
        resid[i] = s;
    }

    slack_of_.assign(m_, -1);
    art_of_.assign(m_, -1);
    art_sign_.assign(m_, 1.0);
    int next = nstruct_;
    for (int i = 0; i < m_; ++i)
        if (lp_.rows[i].kind == RowKind::LessEq) slack_of_[i] = next++;
    nart_ = 0;
    for (int i = 0; i < m_; ++i) {
        const bool le = lp_.rows[i].kind == RowKind::LessEq;
        if (le && resid[i] >= 0.0) continue;
        art_of_[i] = next++;
        art_sign_[i] = resid[i] < 0.0 ? -1.0 : 1.0;
        ++nart_;
    }
    ntot_ = nstruct_ + nslack_ + nart_;

    lo_.resize(ntot_, 0.0);
    up_.resize(ntot_, kInf);
    stat_.resize(ntot_, AT_LOWER);
    cost_.assign(ntot_, 0.0);

    tab_.assign(static_cast<size_t>(m_) * ntot_, 0.0);
    beta_.assign(m_, 0.0);
    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
        double* row = tab_row(i);
        const double sign = art_of_[i] >= 0 ? art_sign_[i] : 1.0;
        for (const auto& [j, a] : lp_.rows[i].terms) row[j] += sign * a;
        if (slack_of_[i] >= 0) row[slack_of_[i]] = sign;
        if (art_of_[i] >= 0) row[art_of_[i]] = 1.0; // sign * sign
        if (art_of_[i] >= 0) {
            basis_[i] = art_of_[i];
            beta_[i] = sign * resid[i];
            cost_[art_of_[i]] = 1.0;
        } else {
            basis_[i] = slack_of_[i];
            beta_[i] = resid[i];
        }
        stat_[basis_[i]] = BASIC;
    }

    cols_.assign(ntot_, {});
    for (int i = 0; i < m_; ++i) {
        for (const auto& [j, a] : lp_.rows[i].terms) cols_[j].push_back({i, a});
        if (slack_of_[i] >= 0) cols_[slack_of_[i]].push_back({i, 1.0});
        if (art_of_[i] >= 0) cols_[art_of_[i]].push_back({i, art_sign_[i]});
    }

    alpha_.assign(std::max(m_, 1), 0.0);
    max_iters_ = opts_.max_iterations > 0 ? opts_.max_iterations : 60L * std::max(m_, 100) + 5000;
}

void Simplex::recompute_duals() {
    dual_.assign(cost_.begin(), cost_.end());
    for (int i = 0; i < m_; ++i) {
        const double cb = cost_[basis_[i]];
        if (cb == 0.0) continue;
        const double* row = tab_row(i);
        for (int j = 0; j < ntot_; ++j) dual_[j] -= cb * row[j];
    }
    for (int i = 0; i < m_; ++i) dual_[basis_[i]] = 0.0;
}

int Simplex::price(int* dir_out) {
    const double tol = opts_.dual_tol;
    int best = -1, best_dir = 0;
    double best_viol = tol;
    for (int j = 0; j < ntot_; ++j) {
        const uint8_t s = stat_[j];
        if (s == BASIC || s == FIXED) continue;
        if (!phase1_ && is_art(j)) continue;
        const double d = dual_[j];
        double viol;
        int dir;
        if (s == AT_LOWER) { viol = -d; dir = 1; }
        else if (s == AT_UPPER) { viol = d; dir = -1; }
        else { viol = std::fabs(d); dir = d > 0 ? -1 : 1; }
        if (viol <= best_viol) continue;
        if (bland_) { *dir_out = dir; return j; }
        best = j; best_dir = dir; best_viol = viol;
    }
    *dir_out = best_dir;
    return best;
}

#ifdef COOPT_LP_DEBUG
void Simplex::debug_feasibility(const char* where, int entering) {
    double worst = 0.0;
    int worst_i = -1;
    for (int i = 0; i < m_; ++i) {
        const int v = basis_[i];
        double viol = 0.0;
        if (std::isfinite(lo_[v])) viol = std::max(viol, lo_[v] - beta_[i]);
        if (std::isfinite(up_[v])) viol = std::max(viol, beta_[i] - up_[v]);
        if (viol > worst) { worst = viol; worst_i = i; }
    }
    if (worst > 1e-7)
        std::fprintf(stderr, "[lpdbg] %s iter=%ld entering=%d: basis row %d var %d value %.9f out of [%g,%g] by %.3g\n",
                     where, iters_, entering, worst_i, basis_[worst_i], beta_[worst_i],
                     lo_[basis_[worst_i]], up_[basis_[worst_i]], worst);
}
#endif

Simplex::StepResult Simplex::step() {
    int dir = 0;
    const int j = price(&dir);
    if (j < 0) return StepResult::Stalled; // optimal for this phase

    for (int i = 0; i < m_; ++i) alpha_[i] = tab_[static_cast<size_t>(i) * ntot_ + j];

    double t_star = kInf;
    if (std::isfinite(lo_[j]) && std::isfinite(up_[j]) && stat_[j] != NB_FREE)
        t_star = up_[j] - lo_[j];
    int leave = -1;
    bool leave_to_upper = false;
    double best_a = 0.0;
    for (int i = 0; i < m_; ++i) {
        const double a = alpha_[i];
        if (std::fabs(a) < 1e-11) continue;
        const double move = dir * a; // basic i changes at rate -move per unit t
        double ti;
        bool to_upper;
        const int bv = basis_[i];
        if (move > 0) {
            if (!std::isfinite(lo_[bv])) continue;
            ti = (beta_[i] - lo_[bv]) / move;
            to_upper = false;
        } else {
            if (!std::isfinite(up_[bv])) continue;
            ti = (beta_[i] - up_[bv]) / move;
            to_upper = true;
        }
        if (ti < 0.0) ti = 0.0;
        bool take = false;
        if (ti < t_star - 1e-12) take = true;
        else if (leave >= 0 && ti < t_star + 1e-12) {
            if (bland_) take = basis_[i] < basis_[leave];
            else take = std::fabs(a) > std::fabs(best_a);
        }
        if (take) { t_star = std::min(t_star, ti); leave = i; leave_to_upper = to_upper; best_a = a; }
    }

    if (!std::isfinite(t_star)) {
        note_ = "direction of unbounded descent on " +
                (j < nstruct_ && !lp_.var_names.empty() && !lp_.var_names[j].empty()
                     ? lp_.var_names[j]
                     : "variable " + std::to_string(j));
        return StepResult::Unbounded;
    }

    degen_streak_ = t_star <= 1e-10 ? degen_streak_ + 1 : 0;
    if (degen_streak_ > std::max(500, m_)) bland_ = true;
    else if (t_star > 1e-7) bland_ = false;

    if (leave < 0) {
        // Bound flip: no basis change.
        for (int i = 0; i < m_; ++i)
            if (alpha_[i] != 0.0) beta_[i] -= t_star * dir * alpha_[i];
        stat_[j] = stat_[j] == AT_LOWER ? AT_UPPER : AT_LOWER;
#ifdef COOPT_LP_DEBUG
        debug_feasibility("flip", j);
#endif
        return StepResult::Moved;
    }

    const double newval = value_of(j) + dir * t_star;
    for (int i = 0; i < m_; ++i)
        if (i != leave && alpha_[i] != 0.0) beta_[i] -= t_star * dir * alpha_[i];

    const int lv = basis_[leave];
    if (is_art(lv)) {
        // Artificials never come back.
        up_[lv] = 0.0;
        stat_[lv] = FIXED;
    } else {
        stat_[lv] = leave_to_upper ? AT_UPPER : AT_LOWER;
        if (lo_[lv] == up_[lv]) stat_[lv] = FIXED;
    }

    double* prow = tab_row(leave);
    const double piv = prow[j];
    const double inv = 1.0 / piv;
    for (int c = 0; c < ntot_; ++c) prow[c] *= inv;
    prow[j] = 1.0;
    beta_[leave] = newval;

    kernels::eliminate(opts_.parallel, tab_.data(), ntot_, m_, leave, alpha_.data(), prow);

    const double dj = dual_[j];
    if (dj != 0.0)
        for (int c = 0; c < ntot_; ++c) dual_[c] -= dj * prow[c];
    dual_[j] = 0.0;

    basis_[leave] = j;
    stat_[j] = BASIC;
#ifdef COOPT_LP_DEBUG
    debug_feasibility("pivot", j);
#endif
    return StepResult::Moved;
}

bool Simplex::drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
        if (!is_art(basis_[i])) continue;
        const double* row = tab_row(i);
        int pick = -1;
        double best = 1e-8;
        for (int j = 0; j < nstruct_ + nslack_; ++j) {
            if (stat_[j] == BASIC || stat_[j] == FIXED) continue;
            const double a = std::fabs(row[j]);
            if (a > best) { best = a; pick = j; }
        }
        if (pick < 0) continue; // redundant row; artificial stays basic at zero
        for (int r = 0; r < m_; ++r) alpha_[r] = tab_[static_cast<size_t>(r) * ntot_ + pick];
        const int lv = basis_[i];
        stat_[lv] = AT_LOWER;
        up_[lv] = 0.0; // lock
        double* prow = tab_row(i);
        const double inv = 1.0 / prow[pick];
        for (int c = 0; c < ntot_; ++c) prow[c] *= inv;
        prow[pick] = 1.0;
        beta_[i] = value_of(pick);
        kernels::eliminate(opts_.parallel, tab_.data(), ntot_, m_, i, alpha_.data(), prow);
        basis_[i] = pick;
        stat_[pick] = BASIC;
    }
    return true;
}

// Exact primal/dual for the final basis, factored from original problem data.
void Simplex::reconstruct(std::vector<double>& x, std::vector<double>& y, std::vector<double>& d) {
    Matrix B(m_, m_);
    for (int i = 0; i < m_; ++i)
        for (const auto& [r, a] : cols_[basis_[i]]) B.at(r, i) = a;

    std::vector<double> rhs(m_);
    for (int i = 0; i < m_; ++i) rhs[i] = lp_.rows[i].rhs;
    for (int j = 0; j < ntot_; ++j) {
        if (stat_[j] == BASIC) continue;
        const double v = value_of(j);
        if (v == 0.0) continue;
        for (const auto& [r, a] : cols_[j]) rhs[r] -= a * v;
    }

    LuSolver lu(B, opts_.parallel);
    x.assign(ntot_, 0.0);
    y.assign(m_, 0.0);
    d.assign(ntot_, 0.0);
    if (!lu.ok()) {
        // Fall back to tableau values; drift is usually tiny.
        for (int j = 0; j < ntot_; ++j) x[j] = value_of(j);
        for (int i = 0; i < m_; ++i) x[basis_[i]] = beta_[i];
        std::vector<double> cb(m_);
        for (int j = 0; j < ntot_; ++j) d[j] = dual_[j];
        for (int i = 0; i < m_; ++i) {
            const int s = slack_of_[i] >= 0 ? slack_of_[i] : art_of_[i];
            const double sg = slack_of_[i] >= 0 ? 1.0 : art_sign_[i];
            y[i] = s >= 0 ? -dual_[s] / sg : 0.0;
        }
        note_ += "; basis refactorization failed, tableau values returned";
        return;
    }

    lu.solve(rhs.data()); // rhs now holds exact basic values
    for (int j = 0; j < ntot_; ++j) x[j] = value_of(j);
    for (int i = 0; i < m_; ++i) { x[basis_[i]] = rhs[i]; beta_[i] = rhs[i]; }

    std::vector<double> cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost_[basis_[i]];
    lu.solve_transpose(cb.data());
    y = cb;

    for (int j = 0; j < ntot_; ++j) {
        if (stat_[j] == BASIC) { d[j] = 0.0; continue; }
        double s = cost_[j];
        for (const auto& [r, a] : cols_[j]) s -= y[r] * a;
        d[j] = s;
    }
}

PrimalDualSolution Simplex::extract(SolveStatus st) {
    PrimalDualSolution sol;
    sol.status = st;
    sol.iterations = iters_;
    sol.diagnostic = note_;
    if (st != SolveStatus::Optimal) return sol;

    std::vector<double> x, y, d;
    reconstruct(x, y, d);

    sol.x.assign(x.begin(), x.begin() + nstruct_);
    sol.reduced_cost.assign(d.begin(), d.begin() + nstruct_);
    sol.row_dual.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i)
        sol.row_dual[i] = lp_.rows[i].kind == RowKind::Equal ? y[i] : -y[i];
    double obj = 0.0;
    for (int j = 0; j < nstruct_; ++j) obj += lp_.cost[j] * sol.x[j];
    sol.objective = obj;
    return sol;
}

PrimalDualSolution Simplex::run() {
    // Cheap sanity checks first.
    for (int j = 0; j < lp_.num_vars(); ++j) {
        if (std::isnan(lp_.cost[j]) || std::isinf(lp_.cost[j]) || std::isnan(lp_.lower[j]) ||
            std::isnan(lp_.upper[j])) {
            PrimalDualSolution s;
            s.status = SolveStatus::NumericalFailure;
            s.diagnostic = "non-finite data on variable " + std::to_string(j);
            return s;
        }
        if (lp_.lower[j] > lp_.upper[j]) {
            PrimalDualSolution s;
            s.status = SolveStatus::Infeasible;
            s.diagnostic = "inconsistent bounds on variable " + std::to_string(j);
            return s;
        }
    }
    for (const auto& r : lp_.rows)
        for (const auto& [j, a] : r.terms)
            if (j < 0 || j >= lp_.num_vars() || !std::isfinite(a)) {
                PrimalDualSolution s;
                s.status = SolveStatus::NumericalFailure;
                s.diagnostic = "bad row term";
                return s;
            }

    build();

    double bscale = 1.0;
    for (const auto& r : lp_.rows) bscale = std::max(bscale, std::fabs(r.rhs));

    phase1_ = nart_ > 0;
    if (phase1_) {
        recompute_duals();
        while (true) {
            if (++iters_ > max_iters_) {
                note_ = "iteration limit in phase 1";
                return extract(SolveStatus::NumericalFailure);
            }
            const StepResult r = step();
            if (r == StepResult::Stalled) break;
            if (r == StepResult::Unbounded) {
                note_ = "phase 1 unbounded (numerical trouble)";
                return extract(SolveStatus::NumericalFailure);
            }
        }
        double infeas = 0.0;
        for (int i = 0; i < m_; ++i)
            if (is_art(basis_[i])) infeas += std::max(beta_[i], 0.0);
        if (infeas > 1e-7 * bscale) {
            std::ostringstream os;
            os << "infeasible (phase-1 residual " << infeas << "); unsatisfied rows:";
            int listed = 0;
            for (int i = 0; i < m_ && listed < 5; ++i) {
                if (!is_art(basis_[i]) || beta_[i] <= 1e-9 * bscale) continue;
                os << ' ' << (lp_.rows[i].name.empty() ? "row " + std::to_string(i) : lp_.rows[i].name);
                ++listed;
            }
            note_ = os.str();
            return extract(SolveStatus::Infeasible);
        }
        drive_out_artificials();
        // Lock every artificial out of phase 2.
        for (int j = nstruct_ + nslack_; j < ntot_; ++j) {
            up_[j] = 0.0;
            cost_[j] = 0.0;
        }
    }

    phase1_ = false;
    for (int j = 0; j < nstruct_; ++j) cost_[j] = lp_.cost[j];
    recompute_duals();
    while (true) {
        if (++iters_ > max_iters_) {
            note_ = "iteration limit in phase 2";
            return extract(SolveStatus::NumericalFailure);
        }
        const StepResult r = step();
        if (r == StepResult::Stalled) break;
        if (r == StepResult::Unbounded) return extract(SolveStatus::Unbounded);
    }
    return extract(SolveStatus::Optimal);
}

} // namespace

PrimalDualSolution solve_lp(const LinearProgram& lp, const SolveOptions& opts) {
    Simplex s(lp, opts);
    return s.run();
}

KktReport check_kkt(const LinearProgram& lp, const PrimalDualSolution& sol,
                    const KktTolerances& tol) {
    KktReport rep;
    const int n = lp.num_vars();
    const int m = lp.num_rows();
    if (sol.status != SolveStatus::Optimal || static_cast<int>(sol.x.size()) != n ||
        static_cast<int>(sol.row_dual.size()) != m || static_cast<int>(sol.reduced_cost.size()) != n) {
        rep.pass = false;
        rep.duality_gap_rel = rep.stationarity = rep.complementarity = rep.dual_feasibility =
            rep.primal_feasibility = kInf;
        return rep;
    }

    // y in "c = A'y + d" space: lambda on equalities, -mu on <= rows.
    std::vector<double> station(lp.cost.begin(), lp.cost.end());
    double primal = 0.0, compl_res = 0.0, dualfeas = 0.0;
    double dual_obj = 0.0;

    for (int i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        double ax = 0.0;
        for (const auto& [j, a] : row.terms) ax += a * sol.x[j];
        const double dual = sol.row_dual[i];
        if (row.kind == RowKind::Equal) {
            primal = std::max(primal, std::fabs(ax - row.rhs));
            dual_obj += dual * row.rhs;
            for (const auto& [j, a] : row.terms) station[j] -= dual * a;
        } else {
            primal = std::max(primal, ax - row.rhs);
            dualfeas = std::max(dualfeas, -dual);
            compl_res = std::max(compl_res, std::fabs(dual * (row.rhs - ax)));
            dual_obj -= dual * row.rhs;
            for (const auto& [j, a] : row.terms) station[j] += dual * a;
        }
    }

    double primal_obj = 0.0;
    for (int j = 0; j < n; ++j) {
        const double x = sol.x[j], lo = lp.lower[j], up = lp.upper[j], dj = sol.reduced_cost[j];
        primal_obj += lp.cost[j] * x;
        if (std::isfinite(lo)) primal = std::max(primal, lo - x);
        if (std::isfinite(up)) primal = std::max(primal, x - up);
        station[j] -= dj;
        const double th_lo = std::max(dj, 0.0), th_up = std::max(-dj, 0.0);
        if (th_lo > 0.0) {
            if (std::isfinite(lo)) { dual_obj += th_lo * lo; compl_res = std::max(compl_res, th_lo * std::fabs(x - lo)); }
            else dualfeas = std::max(dualfeas, th_lo);
        }
        if (th_up > 0.0) {
            if (std::isfinite(up)) { dual_obj -= th_up * up; compl_res = std::max(compl_res, th_up * std::fabs(up - x)); }
            else dualfeas = std::max(dualfeas, th_up);
        }
    }

    double stat_res = 0.0;
    for (int j = 0; j < n; ++j) stat_res = std::max(stat_res, std::fabs(station[j]));

    rep.primal_feasibility = primal;
    rep.stationarity = stat_res;
    rep.complementarity = compl_res;
    rep.dual_feasibility = dualfeas;
    rep.duality_gap_rel = std::fabs(primal_obj - dual_obj) / (1.0 + std::fabs(primal_obj));
    rep.pass = rep.duality_gap_rel <= tol.gap_rel && rep.stationarity <= tol.stationarity &&
               rep.complementarity <= tol.complementarity &&
               rep.dual_feasibility <= tol.dual_feasibility &&
               rep.primal_feasibility <= tol.primal_feasibility;
    return rep;
}

PrimalDualSolution refine_duals(const LinearProgram& lp, const PrimalDualSolution& sol,
                                const SolveOptions& opts) {
    if (sol.status != SolveStatus::Optimal) return sol;
    const int n = lp.num_vars();
    const int m = lp.num_rows();

    LinearProgram sel;
    // One multiplier variable per equality row, per active <= row, per active bound.
    std::vector<int> row_var(m, -1);
    for (int i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        if (row.kind == RowKind::Equal) {
            row_var[i] = sel.add_var(0.0, -kInf, kInf);
            continue;
        }
        double ax = 0.0;
        for (const auto& [j, a] : row.terms) ax += a * sol.x[j];
        if (row.rhs - ax <= 1e-9 * (1.0 + std::fabs(row.rhs)))
            row_var[i] = sel.add_var(1.0, 0.0, kInf);
    }
    std::vector<int> lo_var(n, -1), up_var(n, -1);
    for (int j = 0; j < n; ++j) {
        const double x = sol.x[j];
        if (std::isfinite(lp.lower[j]) && x - lp.lower[j] <= 1e-9 * (1.0 + std::fabs(lp.lower[j])))
            lo_var[j] = sel.add_var(1.0, 0.0, kInf);
        if (std::isfinite(lp.upper[j]) && lp.upper[j] - x <= 1e-9 * (1.0 + std::fabs(lp.upper[j])))
            up_var[j] = sel.add_var(1.0, 0.0, kInf);
    }

    // Stationarity of the original LP, one equality per variable:
    //   sum_eq lambda a - sum_le mu a + th_lo - th_up = c.
    std::vector<std::vector<std::pair<int, double>>> terms(n);
    for (int i = 0; i < m; ++i) {
        if (row_var[i] < 0) continue;
        const double sgn = lp.rows[i].kind == RowKind::Equal ? 1.0 : -1.0;
        for (const auto& [j, a] : lp.rows[i].terms) terms[j].push_back({row_var[i], sgn * a});
    }
    for (int j = 0; j < n; ++j) {
        if (lo_var[j] >= 0) terms[j].push_back({lo_var[j], 1.0});
        if (up_var[j] >= 0) terms[j].push_back({up_var[j], -1.0});
        sel.add_row(RowKind::Equal, lp.cost[j], std::move(terms[j]));
    }

    SolveOptions sopts = opts;
    sopts.max_iterations = 0;
    const PrimalDualSolution ssol = solve_lp(sel, sopts);
    if (ssol.status != SolveStatus::Optimal) {
        PrimalDualSolution out = sol;
        out.diagnostic += "; dual selection LP " + std::string(to_string(ssol.status)) +
                          ", original duals kept";
        return out;
    }

    PrimalDualSolution out = sol;
    for (int i = 0; i < m; ++i)
        out.row_dual[i] = row_var[i] >= 0 ? ssol.x[row_var[i]] : 0.0;
    for (int j = 0; j < n; ++j) {
        double d = 0.0;
        if (lo_var[j] >= 0) d += ssol.x[lo_var[j]];
        if (up_var[j] >= 0) d -= ssol.x[up_var[j]];
        out.reduced_cost[j] = d;
    }
    return out;
}

static std::string lp_name(const std::string& given, const char* prefix, int idx) {
    if (!given.empty()) {
        std::string s = given;
        for (char& c : s)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) c = '_';
        return s;
    }
    return std::string(prefix) + std::to_string(idx);
}

void write_lp_format(const LinearProgram& lp, std::ostream& os) {
    os << "Minimize\n obj:";
    for (int j = 0; j < lp.num_vars(); ++j) {
        const double c = lp.cost[j];
        if (c == 0.0) continue;
        os << (c >= 0 ? " + " : " - ") << std::fabs(c) << ' '
           << lp_name(lp.var_names.empty() ? "" : lp.var_names[j], "x", j);
    }
    os << "\nSubject To\n";
    for (int i = 0; i < lp.num_rows(); ++i) {
        const auto& r = lp.rows[i];
        os << ' ' << lp_name(r.name, "c", i) << ':';
        for (const auto& [j, a] : r.terms)
            os << (a >= 0 ? " + " : " - ") << std::fabs(a) << ' '
               << lp_name(lp.var_names.empty() ? "" : lp.var_names[j], "x", j);
        os << (r.kind == RowKind::Equal ? " = " : " <= ") << r.rhs << '\n';
    }
    os << "Bounds\n";
    for (int j = 0; j < lp.num_vars(); ++j) {
        const std::string nm = lp_name(lp.var_names.empty() ? "" : lp.var_names[j], "x", j);
        const double lo = lp.lower[j], up = lp.upper[j];
        if (!std::isfinite(lo) && !std::isfinite(up)) os << ' ' << nm << " free\n";
        else if (!std::isfinite(up)) os << ' ' << lo << " <= " << nm << '\n';
        else if (!std::isfinite(lo)) os << " -inf <= " << nm << " <= " << up << '\n';
        else os << ' ' << lo << " <= " << nm << " <= " << up << '\n';
    }
    os << "End\n";
}

} // namespace coopt
