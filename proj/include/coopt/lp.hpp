#ifndef COOPT_LP_HPP
#define COOPT_LP_HPP

#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace coopt {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowKind { Equal, LessEq };

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(SolveStatus s);

/// Sparse LP in the form
///     min c'x   s.t.  A_eq x = b,  A_le x <= b,  lo <= x <= up.
///
/// Dual sign convention (it matters downstream): the Lagrangian is
///     c'x + sum_eq lambda (b - a'x) + sum_le mu (a'x - b),  mu >= 0,
/// so for an active <= row, d(obj)/d(rhs) = -mu, and the dual of a binding
/// lower bound equals the (nonnegative) reduced cost.
struct LinearProgram {
    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::string> var_names;

    struct Row {
        RowKind kind = RowKind::LessEq;
        double rhs = 0.0;
        std::vector<std::pair<int, double>> terms; // (var index, coefficient)
        std::string name;
    };
    std::vector<Row> rows;

    int num_vars() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    int add_var(double c, double lo, double up, std::string name = {});
    int add_row(RowKind kind, double rhs, std::vector<std::pair<int, double>> terms,
                std::string name = {});
};

struct SolveOptions {
    double feas_tol = 1e-9;   // pivot-level primal tolerance
    double dual_tol = 1e-9;   // reduced-cost optimality tolerance
    long max_iterations = 0;  // 0 = automatic (scales with row count)
    bool parallel = true;     // OpenMP kernels on/off (results are identical)
};

struct PrimalDualSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    double objective = 0.0;
    std::vector<double> x;
    // Per row: lambda for Equal rows (free sign), mu >= 0 for LessEq rows.
    std::vector<double> row_dual;
    // Per variable: reduced cost d. d > 0 at a binding lower bound, d < 0 at a
    // binding upper bound, 0 for basic/interior variables.
    std::vector<double> reduced_cost;
    std::string diagnostic;
    long iterations = 0;
};

PrimalDualSolution solve_lp(const LinearProgram& lp, const SolveOptions& opts = {});

struct KktTolerances {
    double gap_rel = 1e-8;
    double stationarity = 1e-6;
    double complementarity = 1e-6;
    double dual_feasibility = 1e-9;
    double primal_feasibility = 1e-7;
};

struct KktReport {
    double duality_gap_rel = 0.0;     // |c'x - dual obj| / (1 + |c'x|)
    double stationarity = 0.0;        // max_j |c_j - A'y - d_j|
    double complementarity = 0.0;     // max |mu * slack|, |d * bound gap|
    double dual_feasibility = 0.0;    // worst sign violation of mu, d
    double primal_feasibility = 0.0;  // worst row/bound violation
    bool pass = false;
};

/// Checks a primal/dual certificate directly against the problem data.
/// Never fails: always returns the four residuals plus primal feasibility.
KktReport check_kkt(const LinearProgram& lp, const PrimalDualSolution& sol,
                    const KktTolerances& tol = {});

/// Canonical dual selection for degenerate optima: among all dual solutions
/// complementary to sol.x, returns the one minimizing the total mass of
/// inequality-row and bound multipliers (a second, smaller LP). The primal
/// point and objective are untouched. Falls back to the input duals if the
/// selection LP cannot be solved.
PrimalDualSolution refine_duals(const LinearProgram& lp, const PrimalDualSolution& sol,
                                const SolveOptions& opts = {});

/// Writes the problem in CPLEX LP text format for external cross-checking.
void write_lp_format(const LinearProgram& lp, std::ostream& os);

} // namespace coopt

#endif
