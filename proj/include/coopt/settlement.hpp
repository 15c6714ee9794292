#ifndef COOPT_SETTLEMENT_HPP
#define COOPT_SETTLEMENT_HPP

#include "coopt/pricing.hpp"

#include <string>
#include <vector>

namespace coopt {

struct UnknownScenario : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cash-flow directions for the ex-post stage, as sign multipliers on the
/// default convention (operator pays generators for upward re-dispatch,
/// generators refund downward re-dispatch, operator compensates shed load).
struct SettlementDirections {
    double redispatch_up_to_generator = 1.0;
    double redispatch_down_refund = 1.0;
    double shed_compensation = 1.0;
};

struct LedgerEntry {
    int period = 0;          // 0-based
    std::string party;       // "generator:<id>", "load:<id>", "operator"
    std::string component;   // ex_ante_energy, ex_ante_reserve_up, ...
    std::string scenario;    // "" ex-ante, "expected", or a scenario id
    double amount = 0.0;     // $ inflow to the party (negative = payment)
};

struct SettlementLedger {
    std::vector<LedgerEntry> entries;

    double sum(const std::string& party, int period = -1) const;
    double sum_component(const std::string& component, int period = -1) const;
    double period_total(int period) const; // all parties including operator
};

/// Ex-ante stage: energy and both reserves settled at the marginal prices;
/// loads pay for their base demand.
std::vector<LedgerEntry> ex_ante_settlement(const PreparedCase& pc, const CooptSolution& sol,
                                            const PriceSystem& prices);

/// Per-scenario fluctuation charges: scenario price component times the
/// scenario's fluctuation, signed (negative fluctuation earns a credit).
/// charge(t,k,l) as charged to the load; ledger entries carry -charge.
struct FluctuationCharges {
    int T = 0, K = 0, L = 0;
    std::vector<double> charge;     // [(t*K+k)*L+l]
    std::vector<double> per_period; // [t*L+l] summed over scenarios
    std::vector<LedgerEntry> entries;
    int tkl(int t, int k, int l) const { return (t * K + k) * L + l; }
    int tl(int t, int l) const { return t * L + l; }
};
FluctuationCharges fluctuation_charges(const PreparedCase& pc, const CooptSolution& sol,
                                       const PriceSystem& prices);

/// One step of the ex-post stage: cash flows for the scenario realized in
/// period t (scenario = -1 for the base case, which settles nothing).
std::vector<LedgerEntry> ex_post_settlement(const PreparedCase& pc, const CooptSolution& sol,
                                            int realized_scenario, int period,
                                            const SettlementDirections& dir = {});

/// Probability-weighted ex-post cash flows for every period.
std::vector<LedgerEntry> expected_ex_post(const PreparedCase& pc, const CooptSolution& sol,
                                          const SettlementDirections& dir = {});

/// Everything the operator expects to collect and pay, per period: ex-ante
/// inflow (load payments + fluctuation charges - generator payments) minus the
/// expected ex-post net outflow.
struct SurplusReport {
    std::vector<double> ex_ante;          // per period
    std::vector<double> expected_ex_post; // per period, operator outflow (positive)
    std::vector<double> surplus;          // per period, ex_ante - expected_ex_post
    double total = 0.0;
};
SurplusReport expected_merchandise_surplus(const PreparedCase& pc, const CooptSolution& sol,
                                           const PriceSystem& prices,
                                           const SettlementDirections& dir = {});

/// Full expected-value ledger: ex-ante entries, fluctuation charges, expected
/// ex-post entries, and one operator row per period closing the books.
SettlementLedger build_expected_ledger(const PreparedCase& pc, const CooptSolution& sol,
                                       const PriceSystem& prices,
                                       const SettlementDirections& dir = {});

/// Per-generator profit accounting with bids taken as costs: market receipts
/// (ex-ante plus expected ex-post) minus bid-in base costs and expected
/// re-dispatch costs.
struct ProfitReport {
    struct Row {
        std::string generator;
        int period = 0;
        double ex_ante_receipts = 0.0;
        double expected_ex_post_receipts = 0.0;
        double base_bid_cost = 0.0;
        double expected_redispatch_cost = 0.0;
        double profit = 0.0;
    };
    std::vector<Row> rows;            // per generator per period
    std::vector<double> total;        // per generator
    std::vector<std::string> generator_ids;
};
ProfitReport generator_profit_report(const PreparedCase& pc, const CooptSolution& sol,
                                     const PriceSystem& prices,
                                     const SettlementDirections& dir = {});

} // namespace coopt

#endif
