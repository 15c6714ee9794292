#ifndef COOPT_CASEIO_HPP
#define COOPT_CASEIO_HPP

#include "coopt/baseline.hpp"
#include "coopt/market.hpp"
#include "coopt/montecarlo.hpp"
#include "coopt/pricing.hpp"
#include "coopt/settlement.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace coopt {

inline constexpr const char* kToolVersion = "0.1.0";

/// Ingestion failure carrying every finding, not just the first.
/// kind: "parse" | "schema" | "semantic".
struct CaseIoError : std::runtime_error {
    std::string kind;
    std::vector<Issue> issues;
    CaseIoError(std::string k, std::vector<Issue> iss);
};

/// Loads and fully validates a case file. With strict, warnings are errors.
/// Non-fatal warnings are appended to *warnings when provided.
MarketCase load_case(const std::string& path, bool strict = false,
                     std::vector<Issue>* warnings = nullptr);

MarketCase parse_case_json(const std::string& text, bool strict = false,
                           std::vector<Issue>* warnings = nullptr);

std::string serialize_case(const MarketCase& c);

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::string& path); // throws CaseIoError("parse") when unreadable

// CSV emitters. Deterministic bodies: fixed column order, fixed formatting,
// '\n' line endings. Ledger and profit values are rounded to cents on output
// only.
void write_solution_csv(std::ostream& os, const PreparedCase& pc, const CooptSolution& sol);
void write_prices_csv(std::ostream& os, const PreparedCase& pc, const PriceSystem& p);
void write_ledger_csv(std::ostream& os, const SettlementLedger& ledger);
void write_profit_csv(std::ostream& os, const ProfitReport& rep);
void write_comparison_csv(std::ostream& os, const ComparisonTable& table);
void write_convergence_csv(std::ostream& os, const SimulationResult& sim);
void write_envelope_csv(std::ostream& os, const std::vector<EnvelopeReport>& reports);
void write_kkt_report(std::ostream& os, const KktReport& rep, double objective);
void write_surplus_report(std::ostream& os, const SurplusReport& rep);

struct RunManifest {
    std::string command;
    std::string case_path;
    std::string case_sha256;
    std::uint64_t seed = 0;
    int samples = 0;
    std::vector<double> kappa_grid;
    double kappa_down_ratio = 1.0;
    int threads = 0;
    double elapsed_seconds = 0.0;
    std::vector<std::string> outputs;
};
void write_manifest(std::ostream& os, const RunManifest& m);

} // namespace coopt

#endif
