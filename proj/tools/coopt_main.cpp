// Command-line front end: validate | solve | price | settle | simulate | compare.
// Exit codes: 0 success, 1 infeasible/unbounded, 2 input error, 3 internal error.

#include <CLI11.hpp>

#include "coopt/caseio.hpp"
#include "coopt/coopt_model.hpp"
#include "coopt/montecarlo.hpp"

#include <omp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace coopt;

namespace {

struct CommonArgs {
    std::string case_path;
    std::string out_dir = "out";
    std::uint64_t seed = 7;
    int samples = 10000;
    std::string kappa_grid = "0:0.1:0.01";
    double kappa_down_ratio = 1.0;
    std::string initial_state = "auto";
    bool strict = false;
    int threads = 0;
    bool no_refine = false;
    std::string dump_lp;
    int envelope_points = -1; // -1 = automatic
    double fd_step = 1e-3;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--case", a.case_path, "case file (JSON)")->required();
    cmd->add_option("--out-dir", a.out_dir, "output directory");
    cmd->add_option("--seed", a.seed, "random seed");
    cmd->add_option("--samples", a.samples, "Monte Carlo sample count");
    cmd->add_option("--kappa-grid", a.kappa_grid, "reserve requirement sweep a:b:step");
    cmd->add_option("--kappa-down-ratio", a.kappa_down_ratio,
                    "downward requirement as a fraction of the upward one");
    cmd->add_option("--initial-state", a.initial_state,
                    "period-1 ramping against the case's initial state: auto|require|ignore")
        ->check(CLI::IsMember({"auto", "require", "ignore"}));
    cmd->add_flag("--strict", a.strict, "treat case warnings as errors");
    cmd->add_option("--threads", a.threads, "OpenMP threads (0 = library default)");
    cmd->add_flag("--no-refine-duals", a.no_refine, "skip the canonical dual selection");
    cmd->add_option("--dump-lp", a.dump_lp, "write the model in LP text format to this file");
    cmd->add_option("--envelope-points", a.envelope_points,
                    "(price) number of envelope validation points; -1 = all on small cases");
    cmd->add_option("--fd-step", a.fd_step, "(price) finite-difference step in MW");
}

struct Ctx {
    CommonArgs args;
    PreparedCase pc;
    RunManifest manifest;
    std::chrono::steady_clock::time_point started;
};

int prepare(Ctx& ctx, const std::string& command) {
    ctx.started = std::chrono::steady_clock::now();
    if (ctx.args.threads > 0) omp_set_num_threads(ctx.args.threads);
    std::vector<Issue> warnings;
    const std::string body = read_file(ctx.args.case_path);
    MarketCase c = parse_case_json(body, ctx.args.strict, &warnings);
    for (const auto& w : warnings)
        std::cerr << "warning [" << w.code << "] " << w.where << ": " << w.message << '\n';
    ctx.pc = prepare_case(c);
    ctx.manifest.command = command;
    ctx.manifest.case_path = ctx.args.case_path;
    ctx.manifest.case_sha256 = sha256_hex(body);
    ctx.manifest.seed = ctx.args.seed;
    ctx.manifest.samples = ctx.args.samples;
    ctx.manifest.kappa_down_ratio = ctx.args.kappa_down_ratio;
    ctx.manifest.threads = ctx.args.threads > 0 ? ctx.args.threads : omp_get_max_threads();
    fs::create_directories(ctx.args.out_dir);
    return 0;
}

void finish(Ctx& ctx) {
    ctx.manifest.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.started).count();
    const std::string path = ctx.args.out_dir + "/manifest.json";
    std::ofstream os(path, std::ios::binary);
    write_manifest(os, ctx.manifest);
}

std::ofstream open_out(Ctx& ctx, const std::string& name) {
    const std::string path = ctx.args.out_dir + "/" + name;
    ctx.manifest.outputs.push_back(name);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    return os;
}

ModelSolveOptions solve_options(const CommonArgs& a) {
    ModelSolveOptions o;
    o.refine_duals = !a.no_refine;
    if (a.initial_state == "require") o.build.initial = InitialRamping::Require;
    else if (a.initial_state == "ignore") o.build.initial = InitialRamping::Ignore;
    else o.build.initial = InitialRamping::Auto;
    return o;
}

std::vector<double> parse_grid(const std::string& spec) {
    // "a:b:step" inclusive; a single number is a one-point grid.
    std::vector<double> out;
    double a = 0, b = 0, step = 0;
    const int n = std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &step);
    if (n == 1) { out.push_back(a); return out; }
    if (n != 3 || step <= 0 || b < a)
        throw std::invalid_argument("bad --kappa-grid, expected a:b:step");
    for (double v = a; v <= b + 1e-12; v += step) out.push_back(v);
    return out;
}

int solve_status_code(SolveStatus st) {
    switch (st) {
        case SolveStatus::Optimal: return 0;
        case SolveStatus::Infeasible:
        case SolveStatus::Unbounded: return 1;
        default: return 3;
    }
}

CooptSolution solve_and_report(Ctx& ctx, const ModelSolveOptions& opts) {
    if (!ctx.args.dump_lp.empty()) {
        const BuiltModel bm = build_coopt_model(ctx.pc, opts.build);
        std::ofstream os(ctx.args.dump_lp, std::ios::binary);
        write_lp_format(bm.lp, os);
        std::cout << "model written to " << ctx.args.dump_lp << '\n';
    }
    CooptSolution sol = solve_coopt_model(ctx.pc, opts);
    if (sol.status != SolveStatus::Optimal)
        std::cerr << "solve: " << to_string(sol.status) << " — " << sol.diagnostic << '\n';
    else
        std::cout << "objective " << sol.objective << " (" << sol.iterations << " iterations, kkt "
                  << (sol.kkt.pass ? "pass" : "FAIL") << ")\n";
    return sol;
}

int cmd_validate(Ctx& ctx) {
    const auto& c = ctx.pc.data;
    std::cout << "case '" << c.name << "': " << c.grid.num_buses() << " buses, "
              << c.grid.num_lines() << " lines, " << c.num_generators() << " generators, "
              << c.num_loads() << " loads, T=" << c.periods() << ", K=" << ctx.pc.num_scenarios()
              << ", base-case probability " << ctx.pc.base_probability << '\n';
    return 0;
}

int cmd_solve(Ctx& ctx) {
    const auto opts = solve_options(ctx.args);
    const CooptSolution sol = solve_and_report(ctx, opts);
    if (sol.status != SolveStatus::Optimal) return solve_status_code(sol.status);
    { auto os = open_out(ctx, "solution.csv"); write_solution_csv(os, ctx.pc, sol); }
    { auto os = open_out(ctx, "kkt_report.csv"); write_kkt_report(os, sol.kkt, sol.objective); }
    return 0;
}

int cmd_price(Ctx& ctx) {
    const auto opts = solve_options(ctx.args);
    const CooptSolution sol = solve_and_report(ctx, opts);
    if (sol.status != SolveStatus::Optimal) return solve_status_code(sol.status);
    const PriceSystem prices = compute_prices(ctx.pc, sol);
    { auto os = open_out(ctx, "prices.csv"); write_prices_csv(os, ctx.pc, prices); }

    // Envelope validation re-solves the restricted model twice per quantity,
    // so large cases only check a budgeted sample of (generator, period).
    int budget = ctx.args.envelope_points;
    const long lp_vars = static_cast<long>(sol.T) * (3 * sol.J + sol.K * (2 * sol.J + sol.L));
    if (budget < 0) budget = lp_vars <= 800 ? sol.T * sol.J : 0;
    std::vector<EnvelopeReport> reports;
    for (int t = 0; t < sol.T && static_cast<int>(reports.size()) < budget; ++t)
        for (int j = 0; j < sol.J && static_cast<int>(reports.size()) < budget; ++j)
            reports.push_back(envelope_check(ctx.pc, sol, prices, j, t, ctx.args.fd_step, opts.lp));
    { auto os = open_out(ctx, "envelope.csv"); write_envelope_csv(os, reports); }
    if (budget == 0)
        std::cout << "envelope validation skipped (large case; use --envelope-points)\n";
    return 0;
}

int cmd_settle(Ctx& ctx) {
    const auto opts = solve_options(ctx.args);
    const CooptSolution sol = solve_and_report(ctx, opts);
    if (sol.status != SolveStatus::Optimal) return solve_status_code(sol.status);
    const PriceSystem prices = compute_prices(ctx.pc, sol);
    const SettlementLedger ledger = build_expected_ledger(ctx.pc, sol, prices);
    const ProfitReport profit = generator_profit_report(ctx.pc, sol, prices);
    const SurplusReport surplus = expected_merchandise_surplus(ctx.pc, sol, prices);
    { auto os = open_out(ctx, "ledger.csv"); write_ledger_csv(os, ledger); }
    { auto os = open_out(ctx, "profit.csv"); write_profit_csv(os, profit); }
    { auto os = open_out(ctx, "surplus.csv"); write_surplus_report(os, surplus); }
    std::cout << "total expected merchandise surplus " << surplus.total << '\n';
    return 0;
}

int cmd_simulate(Ctx& ctx) {
    const auto opts = solve_options(ctx.args);
    const CooptSolution sol = solve_and_report(ctx, opts);
    if (sol.status != SolveStatus::Optimal) return solve_status_code(sol.status);
    const PriceSystem prices = compute_prices(ctx.pc, sol);
    const BaseDispatch dispatch = dispatch_from_coopt(ctx.pc, sol);
    const SimulationResult sim = run_simulation(ctx.pc, dispatch, &prices, &sol, ctx.args.samples,
                                                ctx.args.seed, opts.lp);
    if (!sim.feasible) {
        std::cerr << "simulate: recourse infeasible for " << sim.infeasible_kt.size()
                  << " (scenario, period) pairs\n";
        return 1;
    }
    { auto os = open_out(ctx, "convergence.csv"); write_convergence_csv(os, sim); }
    std::cout << "samples " << sim.samples << ": avg cost " << sim.mean_cost << " (se "
              << sim.se_cost << ", expectation " << sim.expected_cost << "), avg net revenue "
              << sim.mean_net_revenue << " (se " << sim.se_net_revenue << ", expectation "
              << sim.expected_net_revenue << ")\n";
    return 0;
}

int cmd_compare(Ctx& ctx) {
    const auto opts = solve_options(ctx.args);
    std::vector<double> kappas = parse_grid(ctx.args.kappa_grid);
    ctx.manifest.kappa_grid = kappas;
    std::vector<ReserveRequirement> grid;
    for (double k : kappas) grid.push_back({k, k * ctx.args.kappa_down_ratio});
    const ComparisonTable table =
        compare_models(ctx.pc, grid, ctx.args.samples, ctx.args.seed, opts);
    { auto os = open_out(ctx, "comparison.csv"); write_comparison_csv(os, table); }
    for (const auto& r : table.rows)
        std::cout << r.label << ": " << r.status
                  << (r.status == "ok" ? " expected total " + std::to_string(r.expected_total) : "")
                  << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-period energy-reserve co-optimization market engine"};
    app.require_subcommand(1);

    CommonArgs args;
    int (*handler)(Ctx&) = nullptr;
    auto reg = [&](const char* name, const char* desc, int (*fn)(Ctx&)) {
        CLI::App* cmd = app.add_subcommand(name, desc);
        add_common(cmd, args);
        cmd->callback([&handler, fn]() { handler = fn; });
        return cmd;
    };
    reg("validate", "load and validate a case file", cmd_validate);
    reg("solve", "clear the market and write the solution", cmd_solve);
    reg("price", "derive marginal prices and the envelope report", cmd_price);
    reg("settle", "run the two-stage settlement in expectation", cmd_settle);
    reg("simulate", "Monte Carlo convergence of cost and operator net revenue", cmd_simulate);
    reg("compare", "requirement sweep against the co-optimized schedule", cmd_compare);

    CLI11_PARSE(app, argc, argv);

    Ctx ctx;
    ctx.args = args;
    try {
        prepare(ctx, app.get_subcommands().front()->get_name());
        const int rc = handler(ctx);
        finish(ctx);
        return rc;
    } catch (const CaseIoError& e) {
        std::cerr << "input error (" << e.kind << "):\n" << format_issues(e.issues);
        return 2;
    } catch (const CaseValidationError& e) {
        std::cerr << "input error (semantic):\n" << format_issues(e.issues);
        return 2;
    } catch (const MissingInitialState& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
