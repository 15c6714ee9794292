#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coopt/caseio.hpp"
#include "support.hpp"

#include <sstream>

using namespace coopt;

TEST_CASE("bundled fixture loads and round-trips identically") {
    const MarketCase c = load_case(support::case_path("case_b.json"));
    CHECK(c.name == "case_b");
    CHECK(c.periods() == 1);
    CHECK(c.num_generators() == 1);
    CHECK(c.scenarios.size() == 1);

    const std::string text = serialize_case(c);
    const MarketCase again = parse_case_json(text);
    CHECK(again.name == c.name);
    CHECK(again.grid.buses == c.grid.buses);
    REQUIRE(again.grid.lines.size() == c.grid.lines.size());
    CHECK(again.generators.size() == c.generators.size());
    CHECK(again.generators[0].energy_bid == c.generators[0].energy_bid);
    CHECK(again.generators[0].ramp_up == c.generators[0].ramp_up);
    CHECK(again.demand.coefficients == c.demand.coefficients);
    CHECK(again.demand.max_demand == c.demand.max_demand);
    REQUIRE(again.scenarios.size() == c.scenarios.size());
    CHECK(again.scenarios.scenarios[0].probability == c.scenarios.scenarios[0].probability);
    CHECK(again.scenarios.scenarios[0].fluctuation.mw == c.scenarios.scenarios[0].fluctuation.mw);
    // serialize -> parse -> serialize is a fixed point
    CHECK(serialize_case(again) == text);
}

TEST_CASE("24-period demo: structure as shipped") {
    const MarketCase c = load_case(support::case_path("demo24.json"));
    CHECK(c.periods() == 24);
    CHECK(c.scenarios.size() == 8);
    CHECK(c.scenarios.base_probability() == doctest::Approx(0.66).epsilon(1e-12));
    const std::vector<double> coeffs = {0.38, 0.35, 0.38, 0.38, 0.37, 0.37, 0.54, 0.78,
                                        0.88, 0.96, 0.98, 1.0,  1.0,  0.92, 0.84, 0.73,
                                        0.67, 0.62, 0.66, 0.69, 0.67, 0.6,  0.52, 0.4};
    CHECK(c.demand.coefficients == coeffs);
    const std::vector<double> probs = {0.07, 0.07, 0.01, 0.01, 0.08, 0.01, 0.01, 0.08};
    for (int k = 0; k < 8; ++k)
        CHECK(c.scenarios.scenarios[k].probability == probs[k]);
    // outage pattern: none, none, then one line for three, another for three
    CHECK(c.scenarios.scenarios[0].outages.empty());
    CHECK(c.scenarios.scenarios[1].outages.empty());
    for (int k : {2, 3, 4}) CHECK(c.scenarios.scenarios[k].outages == std::vector<std::string>{"ln3"});
    for (int k : {5, 6, 7}) CHECK(c.scenarios.scenarios[k].outages == std::vector<std::string>{"ln5"});
    // the distinguished load moves against the rest; the P=0.08 rows are flat
    for (int k : {0, 2, 5}) {
        CHECK(c.scenarios.scenarios[k].fluctuation.percent_overrides.at("d1") == 3.0);
        CHECK(c.scenarios.scenarios[k].fluctuation.percent_default == -3.0);
    }
    for (int k : {4, 7}) {
        CHECK(c.scenarios.scenarios[k].fluctuation.percent_default == 0.0);
        CHECK(c.scenarios.scenarios[k].fluctuation.percent_overrides.empty());
    }
}

TEST_CASE("schema errors carry field paths and are collected together") {
    const std::string text = R"({
      "meta": {"name": "bad", "periods": 2},
      "buses": ["b1"],
      "lines": [],
      "generators": [{"id": "g1", "bus": "b1", "energy_bid": 1, "reserve_up_bid": 0,
        "reserve_down_bid": 0, "redispatch_up_price": 1, "redispatch_down_price": 1,
        "min_output": 0, "max_output": 10, "reserve_up_cap": 0, "reserve_down_cap": 0,
        "ramp_up": 10, "ramp_down": 10}],
      "loads": [{"id": "d1", "bus": "b1", "max_demand": 5, "shed_price": "high"}],
      "load_coefficients": [1.0]
    })";
    try {
        parse_case_json(text);
        FAIL("expected schema error");
    } catch (const CaseIoError& e) {
        CHECK(e.kind == "schema");
        bool coeff = false, shed = false;
        for (const auto& i : e.issues) {
            coeff |= i.where == "load_coefficients";   // length 1 != periods 2
            shed |= i.where == "loads[0].shed_price";  // wrong type
        }
        CHECK(coeff);
        CHECK(shed);
    }
}

TEST_CASE("parse errors and semantic errors are distinguished") {
    CHECK_THROWS_AS(parse_case_json("{ not json"), CaseIoError);
    try {
        parse_case_json("{ not json");
    } catch (const CaseIoError& e) {
        CHECK(e.kind == "parse");
    }

    // two semantic problems, both reported
    MarketCase c = load_case(support::case_path("case_b.json"));
    c.generators[0].bus = "nowhere";
    c.scenarios.scenarios[0].probability = 1.5;
    try {
        parse_case_json(serialize_case(c));
        FAIL("expected semantic error");
    } catch (const CaseIoError& e) {
        CHECK(e.kind == "semantic");
        CHECK(e.issues.size() >= 2);
    }
}

TEST_CASE("strict mode upgrades warnings") {
    MarketCase c = load_case(support::case_path("case_b.json"));
    c.loads[0].shed_price = 5.0; // below the re-dispatch price: warning
    const std::string text = serialize_case(c);
    std::vector<Issue> warnings;
    const MarketCase lax = parse_case_json(text, false, &warnings);
    CHECK(lax.loads[0].shed_price == 5.0);
    CHECK(!warnings.empty());
    CHECK_THROWS_AS(parse_case_json(text, true), CaseIoError);
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("csv bodies are deterministic") {
    const MarketCase c = load_case(support::case_path("case_b.json"));
    const PreparedCase pc = prepare_case(c);
    const CooptSolution sol = solve_coopt_model(pc);
    const PriceSystem p = compute_prices(pc, sol);
    std::ostringstream a, b;
    write_prices_csv(a, pc, p);
    write_prices_csv(b, pc, p);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("period,kind,id,price") == 0);
    std::ostringstream l1, l2;
    write_ledger_csv(l1, build_expected_ledger(pc, sol, p));
    write_ledger_csv(l2, build_expected_ledger(pc, sol, p));
    CHECK(l1.str() == l2.str());
}

TEST_CASE("mutated case text never escapes the error taxonomy") {
    const std::string body = read_file(support::case_path("demo24.json"));
    support::Rng rng(1337);
    int parsed = 0, rejected = 0;
    for (int trial = 0; trial < 80; ++trial) {
        std::string mut = body;
        const int edits = rng.integer(1, 4);
        for (int e = 0; e < edits; ++e) {
            const size_t pos = rng.next() % mut.size();
            switch (rng.integer(0, 2)) {
                case 0: mut[pos] = static_cast<char>('0' + rng.integer(0, 9)); break;
                case 1: mut.erase(pos, 1); break;
                default: mut.insert(pos, 1, static_cast<char>(rng.integer(32, 126))); break;
            }
        }
        try {
            parse_case_json(mut);
            ++parsed; // a benign digit edit can still be a valid case
        } catch (const CaseIoError&) {
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 80);
    CHECK(rejected > 0);
}
