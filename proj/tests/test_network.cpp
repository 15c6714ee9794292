#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coopt/grid.hpp"
#include "support.hpp"

using namespace coopt;

namespace {

Grid two_bus() {
    Grid g;
    g.buses = {"b1", "b2"};
    g.lines = {{"l12", "b1", "b2", 0.1, 100.0, {}}};
    g.slack_bus = "b2";
    return g;
}

// Equal reactances on all three edges.
Grid triangle() {
    Grid g;
    g.buses = {"b1", "b2", "b3"};
    g.lines = {{"l12", "b1", "b2", 0.1, 100.0, {}},
               {"l13", "b1", "b3", 0.1, 100.0, {}},
               {"l23", "b2", "b3", 0.1, 100.0, {}}};
    g.slack_bus = "b3";
    return g;
}

} // namespace

TEST_CASE("validation accepts small connected grids") {
    CHECK(validate_grid(two_bus()).empty());
    Grid path;
    path.buses = {"b1", "b2", "b3"};
    path.lines = {{"l1", "b1", "b2", 0.1, 50.0, {}}, {"l2", "b2", "b3", 0.2, 50.0, {}}};
    CHECK(validate_grid(path).empty());
}

TEST_CASE("validation reports every violation") {
    Grid g;
    g.buses = {"b1", "b2", "b3", "b4"};
    g.lines = {{"l1", "b1", "b2", 0.1, 100.0, {}},
               {"l2", "b2", "b3", 0.1, 100.0, {}}}; // b4 isolated
    auto issues = validate_grid(g);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].code == "Disconnected");
    CHECK(issues[0].where == "bus b4");

    g.lines.push_back({"l1", "b1", "b3", -0.1, 0.0, {}}); // dup id, bad x, bad limit
    issues = validate_grid(g);
    bool dup = false, badx = false, badlim = false;
    for (const auto& i : issues) {
        dup |= i.code == "DuplicateId";
        badx |= i.code == "NonPositiveReactance";
        badlim |= i.code == "NonPositiveLimit";
    }
    CHECK(dup);
    CHECK(badx);
    CHECK(badlim);
}

TEST_CASE("two-bus shift factor is the only path") {
    const auto sf = compute_shift_factors(two_bus());
    CHECK(sf.at(0, 0) == doctest::Approx(1.0));
    CHECK(sf.at(0, 1) == 0.0); // slack column
}

TEST_CASE("triangle shift factors match the independent nodal solve") {
    const Grid g = triangle();
    const auto sf = compute_shift_factors(g);
    // Oracle: reduced susceptance system solved by plain elimination.
    const double y = 1.0 / 0.1;
    const std::vector<double> th =
        support::gauss_solve({{2 * y, -y}, {-y, 2 * y}}, {1.0, 0.0}); // inject at b1
    const double f12 = (th[0] - th[1]) * y;
    const double f13 = th[0] * y;
    CHECK(f13 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f12 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(sf.at(g.line_index("l13"), 0) == doctest::Approx(f13).epsilon(1e-12));
    CHECK(sf.at(g.line_index("l12"), 0) == doctest::Approx(f12).epsilon(1e-12));
    for (int l = 0; l < 3; ++l) CHECK(sf.at(l, 2) == 0.0); // slack column
}

TEST_CASE("unit injections satisfy node balance everywhere") {
    support::Rng rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        const MarketCase c = support::random_case(rng.next());
        const Grid& g = c.grid;
        const auto sf = compute_shift_factors(g);
        const int n = g.num_buses(), slack = g.slack_index();
        for (int b = 0; b < n; ++b) {
            std::vector<double> net(n, 0.0);
            for (int l = 0; l < g.num_lines(); ++l) {
                const double f = sf.at(l, b);
                net[g.bus_index(g.lines[l].from)] += f;
                net[g.bus_index(g.lines[l].to)] -= f;
            }
            for (int v = 0; v < n; ++v) {
                double expect = 0.0;
                if (b != slack) expect = v == b ? 1.0 : (v == slack ? -1.0 : 0.0);
                CHECK(net[v] == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
            }
            for (int l = 0; l < g.num_lines(); ++l) {
                CHECK(sf.at(l, b) <= 1.0 + 1e-9);
                CHECK(sf.at(l, b) >= -1.0 - 1e-9);
            }
        }
    }
}

TEST_CASE("shift factors act linearly on injections") {
    const Grid g = triangle();
    const auto sf = compute_shift_factors(g);
    const std::vector<double> p = {1.5, -0.5, -1.0}, q = {0.2, 0.7, -0.9};
    for (int l = 0; l < g.num_lines(); ++l) {
        double fp = 0, fq = 0, fc = 0;
        for (int b = 0; b < 3; ++b) {
            fp += sf.at(l, b) * p[b];
            fq += sf.at(l, b) * q[b];
            fc += sf.at(l, b) * (2.0 * p[b] + 3.0 * q[b]);
        }
        CHECK(fc == doctest::Approx(2.0 * fp + 3.0 * fq).epsilon(1e-14));
    }
}

TEST_CASE("outages: removal, islanding, unknown ids") {
    const Grid tri = triangle();
    const Grid reduced = apply_outages(tri, {"l12"});
    CHECK(reduced.num_lines() == 2);
    CHECK(reduced.connected());
    const auto sf = compute_shift_factors(reduced);
    CHECK(sf.at(reduced.line_index("l13"), 0) == doctest::Approx(1.0)); // only remaining path

    CHECK_THROWS_AS(apply_outages(two_bus(), {"l12"}), IslandingOutage);
    CHECK_THROWS_AS(apply_outages(tri, {"nope"}), UnknownId);
}

TEST_CASE("contingency factors equal base factors of the reduced grid") {
    const Grid tri = triangle();
    const Grid reduced = apply_outages(tri, {"l23"});
    Grid direct; // same two-line topology declared from scratch
    direct.buses = tri.buses;
    direct.slack_bus = tri.slack_bus;
    direct.lines = {{"l12", "b1", "b2", 0.1, 100.0, {}}, {"l13", "b1", "b3", 0.1, 100.0, {}}};
    const auto a = compute_shift_factors(reduced);
    const auto b = compute_shift_factors(direct);
    for (int l = 0; l < 2; ++l)
        for (int v = 0; v < 3; ++v) CHECK(a.at(l, v) == doctest::Approx(b.at(l, v)).epsilon(1e-12));
}

TEST_CASE("degenerate reactances are reported, not crashed on") {
    Grid g = two_bus();
    g.lines[0].reactance = 1e300; // susceptance underflows
    CHECK_THROWS_AS(compute_shift_factors(g), SingularNetworkMatrix);
}
