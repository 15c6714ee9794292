#ifndef COOPT_TESTS_SUPPORT_HPP
#define COOPT_TESTS_SUPPORT_HPP

#include "coopt/caseio.hpp"
#include "coopt/coopt_model.hpp"
#include "coopt/market.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace support {

using namespace coopt;

// Single bus, one generator, one load, no scenarios.
inline MarketCase micro_a() {
    MarketCase c;
    c.name = "micro_a";
    c.grid.buses = {"b1"};
    GeneratorParams g;
    g.id = "g1"; g.bus = "b1";
    g.energy_bid = 10; g.reserve_up_bid = 1; g.reserve_down_bid = 1;
    g.redispatch_up_price = 12; g.redispatch_down_price = 8;
    g.min_output = 0; g.max_output = 100;
    g.reserve_up_cap = 20; g.reserve_down_cap = 20;
    g.ramp_up = 100; g.ramp_down = 100;
    c.generators = {g};
    c.loads = {{"d1", "b1", 1000.0}};
    c.demand.max_demand = {50.0};
    c.demand.coefficients = {1.0};
    return c;
}

// micro_a plus one load-rise scenario (+10 MW with probability 0.1).
inline MarketCase micro_b() {
    MarketCase c = micro_a();
    c.name = "micro_b";
    NonBaseScenario s;
    s.id = "s1";
    s.probability = 0.1;
    s.fluctuation.kind = FluctuationRule::Kind::ExplicitMw;
    s.fluctuation.mw["d1"] = {10.0};
    c.scenarios.scenarios = {s};
    return c;
}

// Two periods with a demand swing that makes the ramp/reserve coupling bind.
inline MarketCase micro_c() {
    MarketCase c = micro_b();
    c.name = "micro_c";
    c.generators[0].ramp_up = 45;
    c.demand.max_demand = {100.0};
    c.demand.coefficients = {0.5, 0.9};
    c.scenarios.scenarios[0].fluctuation.mw["d1"] = {10.0, 10.0};
    return c;
}

// Single bus, two generators; the cheap one capped so the expensive one stays
// strictly interior in energy and both reserves (a zero-profit marginal unit).
inline MarketCase two_gen_interior() {
    MarketCase c;
    c.name = "two_gen_interior";
    c.grid.buses = {"b1"};
    GeneratorParams g1;
    g1.id = "g1"; g1.bus = "b1";
    g1.energy_bid = 10; g1.reserve_up_bid = 1; g1.reserve_down_bid = 1;
    g1.redispatch_up_price = 12; g1.redispatch_down_price = 8;
    g1.min_output = 0; g1.max_output = 30;
    g1.reserve_up_cap = 0; g1.reserve_down_cap = 0;
    g1.ramp_up = 100; g1.ramp_down = 100;
    GeneratorParams g2 = g1;
    g2.id = "g2";
    g2.energy_bid = 20; g2.reserve_up_bid = 2; g2.reserve_down_bid = 1.5;
    g2.redispatch_up_price = 25; g2.redispatch_down_price = 15;
    g2.max_output = 100;
    g2.reserve_up_cap = 50; g2.reserve_down_cap = 50;
    c.generators = {g1, g2};
    c.loads = {{"d1", "b1", 1000.0}};
    c.demand.max_demand = {50.0};
    c.demand.coefficients = {1.0};
    NonBaseScenario up;
    up.id = "up"; up.probability = 0.15;
    up.fluctuation.kind = FluctuationRule::Kind::ExplicitMw;
    up.fluctuation.mw["d1"] = {20.0};
    NonBaseScenario dn;
    dn.id = "dn"; dn.probability = 0.1;
    dn.fluctuation.kind = FluctuationRule::Kind::ExplicitMw;
    dn.fluctuation.mw["d1"] = {-15.0};
    c.scenarios.scenarios = {up, dn};
    return c;
}

inline std::string case_path(const char* name) {
    return std::string(COOPT_CASES_DIR) + "/" + name;
}

// Deterministic generator state for randomized cases.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (double(next() >> 11) * 0x1.0p-53);
    }
    int integer(int lo, int hi) { // inclusive
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

// Small random market case: connected grid, 2-4 generators with ordered
// redispatch prices, generous ramps, mild fluctuations. Always validates.
inline MarketCase random_case(std::uint64_t seed) {
    Rng rng(seed);
    MarketCase c;
    c.name = "random_" + std::to_string(seed);
    const int nb = rng.integer(2, 4);
    for (int i = 0; i < nb; ++i) c.grid.buses.push_back("b" + std::to_string(i + 1));
    // spanning tree plus one extra edge when possible
    for (int i = 1; i < nb; ++i) {
        Line ln;
        ln.id = "ln" + std::to_string(i);
        ln.from = c.grid.buses[rng.integer(0, i - 1)];
        ln.to = c.grid.buses[i];
        ln.reactance = rng.uniform(0.05, 0.2);
        ln.limit = rng.uniform(150, 400); // loose: congestion is not the point here
        c.grid.lines.push_back(ln);
    }
    if (nb >= 3) {
        Line ln;
        ln.id = "lx";
        ln.from = c.grid.buses[0];
        ln.to = c.grid.buses[nb - 1];
        ln.reactance = rng.uniform(0.05, 0.2);
        ln.limit = rng.uniform(150, 400);
        c.grid.lines.push_back(ln);
    }
    const int J = rng.integer(2, 4);
    for (int j = 0; j < J; ++j) {
        GeneratorParams g;
        g.id = "g" + std::to_string(j + 1);
        g.bus = c.grid.buses[rng.integer(0, nb - 1)];
        g.energy_bid = rng.uniform(8, 60);
        g.reserve_up_bid = rng.uniform(0.5, 4);
        g.reserve_down_bid = rng.uniform(0.5, 4);
        g.redispatch_up_price = g.energy_bid + rng.uniform(1, 10);
        g.redispatch_down_price = g.energy_bid - rng.uniform(1, std::min(7.0, g.energy_bid - 1));
        g.min_output = 0;
        g.max_output = rng.uniform(40, 120);
        g.reserve_up_cap = rng.uniform(10, 40);
        g.reserve_down_cap = rng.uniform(10, 40);
        g.ramp_up = 500;
        g.ramp_down = 500;
        c.generators.push_back(g);
    }
    const int L = rng.integer(1, 2);
    double cap = 0.0;
    for (const auto& g : c.generators) cap += g.max_output;
    for (int l = 0; l < L; ++l) {
        c.loads.push_back({"d" + std::to_string(l + 1), c.grid.buses[rng.integer(0, nb - 1)], 1000.0});
        c.demand.max_demand.push_back(rng.uniform(0.2, 0.6) * cap / L);
    }
    const int T = rng.integer(1, 3);
    for (int t = 0; t < T; ++t) c.demand.coefficients.push_back(rng.uniform(0.5, 1.0));
    const int K = rng.integer(0, 2);
    for (int k = 0; k < K; ++k) {
        NonBaseScenario s;
        s.id = "s" + std::to_string(k + 1);
        s.probability = rng.uniform(0.05, 0.2);
        s.fluctuation.kind = FluctuationRule::Kind::Percent;
        s.fluctuation.percent_default = rng.uniform(-8, 8);
        c.scenarios.scenarios.push_back(s);
    }
    return c;
}

// Independent dense Gaussian elimination, used as the linear-solve oracle.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a[i][k]) > std::fabs(a[p][k])) p = i;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (int i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (int c2 = k; c2 < n; ++c2) a[i][c2] -= f * a[k][c2];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (int k = n - 1; k >= 0; --k) {
        double s = b[k];
        for (int c2 = k + 1; c2 < n; ++c2) s -= a[k][c2] * x[c2];
        x[k] = s / a[k][k];
    }
    return x;
}

} // namespace support

#endif
