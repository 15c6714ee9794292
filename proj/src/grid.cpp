#include "coopt/grid.hpp"

#include <cmath>
#include <queue>
#include <set>

namespace coopt {

int Grid::bus_index(const std::string& id) const {
    for (int i = 0; i < num_buses(); ++i)
        if (buses[i] == id) return i;
    return -1;
}

int Grid::line_index(const std::string& id) const {
    for (int i = 0; i < num_lines(); ++i)
        if (lines[i].id == id) return i;
    return -1;
}

int Grid::slack_index() const {
    if (slack_bus.empty()) return buses.empty() ? -1 : 0;
    return bus_index(slack_bus);
}

bool Grid::connected() const {
    const int n = num_buses();
    if (n == 0) return false;
    std::vector<std::vector<int>> adj(n);
    for (const auto& ln : lines) {
        const int a = bus_index(ln.from), b = bus_index(ln.to);
        if (a < 0 || b < 0) continue;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int w : adj[v])
            if (!seen[w]) { seen[w] = 1; ++count; q.push(w); }
    }
    return count == n;
}

std::vector<Issue> validate_grid(const Grid& grid) {
    std::vector<Issue> issues;
    auto add = [&](const char* code, const std::string& where, const std::string& msg) {
        issues.push_back({code, where, msg, false});
    };

    if (grid.buses.empty()) add("EmptyGrid", "buses", "grid has no buses");
    std::set<std::string> seen;
    for (const auto& b : grid.buses)
        if (!seen.insert(b).second) add("DuplicateId", "bus " + b, "duplicate bus id");
    seen.clear();
    for (const auto& ln : grid.lines) {
        if (!seen.insert(ln.id).second) add("DuplicateId", "line " + ln.id, "duplicate line id");
        if (grid.bus_index(ln.from) < 0)
            add("UnknownBus", "line " + ln.id, "from-bus " + ln.from + " not defined");
        if (grid.bus_index(ln.to) < 0)
            add("UnknownBus", "line " + ln.id, "to-bus " + ln.to + " not defined");
        if (!(ln.reactance > 0.0) || !std::isfinite(ln.reactance))
            add("NonPositiveReactance", "line " + ln.id, "reactance must be > 0");
        if (!(ln.limit > 0.0) || !std::isfinite(ln.limit))
            add("NonPositiveLimit", "line " + ln.id, "flow limit must be > 0");
        if (ln.scenario_limit && !(*ln.scenario_limit > 0.0))
            add("NonPositiveLimit", "line " + ln.id, "scenario flow limit must be > 0");
    }
    if (grid.slack_index() < 0)
        add("UnknownBus", "slack", "slack bus " + grid.slack_bus + " not defined");

    if (!grid.buses.empty() && !grid.connected()) {
        // Report the buses unreachable from the first one.
        const int n = grid.num_buses();
        std::vector<std::vector<int>> adj(n);
        for (const auto& ln : grid.lines) {
            const int a = grid.bus_index(ln.from), b = grid.bus_index(ln.to);
            if (a < 0 || b < 0) continue;
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<char> vis(n, 0);
        std::queue<int> q;
        q.push(0);
        vis[0] = 1;
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (!vis[w]) { vis[w] = 1; q.push(w); }
        }
        for (int i = 0; i < n; ++i)
            if (!vis[i]) add("Disconnected", "bus " + grid.buses[i], "unreachable from " + grid.buses[0]);
    }
    return issues;
}

ShiftFactorMatrix compute_shift_factors(const Grid& grid, bool parallel) {
    const int n = grid.num_buses();
    const int nl = grid.num_lines();
    const int slack = grid.slack_index();
    if (slack < 0) throw UnknownId("slack bus not found");

    // Reduced nodal susceptance matrix (slack removed).
    std::vector<int> red(n, -1);
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (i != slack) red[i] = k++;
    const int nr = n - 1;

    ShiftFactorMatrix out;
    out.s = Matrix(nl, n);
    if (nr == 0) return out; // single-bus grid: no lines possible

    Matrix B(nr, nr);
    for (const auto& ln : grid.lines) {
        const int a = grid.bus_index(ln.from), b = grid.bus_index(ln.to);
        const double y = 1.0 / ln.reactance;
        if (red[a] >= 0) B.at(red[a], red[a]) += y;
        if (red[b] >= 0) B.at(red[b], red[b]) += y;
        if (red[a] >= 0 && red[b] >= 0) {
            B.at(red[a], red[b]) -= y;
            B.at(red[b], red[a]) -= y;
        }
    }

    LuSolver lu(B, parallel);
    if (!lu.ok())
        throw SingularNetworkMatrix("nodal susceptance matrix is numerically singular");

    // One angle solve per non-slack bus; columns are independent.
    Matrix theta(n, nr); // theta.row(b) = angles for injection at b
#pragma omp parallel for schedule(static) if (parallel)
    for (int b = 0; b < n; ++b) {
        if (b == slack) continue;
        double* th = theta.row(b);
        for (int i = 0; i < nr; ++i) th[i] = 0.0;
        th[red[b]] = 1.0;
        lu.solve(th);
    }

    for (int l = 0; l < nl; ++l) {
        const auto& ln = grid.lines[l];
        const int a = grid.bus_index(ln.from), b = grid.bus_index(ln.to);
        const double y = 1.0 / ln.reactance;
        for (int bus = 0; bus < n; ++bus) {
            if (bus == slack) { out.s.at(l, bus) = 0.0; continue; }
            const double tha = red[a] >= 0 ? theta.at(bus, red[a]) : 0.0;
            const double thb = red[b] >= 0 ? theta.at(bus, red[b]) : 0.0;
            out.s.at(l, bus) = (tha - thb) * y;
        }
    }
    return out;
}

Grid apply_outages(const Grid& grid, const std::vector<std::string>& outage_line_ids) {
    Grid g = grid;
    for (const auto& id : outage_line_ids) {
        const int ix = g.line_index(id);
        if (ix < 0) throw UnknownId("outage references unknown line " + id);
        g.lines.erase(g.lines.begin() + ix);
    }
    if (!g.connected())
        throw IslandingOutage("outage disconnects the network");
    return g;
}

} // namespace coopt
