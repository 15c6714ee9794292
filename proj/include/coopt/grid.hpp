#ifndef COOPT_GRID_HPP
#define COOPT_GRID_HPP

#include "coopt/linalg.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace coopt {

/// One validation finding; code is stable, message human-readable.
struct Issue {
    std::string code;
    std::string where;
    std::string message;
    bool warning = false;
};

struct SingularNetworkMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IslandingOutage : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownId : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Line {
    std::string id;
    std::string from;
    std::string to;
    double reactance = 0.0;              // p.u., > 0
    double limit = 0.0;                  // MW, base-case rating
    std::optional<double> scenario_limit; // MW; defaults to limit when absent
};

struct Grid {
    std::vector<std::string> buses;
    std::vector<Line> lines;
    std::string slack_bus; // empty = first bus

    int num_buses() const { return static_cast<int>(buses.size()); }
    int num_lines() const { return static_cast<int>(lines.size()); }
    int bus_index(const std::string& id) const; // -1 when unknown
    int line_index(const std::string& id) const;
    int slack_index() const;
    bool connected() const;
};

/// Structural checks: connectivity, positive reactances and limits, unique
/// ids, slack existence. Returns every violation found, not just the first.
std::vector<Issue> validate_grid(const Grid& grid);

/// Dense DC injection-shift-factor matrix: rows follow grid.lines, columns
/// follow grid.buses; entry = MW on the line per MW injected at the bus and
/// withdrawn at the slack. The slack column is identically zero.
struct ShiftFactorMatrix {
    Matrix s; // lines x buses
    double at(int line, int bus) const { return s.at(line, bus); }
};

ShiftFactorMatrix compute_shift_factors(const Grid& grid, bool parallel = true);

/// Grid with the listed lines removed. Throws UnknownId for a bad line id and
/// IslandingOutage when the removal disconnects the network.
Grid apply_outages(const Grid& grid, const std::vector<std::string>& outage_line_ids);

} // namespace coopt

#endif
