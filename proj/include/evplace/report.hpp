#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evplace/branch_and_cut.hpp"
#include "evplace/instance.hpp"

namespace evplace {

/// Per-component share of total daily cost, in percent.
struct BreakdownShares {
    std::array<double, CostBreakdown::kComponents> percent{};
    bool zero_total = false;
};

BreakdownShares breakdown_shares(const CostBreakdown& breakdown);

struct DistrictAggregate {
    std::string district;
    long long sites_opened = 0;
    long long x2 = 0;
    long long x3 = 0;
};

/// Everything a human or downstream tool needs about one run.
struct RunReport {
    std::size_t n_sites = 0;
    std::size_t n_rps = 0;
    Solution solution;
    SolverStats stats;
    BreakdownShares shares;
    long long opened_sites = 0;    // sites with x2 + x3 >= 1
    long long total_stations = 0;  // sum of x2 + x3
    std::vector<DistrictAggregate> districts;  // empty when no district column
};

RunReport make_report(const Instance& inst, const Solution& solution, const SolverStats& stats);

/// RFC 7946 FeatureCollection: a Point per opened site, a Point per
/// residential point, and a LineString per assignment edge with share > 0.
/// Deterministic bytes for identical inputs; writes are atomic
/// (temp file + rename).
void export_geojson(const Solution& solution, const Instance& inst, const std::string& path);

/// Stable-column CSV: one row per site
///   id,x2,x3,open,installation,land,maintenance,operation,charging,waiting,travel,total
/// followed by a totals row. Numbers are shortest round-trip decimal.
void export_csv_summary(const RunReport& report, const Instance& inst, const std::string& path);

struct CsvSummaryRow {
    std::string id;
    long long x2 = 0, x3 = 0;
    int open = 0;
    std::array<double, CostBreakdown::kComponents> components{};
    double total = 0.0;
};

struct CsvSummary {
    std::vector<CsvSummaryRow> rows;  // per-site rows, no totals row
    CsvSummaryRow totals;
};

CsvSummary load_csv_summary(const std::string& path);

/// Round-trippable solution file (JSON): station counts, open flags,
/// assignment shares, objective, breakdown.
void write_solution_json(const Solution& solution, const Instance& inst, const std::string& path);
Solution load_solution_json(const Instance& inst, const std::string& path);

/// `evplace` command line: solve, validate, synth, oracle.
/// Exit codes: 0 solved (optimal/gap_reached, or limit hit with an
/// incumbent), 1 input/usage error, 2 infeasible, 3 limit without incumbent.
int cli_main(int argc, const char* const* argv);

}  // namespace evplace
