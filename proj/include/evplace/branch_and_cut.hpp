#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "evplace/instance.hpp"
#include "evplace/milp.hpp"
#include "evplace/simplex.hpp"

namespace evplace {

/// A Gomory cut: pi^T x <= rhs over structural variables, valid for every
/// integer-feasible point of the subproblem of the node it was derived at
/// (and hence of that node's descendants).
struct Cut {
    std::vector<std::pair<std::size_t, double>> coefs;
    double rhs = 0.0;
    long long origin_node = -1;
    double violation = 0.0;  // at the LP point that generated it
};

/// Derives the Gomory cut from tableau row `row` of an optimally solved
/// relaxation. The row's basic variable must be integer-constrained; returns
/// nullopt (the no-cut signal) when its fractionality is below
/// `min_fractionality` or the derived inequality does not cut the current
/// point by at least `min_violation`. Rows whose nonbasic support is purely
/// integer get the fractional-rounding cut; rows with continuous support get
/// the mixed-integer strengthening, which the fractional form does not cover.
std::optional<Cut> gomory_cut(const SimplexTableau& tab, std::size_t row,
                              double min_fractionality = 1e-6, double min_violation = 1e-6);

/// |best_bound - incumbent| / |incumbent|, with the conventions
/// mip_gap(0, 0) = 0 and mip_gap(b != 0, 0) = infinity.
double mip_gap(double best_bound, double incumbent);

/// One branch-and-cut search node: bound overrides accumulated from the
/// root, the parent relaxation objective, and the cuts valid on its path.
struct Node {
    long long id = 0;
    int depth = 0;
    double parent_bound = -std::numeric_limits<double>::infinity();
    std::vector<std::pair<std::size_t, std::pair<double, double>>> bound_overrides;
    std::vector<std::size_t> cut_ids;  // indices into the global pool
};

/// Splits on the most-fractional integer variable of `lp_values` (ties to
/// the lowest index): floor bound for the down child, ceil for the up child.
/// Requires at least one fractional integer variable.
std::pair<Node, Node> branch(const Node& node, const MilpModel& model,
                             const std::vector<double>& lp_values, double node_bound,
                             long long next_id, double int_tol = 1e-6);

enum class SolveStatus { optimal, gap_reached, time_limit, node_limit, infeasible, no_incumbent };

const char* to_string(SolveStatus s);

struct SolverStats {
    long long nodes_explored = 0;
    long long cuts_added = 0;
    std::vector<std::pair<double, double>> incumbent_history;  // (time s, objective)
    double final_gap = std::numeric_limits<double>::infinity();
    double best_bound = -std::numeric_limits<double>::infinity();
    double wall_time_s = 0.0;
    SolveStatus status = SolveStatus::no_incumbent;
};

struct SolverOptions {
    double gap = 1e-4;
    double time_limit_s = std::numeric_limits<double>::infinity();
    long long node_limit = 0;  // 0 = unlimited
    int max_cuts_per_node = 5;
    long long progress_every = 100;  // emit a progress event every N nodes
    double int_tol = 1e-6;
    LpOptions lp;
};

struct ProgressEvent {
    long long nodes = 0;
    double best_bound = 0.0;
    double incumbent = std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    long long cuts = 0;
    double time_s = 0.0;
};

/// Snapshot handed to on_cut: the cut plus everything needed to audit it
/// against its node's subproblem.
struct CutEvent {
    Cut cut;
    long long node_id = 0;
    std::vector<double> node_lb, node_ub;  // full structural bounds at the node
    std::vector<CutRow> ancestor_cuts;     // cuts already in the node's LP
};

/// Observers invoked from the solving thread; they must not mutate the
/// model. All optional.
struct SolveHooks {
    std::function<void(const ProgressEvent&)> on_progress;
    std::function<void(const CutEvent&)> on_cut;
};

/// Formats a ProgressEvent as the stable log line
/// `nodes=<k> bound=<v> incumbent=<v> gap=<fraction> cuts=<k> time=<s>`.
std::string format_progress(const ProgressEvent& ev);

struct BncResult {
    std::optional<Decision> incumbent;
    double objective = std::numeric_limits<double>::infinity();
    SolverStats stats;
};

/// Best-bound branch-and-cut over LP relaxations. Deterministic for fixed
/// options: best-bound node selection (ties: deepest, then lowest id),
/// most-fractional branching (ties: lowest index), Gomory cuts at every node
/// up to max_cuts_per_node, duplicate-suppressed via a global pool.
BncResult branch_and_cut(const MilpModel& model, const SolverOptions& opts = {},
                         const SolveHooks* hooks = nullptr);

/// Incumbent plus its instance-level cost breakdown.
struct Solution {
    Decision decision;
    double objective = 0.0;
    CostBreakdown breakdown;
};

struct SolveOutcome {
    std::optional<Solution> solution;
    SolverStats stats;
};

/// Convenience driver: branch_and_cut on `model` with the breakdown of the
/// incumbent evaluated against `inst`.
SolveOutcome solve(const Instance& inst, const MilpModel& model, const SolverOptions& opts = {},
                   const SolveHooks* hooks = nullptr);

}  // namespace evplace
