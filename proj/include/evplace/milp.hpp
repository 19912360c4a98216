#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "evplace/instance.hpp"

namespace evplace {

enum class RowSense { le, ge, eq };

struct Variable {
    std::string name;
    double lb = 0.0;
    double ub = 0.0;
    bool is_integer = false;
};

struct SparseRow {
    std::string name;
    std::vector<std::pair<std::size_t, double>> coefs;  // (variable index, coefficient)
    RowSense sense = RowSense::le;
    double rhs = 0.0;
};

/// The assembled integer linear program. Variable layout, for S sites and P
/// reachable (site, rp) pairs in site-major order:
///   [0, 2S)      x2_i, x3_i interleaved, integer in [0, U_i]
///   [2S, 3S)     open_i, binary
///   [3S, 3S+P)   y_{i,j}, continuous in [0, 1]
struct MilpModel {
    std::vector<Variable> variables;
    std::vector<double> objective;  // minimization, dense over variables
    std::vector<SparseRow> rows;

    std::size_t n_sites = 0;
    std::size_t n_rps = 0;
    struct Pair {
        std::size_t site = 0;
        std::size_t rp = 0;
    };
    std::vector<Pair> pairs;  // reachable pairs, site-major

    std::size_t x2_index(std::size_t site) const { return 2 * site; }
    std::size_t x3_index(std::size_t site) const { return 2 * site + 1; }
    std::size_t open_index(std::size_t site) const { return 2 * n_sites + site; }
    std::size_t y_index(std::size_t pair) const { return 3 * n_sites + pair; }
    std::size_t num_integer() const { return 3 * n_sites; }

    double objective_value(const std::vector<double>& values) const;
};

/// Assembles variables, the seven-component daily objective, and the
/// constraint set: one budget row over raw installation prices, one
/// full-coverage equality per residential point, one capacity row per site,
/// the aggregate system-capacity row, and one open-linking row per site.
/// Range masking happens structurally: y variables exist only for reachable
/// pairs. Throws UnreachableDemandError, naming every residential point with
/// no in-range site.
MilpModel build_model(const Instance& inst);

/// Writes the model in CPLEX LP text format.
void export_lp(const MilpModel& model, const std::string& path);

struct RowViolation {
    std::string row;    // row name, or "bound:<var>" / "integrality:<var>"
    double slack = 0.0;       // negative when violated
    double magnitude = 0.0;   // absolute violation
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<RowViolation> violations;
};

/// Evaluates every row, bound, and integrality requirement of `model` at
/// `decision`. Row and bound checks use a relative tolerance, integrality an
/// absolute one.
FeasibilityReport check_feasibility(const MilpModel& model, const Decision& decision,
                                    double rel_tol = 1e-6, double int_tol = 1e-6);

/// Converts a Decision into the model's variable-vector layout. Assignment
/// entries must lie on reachable pairs.
std::vector<double> decision_to_values(const MilpModel& model, const Decision& decision);
Decision values_to_decision(const MilpModel& model, const std::vector<double>& values);

struct BruteForceResult {
    bool feasible = false;
    Decision decision;
    double objective = std::numeric_limits<double>::infinity();
};

/// Exhaustive oracle for desk-scale models: enumerates every integer
/// (x2, x3) assignment in lexicographic variable order, solves the residual
/// demand-assignment LP exactly for each, and returns the global optimum.
/// Ties are broken toward the lexicographically smallest vector. Guard
/// rails: at most 16 enumerated integer variables that can actually move
/// (upper bound above lower), every upper bound at most `cap` (<= 4);
/// beyond them a TooLargeError is thrown.
BruteForceResult brute_force(const MilpModel& model, long long cap = 4);

}  // namespace evplace
