#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "evplace/milp.hpp"

namespace evplace {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> values;        // structural variables
    double objective = 0.0;
    std::vector<std::size_t> basis;    // basic column per tableau row
};

struct LpOptions {
    double feas_tol = 1e-7;      // row feasibility, absolute
    double bound_tol = 1e-9;     // variable bound feasibility
    double cost_tol = 1e-9;      // reduced-cost optimality threshold
    double pivot_tol = 1e-9;     // smallest usable pivot element
    long long bland_after_degenerate = 1000;  // <= 0: Bland from the first pivot
    long long max_pivots = 0;    // 0 = scale with problem size
};

/// A valid inequality pi^T x <= rhs over structural variables.
struct CutRow {
    std::vector<std::pair<std::size_t, double>> coefs;
    double rhs = 0.0;
};

/// Bounded-variable primal simplex on a dense tableau. Phase 1 drives
/// artificials out of an initial slack basis, phase 2 optimizes the real
/// objective. Dantzig pricing with a permanent switch to Bland's rule after
/// `bland_after_degenerate` degenerate pivots. Deterministic: all ties break
/// toward the lowest column index.
class SimplexTableau {
  public:
    /// Bounds are the structural-variable bounds to solve under (node
    /// overrides already applied); cuts are extra <= rows.
    SimplexTableau(const MilpModel& model, std::vector<double> lb, std::vector<double> ub,
                   const std::vector<CutRow>& cuts, LpOptions opts = {});

    LpStatus solve();

    LpStatus status() const { return status_; }
    double objective() const { return objective_; }
    LpSolution solution() const;
    std::vector<double> structural_values() const;

    // Tableau introspection for cut generation. Column space is
    // [structurals][row slacks][artificials].
    std::size_t num_rows() const { return m_; }
    std::size_t num_cols() const { return ncols_; }
    std::size_t num_structural() const { return n_; }
    std::size_t basic_col(std::size_t row) const { return basis_[row]; }
    double basic_value(std::size_t row) const { return xb_[row]; }
    double coef(std::size_t row, std::size_t col) const { return tab_[row * stride_ + col]; }
    bool col_is_integer(std::size_t col) const;
    bool col_is_artificial(std::size_t col) const { return col >= n_ + m_; }
    bool col_is_slack(std::size_t col) const { return col >= n_ && col < n_ + m_; }
    std::size_t slack_row(std::size_t col) const { return col - n_; }
    enum class ColStatus { basic, at_lower, at_upper };
    ColStatus col_status(std::size_t col) const { return status_of_[col]; }
    double col_lb(std::size_t col) const { return lb_[col]; }
    double col_ub(std::size_t col) const { return ub_[col]; }
    double col_value(std::size_t col) const;
    /// Row definition in structural space (model row or cut), used to
    /// substitute slack variables out of derived inequalities.
    const SparseRow& row_def(std::size_t row) const { return rows_[row]; }

  private:
    void build(const std::vector<CutRow>& cuts);
    void compute_reduced_costs(const std::vector<double>& cost);
    void refresh_basic_values();
    LpStatus run_phase(bool phase1);
    bool pivot_step(bool phase1);
    void do_pivot(std::size_t row, std::size_t col);
    void validate_result() const;

    const MilpModel* model_;
    LpOptions opts_;
    std::size_t n_ = 0;       // structural columns
    std::size_t m_ = 0;       // rows (model + cuts)
    std::size_t n_art_ = 0;   // artificial columns
    std::size_t ncols_ = 0;   // n_ + m_ + n_art_
    std::size_t stride_ = 0;  // ncols_ + 1 (rhs column)
    std::vector<SparseRow> rows_;
    std::vector<double> tab_;       // m_ x stride_, last column is B^-1 b
    std::vector<double> lb_, ub_;   // per column
    std::vector<double> cost_;      // phase-2 costs per column
    std::vector<double> dj_;        // reduced costs
    std::vector<std::size_t> basis_;
    std::vector<double> xb_;        // basic values per row
    std::vector<ColStatus> status_of_;
    double objective_ = 0.0;
    LpStatus status_ = LpStatus::infeasible;
    long long degenerate_pivots_ = 0;
    bool bland_ = false;
    bool solved_ = false;
};

/// Solves the LP relaxation of the model under its own bounds.
/// Deterministic; throws NumericError on numerical breakdown and
/// std::invalid_argument when a structural bound is not finite.
LpSolution solve_lp(const MilpModel& model, LpOptions opts = {});

LpSolution solve_lp(const MilpModel& model, const std::vector<double>& lb,
                    const std::vector<double>& ub, const std::vector<CutRow>& cuts,
                    LpOptions opts = {});

}  // namespace evplace
