#include "evplace/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "evplace/errors.hpp"

namespace evplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SimplexTableau::SimplexTableau(const MilpModel& model, std::vector<double> lb,
                               std::vector<double> ub, const std::vector<CutRow>& cuts,
                               LpOptions opts)
    : model_(&model), opts_(opts) {
    n_ = model.variables.size();
    if (lb.size() != n_ || ub.size() != n_) {
        throw std::invalid_argument("SimplexTableau: bound vectors must match variable count");
    }
    for (std::size_t j = 0; j < n_; ++j) {
        if (!std::isfinite(lb[j]) || !std::isfinite(ub[j])) {
            throw std::invalid_argument("SimplexTableau: structural bounds must be finite");
        }
    }
    lb_ = std::move(lb);
    ub_ = std::move(ub);
    bland_ = opts_.bland_after_degenerate <= 0;
    for (std::size_t j = 0; j < n_; ++j) {
        if (lb_[j] > ub_[j]) {
            // Empty box; nothing to build.
            status_ = LpStatus::infeasible;
            solved_ = true;
            return;
        }
    }
    build(cuts);
}

void SimplexTableau::build(const std::vector<CutRow>& cuts) {
    rows_.reserve(model_->rows.size() + cuts.size());
    for (const auto& row : model_->rows) rows_.push_back(row);
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        SparseRow row;
        row.name = "cut_" + std::to_string(k);
        row.sense = RowSense::le;
        row.rhs = cuts[k].rhs;
        row.coefs = cuts[k].coefs;
        rows_.push_back(std::move(row));
    }
    m_ = rows_.size();
    for (const auto& row : rows_) {
        for (const auto& [idx, coef] : row.coefs) {
            if (idx >= n_ || !std::isfinite(coef)) {
                throw std::invalid_argument("SimplexTableau: bad row coefficient");
            }
        }
        if (!std::isfinite(row.rhs)) {
            throw std::invalid_argument("SimplexTableau: non-finite rhs");
        }
    }

    // Slack bounds by sense; structurals start nonbasic at their lower bound.
    lb_.resize(n_ + m_);
    ub_.resize(n_ + m_);
    status_of_.assign(n_ + m_, ColStatus::at_lower);
    for (std::size_t r = 0; r < m_; ++r) {
        switch (rows_[r].sense) {
            case RowSense::le:
                lb_[n_ + r] = 0.0;
                ub_[n_ + r] = kInf;
                break;
            case RowSense::ge:
                lb_[n_ + r] = -kInf;
                ub_[n_ + r] = 0.0;
                break;
            case RowSense::eq:
                lb_[n_ + r] = 0.0;
                ub_[n_ + r] = 0.0;
                break;
        }
    }

    // Initial basis: the row's slack where the residual b - A lb fits the
    // slack bounds, otherwise an artificial. Rows with a negative residual
    // are negated so every artificial enters the basis at +|residual| with a
    // +1 column, keeping the starting basis an identity.
    std::vector<double> residual(m_);
    std::vector<int> needs_artificial(m_, 0);
    for (std::size_t r = 0; r < m_; ++r) {
        double res = rows_[r].rhs;
        for (const auto& [idx, coef] : rows_[r].coefs) res -= coef * lb_[idx];
        residual[r] = res;
        switch (rows_[r].sense) {
            case RowSense::le: needs_artificial[r] = res < 0.0; break;
            case RowSense::ge: needs_artificial[r] = res > 0.0; break;
            case RowSense::eq: needs_artificial[r] = res != 0.0; break;
        }
        if (needs_artificial[r]) ++n_art_;
    }

    ncols_ = n_ + m_ + n_art_;
    stride_ = ncols_ + 1;
    tab_.assign(m_ * stride_, 0.0);
    lb_.resize(ncols_, 0.0);
    ub_.resize(ncols_, kInf);
    status_of_.resize(ncols_, ColStatus::at_lower);
    basis_.assign(m_, 0);
    xb_.assign(m_, 0.0);
    cost_.assign(ncols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = model_->objective[j];

    std::size_t art = 0;
    for (std::size_t r = 0; r < m_; ++r) {
        double* row = tab_.data() + r * stride_;
        const double sign = (needs_artificial[r] && residual[r] < 0.0) ? -1.0 : 1.0;
        for (const auto& [idx, coef] : rows_[r].coefs) row[idx] = sign * coef;
        row[n_ + r] = sign;
        row[ncols_] = sign * rows_[r].rhs;
        if (needs_artificial[r]) {
            const std::size_t acol = n_ + m_ + art++;
            row[acol] = 1.0;
            basis_[r] = acol;
            status_of_[acol] = ColStatus::basic;
            // ge rows park their slack at the zero upper bound.
            if (rows_[r].sense == RowSense::ge) status_of_[n_ + r] = ColStatus::at_upper;
        } else {
            basis_[r] = n_ + r;
            status_of_[n_ + r] = ColStatus::basic;
        }
    }
    dj_.assign(ncols_, 0.0);
    refresh_basic_values();
}

void SimplexTableau::refresh_basic_values() {
    for (std::size_t r = 0; r < m_; ++r) xb_[r] = tab_[r * stride_ + ncols_];
    for (std::size_t j = 0; j < ncols_; ++j) {
        if (status_of_[j] == ColStatus::basic) continue;
        const double v = status_of_[j] == ColStatus::at_lower ? lb_[j] : ub_[j];
        if (v == 0.0) continue;
        for (std::size_t r = 0; r < m_; ++r) xb_[r] -= tab_[r * stride_ + j] * v;
    }
}

void SimplexTableau::compute_reduced_costs(const std::vector<double>& cost) {
    dj_ = cost;
    for (std::size_t r = 0; r < m_; ++r) {
        const double cb = cost[basis_[r]];
        if (cb == 0.0) continue;
        const double* row = tab_.data() + r * stride_;
        for (std::size_t j = 0; j < ncols_; ++j) dj_[j] -= cb * row[j];
    }
}

void SimplexTableau::do_pivot(std::size_t row, std::size_t col) {
    double* prow = tab_.data() + row * stride_;
    const double piv = prow[col];
    if (std::abs(piv) < opts_.pivot_tol) {
        throw NumericError("simplex pivot element below tolerance");
    }
    const double inv = 1.0 / piv;
    for (std::size_t k = 0; k < stride_; ++k) prow[k] *= inv;
    prow[col] = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
        if (r == row) continue;
        double* trow = tab_.data() + r * stride_;
        const double f = trow[col];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < stride_; ++k) trow[k] -= f * prow[k];
        trow[col] = 0.0;
    }
    const double fd = dj_[col];
    if (fd != 0.0) {
        for (std::size_t k = 0; k < ncols_; ++k) dj_[k] -= fd * prow[k];
        dj_[col] = 0.0;
    }
}

bool SimplexTableau::pivot_step(bool phase1) {
    auto pick_entering = [&](const std::vector<char>& rejected) -> std::ptrdiff_t {
        std::ptrdiff_t best = -1;
        double best_score = opts_.cost_tol;
        for (std::size_t j = 0; j < ncols_; ++j) {
            if (rejected[j]) continue;
            if (status_of_[j] == ColStatus::basic) continue;
            if (lb_[j] == ub_[j]) continue;
            if (col_is_artificial(j)) continue;  // artificials never re-enter
            const double score = status_of_[j] == ColStatus::at_lower ? -dj_[j] : dj_[j];
            if (score > best_score) {
                if (bland_) return static_cast<std::ptrdiff_t>(j);
                best = static_cast<std::ptrdiff_t>(j);
                best_score = score;
            }
        }
        return best;
    };

    struct Ratio {
        std::ptrdiff_t leave_row = -1;
        double t_best = 0.0;
        double leave_delta = 0.0;
        double leave_alpha = 0.0;
        bool unbounded = false;
        bool blocked = false;  // binding rows exist but none is pivotable
    };

    // Two-pass ratio test. Pass 1 finds the largest step under bound
    // relaxations of feas_tol each and must consider every row with a
    // nonzero entry: even a noise-level entry moves its row by t * alpha,
    // which for the long steps this model takes is far from negligible.
    // Pass 2 picks, among pivotable rows whose exact ratio fits inside that
    // step, the numerically largest pivot (Bland mode: the lowest basis
    // index). Any overshoot this leaves on another row's basic variable is
    // bounded by its own relaxation.
    auto ratio_test = [&](std::size_t col, double dir) -> Ratio {
        Ratio out;
        const double relax = bland_ ? 0.0 : opts_.feas_tol;
        const double flip_dist = ub_[col] - lb_[col];  // may be +inf for slacks
        double t_max = flip_dist;
        for (std::size_t r = 0; r < m_; ++r) {
            const double alpha = tab_[r * stride_ + col];
            if (alpha == 0.0) continue;
            const double delta = -dir * alpha;  // change of xb_[r] per unit step
            double t_r;
            if (delta > 0.0) {
                const double cap = ub_[basis_[r]];
                if (cap == kInf) continue;
                t_r = (cap + relax * std::max(1.0, std::abs(cap)) - xb_[r]) / delta;
            } else {
                const double cap = lb_[basis_[r]];
                if (cap == -kInf) continue;
                t_r = (xb_[r] - (cap - relax * std::max(1.0, std::abs(cap)))) / (-delta);
            }
            if (t_r < 0.0) t_r = 0.0;
            if (t_r < t_max) t_max = t_r;
        }

        if (t_max == kInf) {
            out.unbounded = true;
            return out;
        }

        out.t_best = flip_dist;
        for (std::size_t r = 0; r < m_; ++r) {
            const double alpha = tab_[r * stride_ + col];
            if (std::abs(alpha) <= opts_.pivot_tol) continue;
            const double delta = -dir * alpha;
            double t_r;
            if (delta > 0.0) {
                const double cap = ub_[basis_[r]];
                if (cap == kInf) continue;
                t_r = (cap - xb_[r]) / delta;
            } else {
                const double cap = lb_[basis_[r]];
                if (cap == -kInf) continue;
                t_r = (xb_[r] - cap) / (-delta);
            }
            if (t_r < 0.0) t_r = 0.0;
            if (t_r > t_max) continue;
            bool take = out.leave_row < 0;
            if (!take) {
                if (bland_) {
                    take = basis_[r] < basis_[static_cast<std::size_t>(out.leave_row)];
                } else if (std::abs(alpha) > out.leave_alpha * (1.0 + 1e-12)) {
                    take = true;
                } else if (std::abs(alpha) >= out.leave_alpha * (1.0 - 1e-12)) {
                    take = basis_[r] < basis_[static_cast<std::size_t>(out.leave_row)];
                }
            }
            if (take) {
                out.leave_row = static_cast<std::ptrdiff_t>(r);
                out.leave_delta = delta;
                out.leave_alpha = std::abs(alpha);
                out.t_best = t_r;
            }
        }
        // A bound flip is only legal when the flip distance itself survived
        // pass 1; otherwise the binding row cannot be pivoted on at all.
        if (out.leave_row < 0 && t_max < flip_dist) out.blocked = true;
        return out;
    };

    auto commit = [&](std::size_t col, double dir, const Ratio& ra) {
        if (ra.t_best <= 1e-11) {
            ++degenerate_pivots_;
            if (!bland_ && degenerate_pivots_ >= opts_.bland_after_degenerate) bland_ = true;
        }
        if (ra.leave_row < 0) {
            // Bound flip: the entering variable crosses to its other bound.
            for (std::size_t r = 0; r < m_; ++r) {
                const double alpha = tab_[r * stride_ + col];
                if (alpha != 0.0) xb_[r] += -dir * alpha * ra.t_best;
            }
            status_of_[col] = status_of_[col] == ColStatus::at_lower ? ColStatus::at_upper
                                                                     : ColStatus::at_lower;
            return;
        }
        const std::size_t row = static_cast<std::size_t>(ra.leave_row);
        const double enter_from = dir > 0 ? lb_[col] : ub_[col];
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == row) continue;
            const double alpha = tab_[r * stride_ + col];
            if (alpha != 0.0) xb_[r] += -dir * alpha * ra.t_best;
        }
        const std::size_t leaving = basis_[row];
        status_of_[leaving] = ra.leave_delta > 0.0 ? ColStatus::at_upper : ColStatus::at_lower;
        status_of_[col] = ColStatus::basic;
        do_pivot(row, col);
        basis_[row] = col;
        xb_[row] = enter_from + dir * ra.t_best;
    };

    // A pivot element barely above pivot_tol is usually cancellation noise
    // from nearly-parallel rows; one pivot on it wrecks the whole tableau.
    // Columns whose best blocking pivot is that small are set aside and
    // another entering column is tried; the least-bad candidate is kept as a
    // fallback for when nothing solid exists.
    const double safe_pivot = std::max(opts_.pivot_tol, 1e-7);
    std::vector<char> rejected(ncols_, 0);
    int rejects_left = 16;
    bool dj_refreshed = false;
    Ratio fb;
    std::size_t fb_col = 0;
    double fb_dir = 0.0;
    bool have_fb = false;

    for (;;) {
        const std::ptrdiff_t enter = pick_entering(rejected);
        if (enter < 0) {
            if (!dj_refreshed) {
                // Confirm against freshly computed reduced costs; the
                // incremental dj can drift over long pivot sequences.
                std::vector<double> cost;
                if (phase1) {
                    cost.assign(ncols_, 0.0);
                    for (std::size_t j = n_ + m_; j < ncols_; ++j) cost[j] = 1.0;
                } else {
                    cost = cost_;
                }
                compute_reduced_costs(cost);
                dj_refreshed = true;
                continue;
            }
            if (have_fb) {
                commit(fb_col, fb_dir, fb);
                return true;
            }
            status_ = LpStatus::optimal;
            return false;
        }
        const std::size_t col = static_cast<std::size_t>(enter);
        const double dir = status_of_[col] == ColStatus::at_lower ? 1.0 : -1.0;
        const Ratio ra = ratio_test(col, dir);
        if (ra.unbounded) {
            if (phase1) throw NumericError("unbounded ray in a bounded-below phase");
            status_ = LpStatus::unbounded;
            return false;
        }
        if (ra.blocked) {
            if (!bland_ && rejects_left > 0) {
                rejected[col] = 1;
                --rejects_left;
                continue;
            }
            throw NumericError("ratio test blocked: the binding row has no usable pivot");
        }
        // Bland mode commits whatever the rule picks: skipping its column
        // would void the anti-cycling guarantee.
        if (!bland_ && ra.leave_row >= 0 && ra.leave_alpha < safe_pivot) {
            if (rejects_left > 0) {
                rejected[col] = 1;
                --rejects_left;
                if (!have_fb || ra.leave_alpha > fb.leave_alpha) {
                    fb = ra;
                    fb_col = col;
                    fb_dir = dir;
                    have_fb = true;
                }
                continue;
            }
            if (have_fb && fb.leave_alpha > ra.leave_alpha) {
                commit(fb_col, fb_dir, fb);
                return true;
            }
        }
        commit(col, dir, ra);
        return true;
    }
}

LpStatus SimplexTableau::run_phase(bool phase1) {
    const long long limit = opts_.max_pivots > 0
                                ? opts_.max_pivots
                                : 10000 + 500 * static_cast<long long>(m_ + ncols_);
    status_ = LpStatus::optimal;
    for (long long iter = 0; iter < limit; ++iter) {
        if (!pivot_step(phase1)) return status_;
        if ((iter + 1) % 64 == 0) {
            refresh_basic_values();
            std::vector<double> cost;
            if (phase1) {
                cost.assign(ncols_, 0.0);
                for (std::size_t j = n_ + m_; j < ncols_; ++j) cost[j] = 1.0;
            } else {
                cost = cost_;
            }
            compute_reduced_costs(cost);
        }
    }
    throw NumericError("simplex pivot limit exceeded");
}

LpStatus SimplexTableau::solve() {
    if (solved_) return status_;
    if (n_art_ > 0) {
        std::vector<double> p1cost(ncols_, 0.0);
        for (std::size_t j = n_ + m_; j < ncols_; ++j) p1cost[j] = 1.0;
        compute_reduced_costs(p1cost);
        run_phase(true);
        refresh_basic_values();

        // Residual artificials are judged against their own row's scale; a
        // global scale would let small rows hide real violations behind the
        // largest rhs in the model.
        for (std::size_t r = 0; r < m_; ++r) {
            if (!col_is_artificial(basis_[r])) continue;
            double rscale = std::max(1.0, std::abs(rows_[r].rhs));
            for (const auto& [idx, coef] : rows_[r].coefs) {
                (void)idx;
                rscale = std::max(rscale, std::abs(coef));
            }
            if (std::abs(xb_[r]) > opts_.feas_tol * rscale) {
                status_ = LpStatus::infeasible;
                solved_ = true;
                return status_;
            }
        }
        // Push residual artificials out of the basis where a usable pivot
        // exists; rows without one are dependent and keep a zero artificial
        // pinned by the [0, 0] clamp below.
        // A pivot element that is merely nonzero is not enough here: on a
        // dependent row the true entry is zero and anything tiny is noise
        // that would blow the tableau up, so demand a solid pivot.
        const double driveout_tol = std::max(opts_.pivot_tol, 1e-7);
        for (std::size_t r = 0; r < m_; ++r) {
            if (!col_is_artificial(basis_[r])) continue;
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                if (status_of_[j] == ColStatus::basic) continue;
                if (std::abs(tab_[r * stride_ + j]) <= driveout_tol) continue;
                const std::size_t art = basis_[r];
                const double keep = status_of_[j] == ColStatus::at_lower ? lb_[j] : ub_[j];
                status_of_[art] = ColStatus::at_lower;
                status_of_[j] = ColStatus::basic;
                do_pivot(r, j);
                basis_[r] = j;
                xb_[r] = keep;  // degenerate exchange, values unchanged
                break;
            }
        }
        for (std::size_t j = n_ + m_; j < ncols_; ++j) ub_[j] = 0.0;
        refresh_basic_values();
    }

    compute_reduced_costs(cost_);
    const LpStatus st = run_phase(false);
    refresh_basic_values();
    if (st == LpStatus::optimal) {
        // The relaxed ratio test may park a basic value marginally outside
        // its bounds; land those exactly on the bound before reporting.
        const double snap = std::max(opts_.bound_tol, opts_.feas_tol);
        for (std::size_t r = 0; r < m_; ++r) {
            const double lo = lb_[basis_[r]];
            const double hi = ub_[basis_[r]];
            if (xb_[r] > hi && xb_[r] <= hi + snap * std::max(1.0, std::abs(hi))) xb_[r] = hi;
            if (xb_[r] < lo && xb_[r] >= lo - snap * std::max(1.0, std::abs(lo))) xb_[r] = lo;
        }
        objective_ = 0.0;
        const auto values = structural_values();
        for (std::size_t j = 0; j < n_; ++j) objective_ += cost_[j] * values[j];
        validate_result();
    }
    status_ = st;
    solved_ = true;
    return status_;
}

void SimplexTableau::validate_result() const {
    // Overshoot from the relaxed ratio test was snapped away, so bound
    // violations here are checked at the tight tolerance.
    const double btol = opts_.bound_tol;
    const auto values = structural_values();
    for (std::size_t j = 0; j < n_; ++j) {
        const double lo = lb_[j] - btol * std::max(1.0, std::abs(lb_[j]));
        const double hi = ub_[j] + btol * std::max(1.0, std::abs(ub_[j]));
        if (values[j] < lo || values[j] > hi) {
            throw NumericError("simplex solution violates a bound on " +
                               model_->variables[j].name + ": value " +
                               std::to_string(values[j]) + " outside [" +
                               std::to_string(lb_[j]) + ", " + std::to_string(ub_[j]) + "]");
        }
    }
    for (const auto& row : rows_) {
        // Tolerance on the row's L1 activity: the bound snap above shifts a
        // row by at most feas_tol times this sum, so anything beyond it is a
        // genuine violation rather than reporting noise.
        double lhs = 0.0;
        double activity = std::max(1.0, std::abs(row.rhs));
        for (const auto& [idx, coef] : row.coefs) {
            lhs += coef * values[idx];
            activity += std::abs(coef) * std::max(1.0, std::abs(values[idx]));
        }
        const double tol = opts_.feas_tol * activity;
        bool ok = true;
        switch (row.sense) {
            case RowSense::le: ok = lhs <= row.rhs + tol; break;
            case RowSense::ge: ok = lhs >= row.rhs - tol; break;
            case RowSense::eq: ok = std::abs(lhs - row.rhs) <= tol; break;
        }
        if (!ok) {
            throw NumericError("simplex solution violates row " + row.name + ": lhs " +
                               std::to_string(lhs) + " vs rhs " + std::to_string(row.rhs) +
                               " (tolerance " + std::to_string(tol) + ")");
        }
    }
}

double SimplexTableau::col_value(std::size_t col) const {
    switch (status_of_[col]) {
        case ColStatus::at_lower: return lb_[col];
        case ColStatus::at_upper: return ub_[col];
        case ColStatus::basic: break;
    }
    for (std::size_t r = 0; r < m_; ++r) {
        if (basis_[r] == col) return xb_[r];
    }
    throw std::logic_error("col_value: basic column not found in basis");
}

bool SimplexTableau::col_is_integer(std::size_t col) const {
    return col < n_ && model_->variables[col].is_integer;
}

std::vector<double> SimplexTableau::structural_values() const {
    std::vector<double> values(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        values[j] = status_of_.empty() || status_of_[j] == ColStatus::at_lower
                        ? lb_[j]
                        : (status_of_[j] == ColStatus::at_upper ? ub_[j] : 0.0);
    }
    for (std::size_t r = 0; r < m_; ++r) {
        if (basis_[r] < n_) values[basis_[r]] = xb_[r];
    }
    return values;
}

LpSolution SimplexTableau::solution() const {
    LpSolution sol;
    sol.status = status_;
    sol.values = structural_values();
    sol.objective = objective_;
    sol.basis = basis_;
    return sol;
}

LpSolution solve_lp(const MilpModel& model, LpOptions opts) {
    std::vector<double> lb, ub;
    lb.reserve(model.variables.size());
    ub.reserve(model.variables.size());
    for (const auto& v : model.variables) {
        lb.push_back(v.lb);
        ub.push_back(v.ub);
    }
    return solve_lp(model, lb, ub, {}, opts);
}

LpSolution solve_lp(const MilpModel& model, const std::vector<double>& lb,
                    const std::vector<double>& ub, const std::vector<CutRow>& cuts,
                    LpOptions opts) {
    SimplexTableau tableau(model, lb, ub, cuts, opts);
    try {
        tableau.solve();
    } catch (const NumericError&) {
        if (opts.bland_after_degenerate <= 0) throw;
        // Retry under Bland's rule from the first pivot: slower, but immune
        // to the aggressive pricing choices that break down numerically.
        LpOptions safe = opts;
        safe.bland_after_degenerate = 0;
        SimplexTableau retry(model, lb, ub, cuts, safe);
        retry.solve();
        return retry.solution();
    }
    return tableau.solution();
}

}  // namespace evplace
