#include <algorithm>
#include <cmath>
#include <limits>

#include "evplace/errors.hpp"
#include "evplace/milp.hpp"
#include "evplace/simplex.hpp"

namespace evplace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Rows of the residual assignment LP once the station counts are fixed:
/// the y coefficients survive, the x/open terms move into the rhs.
struct MixedRow {
    RowSense sense;
    double base_rhs;
    std::vector<std::pair<std::size_t, double>> fixed_parts;  // model var idx, coef
};

}  // namespace

BruteForceResult brute_force(const MilpModel& model, long long cap) {
    const std::size_t S = model.n_sites;
    const std::size_t nx = 2 * S;
    if (cap < 0 || cap > 4) {
        throw TooLargeError("brute_force: per-variable cap must be in [0, 4]");
    }

    std::vector<long long> lb(nx), ub(nx);
    std::size_t movable = 0;
    for (std::size_t k = 0; k < nx; ++k) {
        lb[k] = std::llround(model.variables[k].lb);
        ub[k] = std::llround(model.variables[k].ub);
        if (ub[k] > cap) {
            throw TooLargeError("brute_force: variable bound above the enumeration cap");
        }
        if (ub[k] > lb[k]) ++movable;
    }
    if (movable > 16) {
        throw TooLargeError("brute_force: more than 16 enumerable integer variables");
    }

    const std::size_t y_base = 3 * S;
    const std::size_t P = model.pairs.size();

    // Residual LP template over the y variables; capacity rhs values are
    // patched per enumerated point.
    MilpModel transport;
    transport.n_sites = 0;
    transport.n_rps = 0;
    for (std::size_t k = 0; k < P; ++k) {
        const auto& v = model.variables[y_base + k];
        transport.variables.push_back({"", v.lb, v.ub, false});
        transport.objective.push_back(model.objective[y_base + k]);
    }
    std::vector<MixedRow> mixed;
    std::vector<SparseRow> bound_rows;  // rows with no y support, checked on x
    for (const auto& row : model.rows) {
        const bool has_y = std::any_of(row.coefs.begin(), row.coefs.end(),
                                       [&](const auto& c) { return c.first >= y_base; });
        if (!has_y) {
            bound_rows.push_back(row);
            continue;
        }
        MixedRow mr{row.sense, row.rhs, {}};
        SparseRow lp_row;
        lp_row.name = row.name;
        lp_row.sense = row.sense;
        for (const auto& [idx, coef] : row.coefs) {
            if (idx >= y_base) {
                lp_row.coefs.emplace_back(idx - y_base, coef);
            } else {
                mr.fixed_parts.emplace_back(idx, coef);
            }
        }
        transport.rows.push_back(std::move(lp_row));
        mixed.push_back(std::move(mr));
    }

    // Early filters over the enumerated prefix. Both apply only to rows with
    // non-negative x coefficients and no open terms, where monotonicity makes
    // the partial-sum argument valid.
    struct FilterRow {
        std::vector<double> coef;  // dense over the nx enumerated variables
        double rhs;
        std::vector<double> suffix_max;  // ge rows: best possible completion
    };
    std::vector<FilterRow> le_filters, ge_filters;
    for (const auto& row : bound_rows) {
        bool x_only_nonneg = true;
        std::vector<double> dense(nx, 0.0);
        for (const auto& [idx, coef] : row.coefs) {
            if (idx >= nx || coef < 0.0) {
                x_only_nonneg = false;
                break;
            }
            dense[idx] += coef;
        }
        if (!x_only_nonneg || row.sense == RowSense::eq) continue;
        FilterRow fr{std::move(dense), row.rhs, {}};
        if (row.sense == RowSense::le) {
            le_filters.push_back(std::move(fr));
        } else {
            fr.suffix_max.assign(nx + 1, 0.0);
            for (std::size_t k = nx; k-- > 0;) {
                fr.suffix_max[k] =
                    fr.suffix_max[k + 1] + fr.coef[k] * static_cast<double>(ub[k]);
            }
            ge_filters.push_back(std::move(fr));
        }
    }

    // Exact checks for fully decided rows. A row is decided once every x it
    // touches is assigned and every open it touches belongs to a site whose
    // pair is assigned (opens take their canonical value: 1 iff x2+x3 > 0).
    struct TriggerRow {
        const SparseRow* row;
        std::size_t trigger;  // last enumerated variable the row waits for
    };
    std::vector<TriggerRow> triggers;
    for (const auto& row : bound_rows) {
        std::size_t trigger = 0;
        for (const auto& [idx, coef] : row.coefs) {
            (void)coef;
            const std::size_t need =
                idx < nx ? idx : model.x3_index(idx - nx);  // open_i waits for x3_i
            trigger = std::max(trigger, need);
        }
        triggers.push_back({&row, trigger});
    }

    // Constant travel lower bound: each residential point pays at least its
    // cheapest reachable edge.
    double travel_lb = 0.0;
    {
        std::vector<double> best(model.n_rps, kInf);
        for (std::size_t k = 0; k < P; ++k) {
            best[model.pairs[k].rp] =
                std::min(best[model.pairs[k].rp], model.objective[y_base + k]);
        }
        for (double b : best) {
            if (b == kInf) return {};  // an unservable point: no feasible decision
            travel_lb += b;
        }
    }

    // Cheapest possible completion of the fixed-cost part from variable k on.
    std::vector<double> suffix_min_fixed(nx + 1, 0.0);
    for (std::size_t k = nx; k-- > 0;) {
        const double c = model.objective[k];
        suffix_min_fixed[k] =
            suffix_min_fixed[k + 1] +
            std::min(c * static_cast<double>(lb[k]), c * static_cast<double>(ub[k]));
    }

    std::vector<long long> x(nx, 0);
    std::vector<double> le_partial(le_filters.size(), 0.0);
    std::vector<double> ge_partial(ge_filters.size(), 0.0);
    double fixed_partial = 0.0;

    BruteForceResult result;
    std::vector<double> best_y;

    auto value_of = [&](std::size_t idx) -> double {
        if (idx < nx) return static_cast<double>(x[idx]);
        const std::size_t site = idx - nx;
        return x[model.x2_index(site)] + x[model.x3_index(site)] > 0 ? 1.0 : 0.0;
    };

    auto improves = [&](double total) {
        if (!std::isfinite(result.objective)) return total < kInf;
        return total < result.objective - 1e-9 * std::max(1.0, std::abs(result.objective));
    };

    auto leaf = [&] {
        for (std::size_t r = 0; r < mixed.size(); ++r) {
            double shift = 0.0;
            for (const auto& [idx, coef] : mixed[r].fixed_parts) {
                shift += coef * value_of(idx);
            }
            transport.rows[r].rhs = mixed[r].base_rhs - shift;
        }
        const LpSolution lp = solve_lp(transport);
        if (lp.status != LpStatus::optimal) return;
        const double total = fixed_partial + lp.objective;
        if (improves(total)) {
            result.objective = total;
            best_y = lp.values;
            result.decision.x2.assign(S, 0);
            result.decision.x3.assign(S, 0);
            result.decision.open.assign(S, 0);
            for (std::size_t i = 0; i < S; ++i) {
                result.decision.x2[i] = x[model.x2_index(i)];
                result.decision.x3[i] = x[model.x3_index(i)];
                result.decision.open[i] = result.decision.x2[i] + result.decision.x3[i] > 0;
            }
        }
    };

    auto dfs = [&](auto&& self, std::size_t k) -> void {
        if (k == nx) {
            leaf();
            return;
        }
        for (long long v = lb[k]; v <= ub[k]; ++v) {
            x[k] = v;
            const double dv = static_cast<double>(v);
            for (std::size_t r = 0; r < le_filters.size(); ++r) {
                le_partial[r] += le_filters[r].coef[k] * dv;
            }
            for (std::size_t r = 0; r < ge_filters.size(); ++r) {
                ge_partial[r] += ge_filters[r].coef[k] * dv;
            }
            fixed_partial += model.objective[k] * dv;
            bool ok = true;
            for (std::size_t r = 0; r < le_filters.size() && ok; ++r) {
                const double tol = 1e-9 * std::max(1.0, std::abs(le_filters[r].rhs));
                if (le_partial[r] > le_filters[r].rhs + tol) ok = false;
            }
            for (std::size_t r = 0; r < ge_filters.size() && ok; ++r) {
                const double tol = 1e-9 * std::max(1.0, std::abs(ge_filters[r].rhs));
                if (ge_partial[r] + ge_filters[r].suffix_max[k + 1] <
                    ge_filters[r].rhs - tol) {
                    ok = false;
                }
            }
            if (ok) {
                for (const auto& tr : triggers) {
                    if (tr.trigger != k) continue;
                    double lhs = 0.0;
                    for (const auto& [idx, coef] : tr.row->coefs) lhs += coef * value_of(idx);
                    const double tol =
                        1e-9 * std::max({1.0, std::abs(tr.row->rhs), std::abs(lhs)});
                    bool sat = true;
                    switch (tr.row->sense) {
                        case RowSense::le: sat = lhs <= tr.row->rhs + tol; break;
                        case RowSense::ge: sat = lhs >= tr.row->rhs - tol; break;
                        case RowSense::eq: sat = std::abs(lhs - tr.row->rhs) <= tol; break;
                    }
                    if (!sat) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok && std::isfinite(result.objective)) {
                const double lower =
                    fixed_partial + suffix_min_fixed[k + 1] + travel_lb;
                if (!improves(lower)) ok = false;
            }
            if (ok) self(self, k + 1);
            fixed_partial -= model.objective[k] * dv;
            for (std::size_t r = 0; r < le_filters.size(); ++r) {
                le_partial[r] -= le_filters[r].coef[k] * dv;
            }
            for (std::size_t r = 0; r < ge_filters.size(); ++r) {
                ge_partial[r] -= ge_filters[r].coef[k] * dv;
            }
        }
        x[k] = lb[k];
    };
    dfs(dfs, 0);

    if (std::isfinite(result.objective)) {
        result.feasible = true;
        for (std::size_t k = 0; k < P; ++k) {
            if (best_y[k] > 0.0) {
                result.decision.assignment.push_back(
                    {model.pairs[k].site, model.pairs[k].rp, best_y[k]});
            }
        }
    }
    return result;
}

}  // namespace evplace
