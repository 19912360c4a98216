#include <cmath>
#include <vector>

#include "evplace/branch_and_cut.hpp"
#include "evplace/simplex.hpp"

namespace evplace {

namespace {

double frac(double v) { return v - std::floor(v); }

bool is_near_integer(double v, double tol = 1e-9) {
    return std::abs(v - std::round(v)) <= tol;
}

}  // namespace

std::optional<Cut> gomory_cut(const SimplexTableau& tab, std::size_t row,
                              double min_fractionality, double min_violation) {
    if (tab.status() != LpStatus::optimal || row >= tab.num_rows()) return std::nullopt;
    const std::size_t basic = tab.basic_col(row);
    if (!tab.col_is_integer(basic)) return std::nullopt;
    const double f0 = frac(tab.basic_value(row));
    if (f0 < min_fractionality || f0 > 1.0 - min_fractionality) return std::nullopt;

    // The tableau row in the space of nonbasic variables shifted to their
    // active bound (w_j = x_j - l_j at lower, u_j - x_j at upper, so w >= 0
    // and w = 0 at the current vertex):
    //   x_basic + sum_j a_j w_j = basic_value.
    struct Term {
        std::size_t col;
        double a;        // shifted row coefficient
        bool integral;   // w_j integer for every integer-feasible point
    };
    std::vector<Term> terms;
    bool pure_integer = true;
    for (std::size_t j = 0; j < tab.num_cols(); ++j) {
        const auto st = tab.col_status(j);
        if (st == SimplexTableau::ColStatus::basic) continue;
        // Fixed columns have w identically zero and drop out; this also
        // removes artificials (clamped to [0, 0]) and equality slacks.
        if (tab.col_lb(j) == tab.col_ub(j)) continue;
        const double coef = tab.coef(row, j);
        if (coef == 0.0) continue;
        const double a = st == SimplexTableau::ColStatus::at_lower ? coef : -coef;
        const double bound = st == SimplexTableau::ColStatus::at_lower ? tab.col_lb(j)
                                                                       : tab.col_ub(j);
        const bool integral = tab.col_is_integer(j) && is_near_integer(bound);
        if (!integral) pure_integer = false;
        terms.push_back({j, a, integral});
    }

    // Coefficients of sum_j gamma_j w_j >= f0. Purely integer support takes
    // the fractional-rounding form gamma = frac(a); that form is not valid
    // once continuous variables participate, so mixed rows use the
    // mixed-integer coefficients instead (also tighter on integer terms).
    std::vector<double> gamma(terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const double a = terms[t].a;
        if (terms[t].integral) {
            const double fj = frac(a);
            gamma[t] = pure_integer ? fj
                                    : (fj <= f0 ? fj : f0 * (1.0 - fj) / (1.0 - f0));
        } else {
            gamma[t] = a >= 0.0 ? a : f0 * (-a) / (1.0 - f0);
        }
    }

    // Translate back to structural space: expand w_j, substituting slack
    // variables by their defining rows. Constant parts fold into the rhs.
    const std::size_t n = tab.num_structural();
    std::vector<double> pi(n, 0.0);
    double constant = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::size_t j = terms[t].col;
        const double g = gamma[t];
        if (g == 0.0) continue;
        const bool at_lower = tab.col_status(j) == SimplexTableau::ColStatus::at_lower;
        if (j < n) {
            if (at_lower) {  // w = x - l
                pi[j] += g;
                constant -= g * tab.col_lb(j);
            } else {  // w = u - x
                pi[j] -= g;
                constant += g * tab.col_ub(j);
            }
        } else {
            // Slack s_q = rhs_q - sum_k a_qk x_k; lower bound is 0 (<= rows),
            // upper bound is 0 (>= rows), so w is +-(rhs_q - sum a x).
            const SparseRow& def = tab.row_def(tab.slack_row(j));
            const double sign = at_lower ? 1.0 : -1.0;
            constant += sign * g * def.rhs;
            for (const auto& [k, a] : def.coefs) pi[k] -= sign * g * a;
        }
    }

    // sum pi x + constant >= f0, flipped to <= form and normalized to unit
    // max coefficient; cuts from ill-scaled tableau rows would otherwise
    // wreck the conditioning of every LP they enter.
    Cut cut;
    cut.rhs = constant - f0;
    double maxabs = 0.0;
    for (std::size_t k = 0; k < n; ++k) maxabs = std::max(maxabs, std::abs(pi[k]));
    if (maxabs == 0.0) return std::nullopt;
    const double inv = 1.0 / maxabs;
    cut.rhs *= inv;
    for (std::size_t k = 0; k < n; ++k) {
        const double c = -pi[k] * inv;
        if (c == 0.0) continue;
        if (std::abs(c) <= 1e-7) {
            // Dropping a term relaxes the cut by its worst case over the box;
            // keeping it would let the cut span seven orders of magnitude.
            cut.rhs -= std::min(c * tab.col_lb(k), c * tab.col_ub(k));
            continue;
        }
        cut.coefs.emplace_back(k, c);
    }
    if (cut.coefs.empty()) return std::nullopt;

    double lhs = 0.0;
    for (const auto& [k, c] : cut.coefs) lhs += c * tab.col_value(k);
    cut.violation = lhs - cut.rhs;
    if (!(cut.violation >= min_violation)) return std::nullopt;
    return cut;
}

}  // namespace evplace
