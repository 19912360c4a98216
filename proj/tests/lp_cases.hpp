// Deterministic random boxed-LP family shared by the simplex tests and the
// reference-value dump tool. Everything routes through explicit integer
// mappings of mt19937_64 output so the cases are identical on every platform.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "evplace/milp.hpp"

namespace lp_cases {

inline double u01(std::mt19937_64& g) { return (g() >> 11) * 0x1.0p-53; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * u01(g);
}

inline long long uniform_int(std::mt19937_64& g, long long lo, long long hi) {
    return lo + static_cast<long long>(g() % static_cast<unsigned long long>(hi - lo + 1));
}

inline double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

/// Case k of the family. Mixes senses, signs, nonzero lower bounds, and
/// negative costs; roughly one case in five is infeasible by construction.
inline evplace::MilpModel make_case(int k) {
    std::mt19937_64 g(0x5eedf00d + static_cast<std::uint64_t>(k) * 7919);
    evplace::MilpModel model;
    const int n = static_cast<int>(uniform_int(g, 2, 6));
    const int m = static_cast<int>(uniform_int(g, 1, 5));
    for (int j = 0; j < n; ++j) {
        evplace::Variable v;
        v.name = "v" + std::to_string(j);
        v.lb = round3(uniform(g, -5.0, 5.0));
        v.ub = v.lb + round3(uniform(g, 0.0, 10.0));
        model.variables.push_back(v);
        model.objective.push_back(round3(uniform(g, -10.0, 10.0)));
    }
    for (int r = 0; r < m; ++r) {
        evplace::SparseRow row;
        row.name = "r" + std::to_string(r);
        double mid = 0.0;
        for (int j = 0; j < n; ++j) {
            if (u01(g) < 0.7) {
                const double c = round3(uniform(g, -5.0, 5.0));
                if (c != 0.0) {
                    row.coefs.emplace_back(static_cast<std::size_t>(j), c);
                    mid += c * 0.5 * (model.variables[j].lb + model.variables[j].ub);
                }
            }
        }
        const double pick = u01(g);
        row.sense = pick < 0.4   ? evplace::RowSense::le
                    : pick < 0.8 ? evplace::RowSense::ge
                                 : evplace::RowSense::eq;
        row.rhs = round3(mid + uniform(g, -8.0, 8.0));
        if (row.coefs.empty()) continue;
        model.rows.push_back(std::move(row));
    }
    return model;
}

constexpr int kNumCases = 40;

}  // namespace lp_cases
