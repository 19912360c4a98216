#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "evplace/errors.hpp"
#include "evplace/milp.hpp"
#include "evplace/simplex.hpp"
#include "lp_cases.hpp"

using namespace evplace;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MilpModel make_model(std::vector<Variable> vars, std::vector<double> obj,
                     std::vector<SparseRow> rows) {
    MilpModel m;
    m.variables = std::move(vars);
    m.objective = std::move(obj);
    m.rows = std::move(rows);
    return m;
}

Variable var(const char* name, double lb, double ub) {
    Variable v;
    v.name = name;
    v.lb = lb;
    v.ub = ub;
    return v;
}

SparseRow row(const char* name, std::vector<std::pair<std::size_t, double>> coefs,
              RowSense sense, double rhs) {
    SparseRow r;
    r.name = name;
    r.coefs = std::move(coefs);
    r.sense = sense;
    r.rhs = rhs;
    return r;
}

// Independent feasibility check, sharing no code with the solver.
void check_point_feasible(const MilpModel& m, const std::vector<double>& x, double tol) {
    REQUIRE(x.size() == m.variables.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        CHECK(x[j] >= m.variables[j].lb - tol);
        CHECK(x[j] <= m.variables[j].ub + tol);
    }
    for (const auto& r : m.rows) {
        double lhs = 0.0;
        for (const auto& [idx, c] : r.coefs) lhs += c * x[idx];
        const double rtol = tol * std::max({1.0, std::abs(r.rhs), std::abs(lhs)});
        switch (r.sense) {
            case RowSense::le: CHECK(lhs <= r.rhs + rtol); break;
            case RowSense::ge: CHECK(lhs >= r.rhs - rtol); break;
            case RowSense::eq: CHECK(std::abs(lhs - r.rhs) <= rtol); break;
        }
    }
}

}  // namespace

TEST_CASE("two-variable optimum at a row-bound vertex") {
    // min -x - 2y  s.t.  x + y <= 4,  x in [0,3],  y in [0,2]  ->  (2,2), -6.
    auto m = make_model({var("x", 0, 3), var("y", 0, 2)}, {-1, -2},
                        {row("r0", {{0, 1.0}, {1, 1.0}}, RowSense::le, 4.0)});
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-6.0).epsilon(1e-9));
    CHECK(sol.values[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(sol.values[1] == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("optimum via a pure bound flip") {
    // min -x  s.t.  x + y <= 10,  x in [0,2],  y in [0,1]: the row never
    // blocks, so x just flips to its upper bound.
    auto m = make_model({var("x", 0, 2), var("y", 0, 1)}, {-1, 0},
                        {row("r0", {{0, 1.0}, {1, 1.0}}, RowSense::le, 10.0)});
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(sol.values[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("equality row with nonzero lower bounds") {
    // min x + y  s.t.  x + y = 3,  x in [1,5], y in [0.5, 5] -> objective 3.
    auto m = make_model({var("x", 1, 5), var("y", 0.5, 5)}, {1, 1},
                        {row("r0", {{0, 1.0}, {1, 1.0}}, RowSense::eq, 3.0)});
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-9));
    check_point_feasible(m, sol.values, 1e-7);
}

TEST_CASE("negative lower bounds and a ge row") {
    // min x + 2y  s.t.  x + y >= -1,  x,y in [-3, 3]  ->  y = -3, x = 2: -4.
    auto m = make_model({var("x", -3, 3), var("y", -3, 3)}, {1, 2},
                        {row("r0", {{0, 1.0}, {1, 1.0}}, RowSense::ge, -1.0)});
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-4.0).epsilon(1e-9));
    CHECK(sol.values[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(sol.values[1] == doctest::Approx(-3.0).epsilon(1e-9));
}

TEST_CASE("infeasible row pair") {
    auto m = make_model({var("x", 0, 1), var("y", 0, 1)}, {1, 1},
                        {row("r0", {{0, 1.0}, {1, 1.0}}, RowSense::le, 1.0),
                         row("r1", {{0, 1.0}, {1, 1.0}}, RowSense::ge, 2.5)});
    CHECK(solve_lp(m).status == LpStatus::infeasible);
}

TEST_CASE("empty box is infeasible without solving") {
    auto m = make_model({var("x", 2, 1)}, {1}, {});
    CHECK(solve_lp(m).status == LpStatus::infeasible);
}

TEST_CASE("non-finite structural bounds are rejected everywhere") {
    // Every structural variable is boxed, which is what rules the unbounded
    // status out of normal operation; the guard enforces it at construction.
    auto m = make_model({var("x", 0, kInf)}, {1}, {});
    CHECK_THROWS_AS(solve_lp(m), std::invalid_argument);
    auto m2 = make_model({var("x", 0, 1), var("y", 0, 1)}, {0, -1},
                         {row("r0", {{0, 1.0}, {1, -1.0}}, RowSense::le, 10.0)});
    CHECK_THROWS_AS(SimplexTableau(m2, {0.0, 0.0}, {1.0, kInf}, {}), std::invalid_argument);
}

TEST_CASE("degenerate vertex still terminates") {
    // Three redundant rows meet at (1,1); the optimum sits on top of them.
    auto m = make_model({var("x", 0, 2), var("y", 0, 2)}, {-1, -1},
                        {row("r0", {{0, 1.0}, {1, 1.0}}, RowSense::le, 2.0),
                         row("r1", {{0, 2.0}, {1, 2.0}}, RowSense::le, 4.0),
                         row("r2", {{0, 1.0}, {1, 1.0}}, RowSense::le, 2.0)});
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("fixed variables stay put") {
    auto m = make_model({var("x", 1.5, 1.5), var("y", 0, 4)}, {5, 1},
                        {row("r0", {{0, 1.0}, {1, 1.0}}, RowSense::ge, 3.0)});
    const LpSolution sol = solve_lp(m);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.values[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(sol.values[1] == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("cut rows constrain like model rows") {
    auto m = make_model({var("x", 0, 3), var("y", 0, 2)}, {-1, -2},
                        {row("r0", {{0, 1.0}, {1, 1.0}}, RowSense::le, 4.0)});
    CutRow cut;
    cut.coefs = {{0, 1.0}};
    cut.rhs = 1.0;  // x <= 1 shifts the optimum to (1, 2): objective -5
    const LpSolution sol = solve_lp(m, {0, 0}, {3, 2}, {cut});
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(-5.0).epsilon(1e-9));
    CHECK(sol.values[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("random boxed LPs match the reference solver") {
    // Objectives computed once with an independent LP solver and frozen.
    struct Expected {
        bool feasible;
        double objective;
    };
    static const Expected expected[lp_cases::kNumCases] = {
        {true, -93.34728768857246},
        {false, 0.0},
        {true, 36.777767999999995},
        {false, 0.0},
        {true, -14.516027999999999},
        {true, 8.50545989190712},
        {false, 0.0},
        {true, -3.2076753645612577},
        {false, 0.0},
        {false, 0.0},
        {false, 0.0},
        {false, 0.0},
        {true, 23.05957426227097},
        {true, 30.674837254405},
        {true, -157.07621899999998},
        {true, -2.9430158862133595},
        {true, 10.183618370004117},
        {false, 0.0},
        {true, -62.673236},
        {false, 0.0},
        {true, 79.3763575890523},
        {false, 0.0},
        {true, -35.7842313207333},
        {false, 0.0},
        {true, 73.94305709668247},
        {true, -104.01148290802888},
        {false, 0.0},
        {true, 41.45494892455111},
        {true, -30.360754967093378},
        {true, -47.87950362819433},
        {true, -35.10025252847614},
        {true, -17.083191000000003},
        {false, 0.0},
        {true, -7.001357889333127},
        {false, 0.0},
        {true, -90.27130199999999},
        {true, -80.7629750795756},
        {true, 10.755220226787513},
        {true, 36.6827836013201},
        {false, 0.0},
    };
    for (int k = 0; k < lp_cases::kNumCases; ++k) {
        CAPTURE(k);
        const MilpModel m = lp_cases::make_case(k);
        const LpSolution sol = solve_lp(m);
        if (!expected[k].feasible) {
            CHECK(sol.status == LpStatus::infeasible);
            continue;
        }
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(sol.objective ==
              doctest::Approx(expected[k].objective).epsilon(1e-7).scale(1.0));
        check_point_feasible(m, sol.values, 1e-6);
        // The reported objective must equal the objective of the reported point.
        double dot = 0.0;
        for (std::size_t j = 0; j < m.objective.size(); ++j) dot += m.objective[j] * sol.values[j];
        CHECK(sol.objective == doctest::Approx(dot).epsilon(1e-9));
    }
}

TEST_CASE("determinism: repeated solves give identical bytes") {
    for (int k : {0, 5, 12, 24}) {
        const MilpModel m = lp_cases::make_case(k);
        const LpSolution a = solve_lp(m);
        const LpSolution b = solve_lp(m);
        CHECK(a.status == b.status);
        CHECK(a.objective == b.objective);
        CHECK(a.values == b.values);
        CHECK(a.basis == b.basis);
    }
}
