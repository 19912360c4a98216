#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evplace/branch_and_cut.hpp"
#include "evplace/errors.hpp"
#include "evplace/ingest.hpp"
#include "evplace/instance.hpp"
#include "evplace/milp.hpp"
#include "evplace/report.hpp"

namespace py = pybind11;
using namespace evplace;

namespace {

py::dict breakdown_to_dict(const CostBreakdown& b) {
    py::dict d;
    const auto comps = b.components();
    for (std::size_t c = 0; c < CostBreakdown::kComponents; ++c) {
        d[CostBreakdown::component_name(c)] = comps[c];
    }
    d["total"] = b.total;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "EV charging-station placement core";

    py::register_exception<SchemaError>(m, "SchemaError");
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<EmptyInstanceError>(m, "EmptyInstanceError");
    py::register_exception<TooLargeError>(m, "TooLargeError");
    py::register_exception<NumericError>(m, "NumericError");
    py::register_exception<UnreachableDemandError>(m, "UnreachableDemandError");

    py::class_<GeoPoint>(m, "GeoPoint")
        .def(py::init<>())
        .def(py::init([](double lat, double lon) { return GeoPoint{lat, lon}; }),
             py::arg("lat"), py::arg("lon"))
        .def_readwrite("lat", &GeoPoint::lat)
        .def_readwrite("lon", &GeoPoint::lon);
    m.def("haversine_km", &haversine_km, py::arg("a"), py::arg("b"));

    py::class_<Decision::Share>(m, "Share")
        .def(py::init<>())
        .def_readwrite("site", &Decision::Share::site)
        .def_readwrite("rp", &Decision::Share::rp)
        .def_readwrite("share", &Decision::Share::share);

    py::class_<Decision>(m, "Decision")
        .def(py::init<>())
        .def_readwrite("x2", &Decision::x2)
        .def_readwrite("x3", &Decision::x3)
        .def_readwrite("open", &Decision::open)
        .def_readwrite("assignment", &Decision::assignment);

    py::class_<Instance>(m, "Instance")
        .def_property_readonly("n_sites",
                               [](const Instance& inst) { return inst.sites.size(); })
        .def_property_readonly("n_rps", [](const Instance& inst) { return inst.rps.size(); })
        .def("total_vehicles", &Instance::total_vehicles)
        .def("site_ids",
             [](const Instance& inst) {
                 std::vector<std::string> ids;
                 for (const auto& s : inst.sites) ids.push_back(s.id);
                 return ids;
             })
        .def("rp_ids", [](const Instance& inst) {
            std::vector<std::string> ids;
            for (const auto& r : inst.rps) ids.push_back(r.id);
            return ids;
        });

    m.def(
        "load_instance",
        [](const std::string& sites, const std::string& rps, const std::string& params) {
            return make_instance(load_sites(sites), load_rps(rps), load_params(params));
        },
        py::arg("sites"), py::arg("rps"), py::arg("params"),
        "Load an instance from a sites file, a residential-points file, and a parameter file.");

    m.def(
        "generate_synthetic",
        [](int n_sites, int n_rps, std::uint64_t seed) {
            SyntheticInstance s = generate_synthetic(n_sites, n_rps, seed);
            return make_instance(std::move(s.sites), std::move(s.rps), std::move(s.params));
        },
        py::arg("n_sites"), py::arg("n_rps"), py::arg("seed") = 1,
        "Deterministic synthetic instance for a fixed seed.");

    py::class_<MilpModel>(m, "Model")
        .def_property_readonly("n_variables",
                               [](const MilpModel& mm) { return mm.variables.size(); })
        .def_property_readonly("n_rows", [](const MilpModel& mm) { return mm.rows.size(); })
        .def("objective_value", &MilpModel::objective_value, py::arg("values"));
    m.def("build_model", &build_model, py::arg("instance"));
    m.def(
        "export_lp",
        [](const MilpModel& mm, const std::string& path) { export_lp(mm, path); },
        py::arg("model"), py::arg("path"));

    py::class_<SolverStats>(m, "SolverStats")
        .def_readonly("nodes_explored", &SolverStats::nodes_explored)
        .def_readonly("cuts_added", &SolverStats::cuts_added)
        .def_readonly("final_gap", &SolverStats::final_gap)
        .def_readonly("best_bound", &SolverStats::best_bound)
        .def_readonly("wall_time_s", &SolverStats::wall_time_s)
        .def_property_readonly(
            "status", [](const SolverStats& s) { return std::string(to_string(s.status)); });

    py::class_<Solution>(m, "Solution")
        .def_readonly("decision", &Solution::decision)
        .def_readonly("objective", &Solution::objective)
        .def_property_readonly(
            "breakdown", [](const Solution& s) { return breakdown_to_dict(s.breakdown); });

    py::class_<SolveOutcome>(m, "SolveOutcome")
        .def_property_readonly("solution",
                               [](const SolveOutcome& o) -> py::object {
                                   if (!o.solution) return py::none();
                                   return py::cast(*o.solution);
                               })
        .def_readonly("stats", &SolveOutcome::stats);

    m.def(
        "solve",
        [](const Instance& inst, double gap, double time_limit_s, long long node_limit,
           int max_cuts_per_node) {
            SolverOptions opts;
            opts.gap = gap;
            opts.time_limit_s = time_limit_s;
            opts.node_limit = node_limit;
            opts.max_cuts_per_node = max_cuts_per_node;
            const MilpModel model = build_model(inst);
            return solve(inst, model, opts);
        },
        py::arg("instance"), py::arg("gap") = 1e-4,
        py::arg("time_limit_s") = std::numeric_limits<double>::infinity(),
        py::arg("node_limit") = 0, py::arg("max_cuts_per_node") = 5,
        py::call_guard<py::gil_scoped_release>(),
        "Solve an instance to the requested gap; returns a SolveOutcome.");

    m.def(
        "brute_force",
        [](const Instance& inst, long long cap) -> py::object {
            const MilpModel model = build_model(inst);
            const BruteForceResult r = brute_force(model, cap);
            if (!r.feasible) return py::none();
            Solution sol;
            sol.decision = r.decision;
            sol.objective = r.objective;
            sol.breakdown = evaluate(r.decision, inst);
            return py::cast(sol);
        },
        py::arg("instance"), py::arg("cap") = 4,
        "Exhaustive reference solve of a tiny instance; None when infeasible.");

    m.def(
        "evaluate",
        [](const Decision& d, const Instance& inst) {
            return breakdown_to_dict(evaluate(d, inst));
        },
        py::arg("decision"), py::arg("instance"),
        "Cost breakdown of a decision as a dict.");

    m.def(
        "check_feasibility",
        [](const Instance& inst, const Decision& d) {
            const FeasibilityReport rep = check_feasibility(build_model(inst), d);
            py::list out;
            for (const auto& v : rep.violations) {
                out.append(py::make_tuple(v.row, v.magnitude));
            }
            return py::make_tuple(rep.feasible, out);
        },
        py::arg("instance"), py::arg("decision"),
        "(feasible, [(row, violation magnitude), ...]) for a decision.");

    m.def(
        "write_solution_json",
        [](const Solution& sol, const Instance& inst, const std::string& path) {
            write_solution_json(sol, inst, path);
        },
        py::arg("solution"), py::arg("instance"), py::arg("path"));
    m.def("load_solution_json", &load_solution_json, py::arg("instance"), py::arg("path"));
    m.def(
        "export_geojson",
        [](const Solution& sol, const Instance& inst, const std::string& path) {
            export_geojson(sol, inst, path);
        },
        py::arg("solution"), py::arg("instance"), py::arg("path"));
}
