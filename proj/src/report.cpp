#include "evplace/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "evplace/errors.hpp"
#include "text_util.hpp"

namespace evplace {

namespace {

using detail::fmt_double;
using json = nlohmann::json;

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
        out << content;
        if (!out) throw std::runtime_error(tmp + ": write failed");
    }
    std::filesystem::rename(tmp, path);
}

/// Per-site cost rows; row i holds the seven components of site i.
std::vector<std::array<double, CostBreakdown::kComponents>> per_site_components(
    const Solution& solution, const Instance& inst) {
    const std::size_t S = inst.sites.size();
    std::vector<std::array<double, CostBreakdown::kComponents>> rows(
        S, std::array<double, CostBreakdown::kComponents>{});
    const ScenarioParams& p = inst.params;
    for (std::size_t i = 0; i < S; ++i) {
        const SiteEconomics econ = effective_economics(inst.sites[i], p);
        ChargerSpec s2 = p.level2;
        s2.install_cost = econ.install_l2;
        s2.maintenance_cost = econ.maintenance_l2;
        s2.energy_per_day = econ.energy_l2;
        ChargerSpec s3 = p.level3;
        s3.install_cost = econ.install_l3;
        s3.maintenance_cost = econ.maintenance_l3;
        s3.energy_per_day = econ.energy_l3;
        const long long x2 = solution.decision.x2[i];
        const long long x3 = solution.decision.x3[i];
        rows[i][0] = installation_cost(x2, x3, s2, s3, p.amortization_days);
        rows[i][1] = land_cost(x2, x3, inst.sites[i].land_cost, p.amortization_days);
        rows[i][2] = maintenance_cost(x2, x3, s2, s3);
        rows[i][3] = operation_cost(x2, x3, s2, s3, p.price_operator);
        rows[i][4] = charging_cost(x2, x3, s2, s3, p.price_user);
        rows[i][5] = waiting_cost(x2, x3, p.avg_wage, p.traffic_rate);
    }
    for (const auto& share : solution.decision.assignment) {
        if (share.share <= 0.0) continue;
        const double vehicles =
            share.share * static_cast<double>(inst.rps[share.rp].vehicles);
        rows[share.site][6] +=
            inst.dmat(share.rp, share.site) * p.price_per_km * p.traffic_rate * vehicles;
    }
    return rows;
}

}  // namespace

BreakdownShares breakdown_shares(const CostBreakdown& breakdown) {
    BreakdownShares shares;
    if (breakdown.total == 0.0) {
        shares.zero_total = true;
        return shares;
    }
    const auto comps = breakdown.components();
    for (std::size_t c = 0; c < CostBreakdown::kComponents; ++c) {
        shares.percent[c] = comps[c] / breakdown.total * 100.0;
    }
    return shares;
}

RunReport make_report(const Instance& inst, const Solution& solution,
                      const SolverStats& stats) {
    RunReport report;
    report.n_sites = inst.sites.size();
    report.n_rps = inst.rps.size();
    report.solution = solution;
    report.stats = stats;
    report.shares = breakdown_shares(solution.breakdown);
    bool any_district = false;
    std::map<std::string, DistrictAggregate> districts;
    for (std::size_t i = 0; i < inst.sites.size(); ++i) {
        const long long stations = solution.decision.x2[i] + solution.decision.x3[i];
        if (stations >= 1) ++report.opened_sites;
        report.total_stations += stations;
        if (!inst.sites[i].district.empty()) any_district = true;
        auto& agg = districts[inst.sites[i].district];
        agg.district = inst.sites[i].district;
        agg.sites_opened += solution.decision.open[i] ? 1 : 0;
        agg.x2 += solution.decision.x2[i];
        agg.x3 += solution.decision.x3[i];
    }
    if (any_district) {
        for (auto& [name, agg] : districts) report.districts.push_back(agg);
    }
    return report;
}

void export_geojson(const Solution& solution, const Instance& inst, const std::string& path) {
    json features = json::array();
    for (std::size_t i = 0; i < inst.sites.size(); ++i) {
        if (!solution.decision.open[i]) continue;
        const auto& site = inst.sites[i];
        json props = {
            {"category", to_string(site.category)},
            {"id", site.id},
            {"kind", "site"},
            {"x2", solution.decision.x2[i]},
            {"x3", solution.decision.x3[i]},
        };
        if (!site.district.empty()) props["district"] = site.district;
        features.push_back({
            {"geometry",
             {{"coordinates", {site.location.lon, site.location.lat}}, {"type", "Point"}}},
            {"properties", props},
            {"type", "Feature"},
        });
    }
    for (const auto& rp : inst.rps) {
        json props = {{"id", rp.id}, {"kind", "rp"}, {"vehicles", rp.vehicles}};
        if (!rp.district.empty()) props["district"] = rp.district;
        features.push_back({
            {"geometry",
             {{"coordinates", {rp.location.lon, rp.location.lat}}, {"type", "Point"}}},
            {"properties", props},
            {"type", "Feature"},
        });
    }
    for (const auto& share : solution.decision.assignment) {
        if (share.share <= 0.0) continue;
        const auto& site = inst.sites[share.site];
        const auto& rp = inst.rps[share.rp];
        features.push_back({
            {"geometry",
             {{"coordinates",
               {{rp.location.lon, rp.location.lat}, {site.location.lon, site.location.lat}}},
              {"type", "LineString"}}},
            {"properties",
             {{"distance_km", inst.dmat(share.rp, share.site)},
              {"kind", "assignment"},
              {"rp", rp.id},
              {"share", share.share},
              {"site", site.id},
              {"vehicles", share.share * static_cast<double>(rp.vehicles)}}},
            {"type", "Feature"},
        });
    }
    const json doc = {{"features", features}, {"type", "FeatureCollection"}};
    write_atomic(path, doc.dump(2) + "\n");
}

void export_csv_summary(const RunReport& report, const Instance& inst,
                        const std::string& path) {
    const auto rows = per_site_components(report.solution, inst);
    std::ostringstream out;
    out << "id,x2,x3,open,installation,land,maintenance,operation,charging,waiting,travel,"
           "total\n";
    std::array<double, CostBreakdown::kComponents> totals{};
    long long t_x2 = 0, t_x3 = 0, t_open = 0;
    for (std::size_t i = 0; i < inst.sites.size(); ++i) {
        double row_total = 0.0;
        out << detail::csv_escape(inst.sites[i].id) << ',' << report.solution.decision.x2[i]
            << ',' << report.solution.decision.x3[i] << ','
            << (report.solution.decision.open[i] ? 1 : 0);
        for (std::size_t c = 0; c < CostBreakdown::kComponents; ++c) {
            out << ',' << fmt_double(rows[i][c]);
            totals[c] += rows[i][c];
            row_total += rows[i][c];
        }
        out << ',' << fmt_double(row_total) << '\n';
        t_x2 += report.solution.decision.x2[i];
        t_x3 += report.solution.decision.x3[i];
        t_open += report.solution.decision.open[i] ? 1 : 0;
    }
    double grand = 0.0;
    for (double t : totals) grand += t;
    out << "TOTAL," << t_x2 << ',' << t_x3 << ',' << t_open;
    for (std::size_t c = 0; c < CostBreakdown::kComponents; ++c) {
        out << ',' << fmt_double(totals[c]);
    }
    out << ',' << fmt_double(grand) << '\n';
    write_atomic(path, out.str());
}

CsvSummary load_csv_summary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path + ": cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw SchemaError(path + ": empty file");
    const std::string expected =
        "id,x2,x3,open,installation,land,maintenance,operation,charging,waiting,travel,total";
    {
        auto cols = detail::split_csv(line);
        std::string joined;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) joined += ',';
            joined += std::string(detail::trim(cols[c]));
        }
        if (joined != expected) throw SchemaError(path + ": unexpected header");
    }
    CsvSummary summary;
    bool saw_totals = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_csv(line);
        if (fields.size() != 12) {
            throw SchemaError(path + ": row " + std::to_string(line_no) +
                              ": expected 12 fields");
        }
        CsvSummaryRow row;
        row.id = fields[0];
        auto ll = [&](const std::string& s, const char* what) {
            auto v = detail::parse_ll(s);
            if (!v) {
                throw SchemaError(path + ": row " + std::to_string(line_no) + ": bad " +
                                  what);
            }
            return *v;
        };
        auto dd = [&](const std::string& s, const char* what) {
            auto v = detail::parse_double(s);
            if (!v) {
                throw SchemaError(path + ": row " + std::to_string(line_no) + ": bad " +
                                  what);
            }
            return *v;
        };
        row.x2 = ll(fields[1], "x2");
        row.x3 = ll(fields[2], "x3");
        row.open = static_cast<int>(ll(fields[3], "open"));
        for (std::size_t c = 0; c < CostBreakdown::kComponents; ++c) {
            row.components[c] = dd(fields[4 + c], CostBreakdown::component_name(c));
        }
        row.total = dd(fields[11], "total");
        if (row.id == "TOTAL") {
            summary.totals = row;
            saw_totals = true;
        } else {
            if (saw_totals) {
                throw SchemaError(path + ": data row after the totals row");
            }
            summary.rows.push_back(std::move(row));
        }
    }
    if (!saw_totals) throw SchemaError(path + ": missing totals row");
    return summary;
}

void write_solution_json(const Solution& solution, const Instance& inst,
                         const std::string& path) {
    json sites = json::array();
    for (std::size_t i = 0; i < inst.sites.size(); ++i) {
        sites.push_back({{"id", inst.sites[i].id},
                         {"open", solution.decision.open[i] ? 1 : 0},
                         {"x2", solution.decision.x2[i]},
                         {"x3", solution.decision.x3[i]}});
    }
    json assignment = json::array();
    for (const auto& share : solution.decision.assignment) {
        assignment.push_back({{"rp", inst.rps[share.rp].id},
                              {"share", share.share},
                              {"site", inst.sites[share.site].id}});
    }
    const auto comps = solution.breakdown.components();
    json breakdown;
    for (std::size_t c = 0; c < CostBreakdown::kComponents; ++c) {
        breakdown[CostBreakdown::component_name(c)] = comps[c];
    }
    breakdown["total"] = solution.breakdown.total;
    const json doc = {{"assignment", assignment},
                      {"breakdown", breakdown},
                      {"objective", solution.objective},
                      {"sites", sites}};
    write_atomic(path, doc.dump(2) + "\n");
}

Solution load_solution_json(const Instance& inst, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path + ": cannot open file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("sites") || !doc["sites"].is_array()) {
        throw SchemaError(path + ": expected an object with a 'sites' array");
    }
    std::map<std::string, std::size_t> site_idx, rp_idx;
    for (std::size_t i = 0; i < inst.sites.size(); ++i) site_idx[inst.sites[i].id] = i;
    for (std::size_t j = 0; j < inst.rps.size(); ++j) rp_idx[inst.rps[j].id] = j;

    Solution sol;
    sol.decision.x2.assign(inst.sites.size(), 0);
    sol.decision.x3.assign(inst.sites.size(), 0);
    sol.decision.open.assign(inst.sites.size(), 0);
    try {
        for (const auto& entry : doc["sites"]) {
            const std::string id = entry.at("id").get<std::string>();
            auto it = site_idx.find(id);
            if (it == site_idx.end()) {
                throw SchemaError(path + ": unknown site id '" + id + "'");
            }
            sol.decision.x2[it->second] = entry.at("x2").get<long long>();
            sol.decision.x3[it->second] = entry.at("x3").get<long long>();
            sol.decision.open[it->second] = entry.at("open").get<int>() ? 1 : 0;
        }
        for (const auto& entry : doc.value("assignment", json::array())) {
            const std::string site = entry.at("site").get<std::string>();
            const std::string rp = entry.at("rp").get<std::string>();
            auto si = site_idx.find(site);
            auto rj = rp_idx.find(rp);
            if (si == site_idx.end() || rj == rp_idx.end()) {
                throw SchemaError(path + ": assignment references unknown ids");
            }
            sol.decision.assignment.push_back(
                {si->second, rj->second, entry.at("share").get<double>()});
        }
        sol.objective = doc.value("objective", 0.0);
        if (doc.contains("breakdown") && doc["breakdown"].is_object()) {
            const auto& b = doc["breakdown"];
            sol.breakdown.installation = b.value("installation", 0.0);
            sol.breakdown.land = b.value("land", 0.0);
            sol.breakdown.maintenance = b.value("maintenance", 0.0);
            sol.breakdown.operation = b.value("operation", 0.0);
            sol.breakdown.charging = b.value("charging", 0.0);
            sol.breakdown.waiting = b.value("waiting", 0.0);
            sol.breakdown.travel = b.value("travel", 0.0);
            sol.breakdown.total = b.value("total", 0.0);
        }
    } catch (const json::exception& e) {
        throw SchemaError(path + ": malformed solution file: " + e.what());
    }
    return sol;
}

}  // namespace evplace
