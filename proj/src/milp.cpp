#include "evplace/milp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "evplace/errors.hpp"
#include "text_util.hpp"

namespace evplace {

namespace {

using detail::fmt_double;

}  // namespace

double MilpModel::objective_value(const std::vector<double>& values) const {
    if (values.size() != variables.size()) {
        throw std::invalid_argument("objective_value: value vector size mismatch");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) total += objective[k] * values[k];
    return total;
}

MilpModel build_model(const Instance& inst) {
    const std::size_t S = inst.sites.size();
    const std::size_t R = inst.rps.size();
    if (S == 0 || R == 0) throw EmptyInstanceError("build_model: empty instance");
    const ScenarioParams& p = inst.params;

    std::vector<std::string> unreachable;
    for (std::size_t j = 0; j < R; ++j) {
        bool any = false;
        for (std::size_t i = 0; i < S && !any; ++i) any = inst.dmat.reachable(j, i);
        if (!any) unreachable.push_back(inst.rps[j].id);
    }
    if (!unreachable.empty()) throw UnreachableDemandError(std::move(unreachable));

    MilpModel m;
    m.n_sites = S;
    m.n_rps = R;

    std::vector<SiteEconomics> econ(S);
    std::vector<double> reachable_demand(S, 0.0);  // kWh/day of in-range demand
    for (std::size_t i = 0; i < S; ++i) {
        econ[i] = effective_economics(inst.sites[i], p);
        for (std::size_t j = 0; j < R; ++j) {
            if (inst.dmat.reachable(j, i)) {
                reachable_demand[i] +=
                    p.avg_energy_per_vehicle_day * static_cast<double>(inst.rps[j].vehicles);
            }
        }
    }

    // Per-site station cap: stations beyond what could serve all in-range
    // demand with the lower-throughput level never improve the objective.
    std::vector<long long> cap(S, 0);
    for (std::size_t i = 0; i < S; ++i) {
        const double per_station =
            p.traffic_rate * std::min(econ[i].energy_l2, econ[i].energy_l3);
        if (reachable_demand[i] > 0.0 && per_station > 0.0) {
            const double needed = std::ceil(reachable_demand[i] / per_station);
            cap[i] = std::min<long long>(p.max_stations_per_site,
                                         static_cast<long long>(needed));
        }
    }

    const double h = static_cast<double>(p.amortization_days);
    for (std::size_t i = 0; i < S; ++i) {
        const auto& site = inst.sites[i];
        const double ub = static_cast<double>(cap[i]);
        m.variables.push_back({"x2_" + site.id, 0.0, ub, true});
        m.variables.push_back({"x3_" + site.id, 0.0, ub, true});
        const double per_station_common = site.land_cost / h + p.avg_wage * p.traffic_rate;
        m.objective.push_back(econ[i].install_l2 / h + per_station_common +
                              econ[i].maintenance_l2 +
                              econ[i].energy_l2 * (p.price_operator + p.price_user));
        m.objective.push_back(econ[i].install_l3 / h + per_station_common +
                              econ[i].maintenance_l3 +
                              econ[i].energy_l3 * (p.price_operator + p.price_user));
    }
    for (std::size_t i = 0; i < S; ++i) {
        m.variables.push_back({"open_" + inst.sites[i].id, 0.0, 1.0, true});
        m.objective.push_back(0.0);
    }
    for (std::size_t i = 0; i < S; ++i) {
        for (std::size_t j = 0; j < R; ++j) {
            if (!inst.dmat.reachable(j, i)) continue;
            m.pairs.push_back({i, j});
            m.variables.push_back(
                {"y_" + inst.sites[i].id + "_" + inst.rps[j].id, 0.0, 1.0, false});
            m.objective.push_back(inst.dmat(j, i) * p.price_per_km * p.traffic_rate *
                                  static_cast<double>(inst.rps[j].vehicles));
        }
    }

    SparseRow budget;
    budget.name = "c1_budget";
    budget.sense = RowSense::le;
    budget.rhs = p.budget;
    for (std::size_t i = 0; i < S; ++i) {
        budget.coefs.emplace_back(m.x2_index(i), econ[i].install_l2);
        budget.coefs.emplace_back(m.x3_index(i), econ[i].install_l3);
    }
    m.rows.push_back(std::move(budget));

    std::vector<SparseRow> demand(R);
    std::vector<SparseRow> capacity(S);
    for (std::size_t j = 0; j < R; ++j) {
        demand[j].name = "demand_" + inst.rps[j].id;
        demand[j].sense = RowSense::eq;
        demand[j].rhs = 1.0;
    }
    for (std::size_t i = 0; i < S; ++i) {
        capacity[i].name = "c3_capacity_" + inst.sites[i].id;
        capacity[i].sense = RowSense::ge;
        capacity[i].rhs = 0.0;
        capacity[i].coefs.emplace_back(m.x2_index(i), p.traffic_rate * econ[i].energy_l2);
        capacity[i].coefs.emplace_back(m.x3_index(i), p.traffic_rate * econ[i].energy_l3);
    }
    for (std::size_t k = 0; k < m.pairs.size(); ++k) {
        const auto [i, j] = m.pairs[k];
        demand[j].coefs.emplace_back(m.y_index(k), 1.0);
        capacity[i].coefs.emplace_back(m.y_index(k),
                                       -p.avg_energy_per_vehicle_day *
                                           static_cast<double>(inst.rps[j].vehicles));
    }
    for (auto& row : demand) m.rows.push_back(std::move(row));
    for (auto& row : capacity) m.rows.push_back(std::move(row));

    // Aggregate capacity over all sites. Implied by the rows above; kept as a
    // valid inequality that tightens the relaxation bound.
    SparseRow system;
    system.name = "c4_system";
    system.sense = RowSense::ge;
    system.rhs = p.avg_energy_per_vehicle_day * static_cast<double>(inst.total_vehicles());
    for (std::size_t i = 0; i < S; ++i) {
        system.coefs.emplace_back(m.x2_index(i), p.traffic_rate * econ[i].energy_l2);
        system.coefs.emplace_back(m.x3_index(i), p.traffic_rate * econ[i].energy_l3);
    }
    m.rows.push_back(std::move(system));

    for (std::size_t i = 0; i < S; ++i) {
        SparseRow link;
        link.name = "link_" + inst.sites[i].id;
        link.sense = RowSense::le;
        link.rhs = 0.0;
        link.coefs.emplace_back(m.x2_index(i), 1.0);
        link.coefs.emplace_back(m.x3_index(i), 1.0);
        link.coefs.emplace_back(m.open_index(i), -static_cast<double>(cap[i]));
        m.rows.push_back(std::move(link));
    }
    return m;
}

namespace {

std::string lp_sanitize(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    if (out.empty() || (out[0] >= '0' && out[0] <= '9') || out[0] == '.') out.insert(0, "v_");
    return out;
}

std::vector<std::string> lp_names(const std::vector<Variable>& vars) {
    std::vector<std::string> names;
    names.reserve(vars.size());
    std::set<std::string> seen;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        std::string n = lp_sanitize(vars[k].name);
        while (!seen.insert(n).second) n += "_" + std::to_string(k);
        names.push_back(std::move(n));
    }
    return names;
}

std::string lp_term(double coef, const std::string& name, bool first) {
    std::string out;
    if (coef < 0) {
        out = first ? "- " : "- ";
    } else {
        out = first ? "" : "+ ";
    }
    out += fmt_double(std::abs(coef));
    out += ' ';
    out += name;
    return out;
}

void write_lp_sum(std::ofstream& out, const std::vector<std::pair<std::size_t, double>>& coefs,
                  const std::vector<std::string>& names) {
    bool first = true;
    int on_line = 0;
    for (const auto& [idx, coef] : coefs) {
        if (coef == 0.0) continue;
        if (on_line == 8) {
            out << "\n   ";
            on_line = 0;
        }
        out << (first ? " " : " ") << lp_term(coef, names[idx], first);
        first = false;
        ++on_line;
    }
    if (first) out << " 0 " << names.at(0);
}

}  // namespace

void export_lp(const MilpModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    const auto names = lp_names(model.variables);

    out << "Minimize\n obj:";
    std::vector<std::pair<std::size_t, double>> obj;
    for (std::size_t k = 0; k < model.objective.size(); ++k) {
        obj.emplace_back(k, model.objective[k]);
    }
    write_lp_sum(out, obj, names);
    out << "\nSubject To\n";
    std::set<std::string> row_seen;
    std::size_t row_idx = 0;
    for (const auto& row : model.rows) {
        std::string rn = lp_sanitize(row.name);
        while (!row_seen.insert(rn).second) rn += "_" + std::to_string(row_idx);
        ++row_idx;
        out << ' ' << rn << ':';
        write_lp_sum(out, row.coefs, names);
        switch (row.sense) {
            case RowSense::le: out << " <= "; break;
            case RowSense::ge: out << " >= "; break;
            case RowSense::eq: out << " = "; break;
        }
        out << fmt_double(row.rhs) << "\n";
    }
    out << "Bounds\n";
    for (std::size_t k = 0; k < model.variables.size(); ++k) {
        const auto& v = model.variables[k];
        out << ' ' << fmt_double(v.lb) << " <= " << names[k] << " <= " << fmt_double(v.ub)
            << "\n";
    }
    bool any_general = false;
    bool any_binary = false;
    for (const auto& v : model.variables) {
        if (!v.is_integer) continue;
        (v.lb == 0.0 && v.ub == 1.0 ? any_binary : any_general) = true;
    }
    if (any_general) {
        out << "Generals\n";
        for (std::size_t k = 0; k < model.variables.size(); ++k) {
            const auto& v = model.variables[k];
            if (v.is_integer && !(v.lb == 0.0 && v.ub == 1.0)) out << ' ' << names[k] << "\n";
        }
    }
    if (any_binary) {
        out << "Binaries\n";
        for (std::size_t k = 0; k < model.variables.size(); ++k) {
            const auto& v = model.variables[k];
            if (v.is_integer && v.lb == 0.0 && v.ub == 1.0) out << ' ' << names[k] << "\n";
        }
    }
    out << "End\n";
    if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<double> decision_to_values(const MilpModel& model, const Decision& decision) {
    const std::size_t S = model.n_sites;
    if (decision.x2.size() != S || decision.x3.size() != S || decision.open.size() != S) {
        throw std::invalid_argument("decision_to_values: decision arrays must match n_sites");
    }
    std::vector<double> values(model.variables.size(), 0.0);
    for (std::size_t i = 0; i < S; ++i) {
        values[model.x2_index(i)] = static_cast<double>(decision.x2[i]);
        values[model.x3_index(i)] = static_cast<double>(decision.x3[i]);
        values[model.open_index(i)] = decision.open[i] ? 1.0 : 0.0;
    }
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_index;
    for (std::size_t k = 0; k < model.pairs.size(); ++k) {
        pair_index[{model.pairs[k].site, model.pairs[k].rp}] = k;
    }
    for (const auto& share : decision.assignment) {
        auto it = pair_index.find({share.site, share.rp});
        if (it == pair_index.end()) {
            throw std::invalid_argument(
                "decision_to_values: assignment on an out-of-range (site, rp) pair");
        }
        values[model.y_index(it->second)] += share.share;
    }
    return values;
}

Decision values_to_decision(const MilpModel& model, const std::vector<double>& values) {
    if (values.size() != model.variables.size()) {
        throw std::invalid_argument("values_to_decision: value vector size mismatch");
    }
    Decision d;
    const std::size_t S = model.n_sites;
    d.x2.resize(S);
    d.x3.resize(S);
    d.open.resize(S);
    for (std::size_t i = 0; i < S; ++i) {
        d.x2[i] = std::llround(values[model.x2_index(i)]);
        d.x3[i] = std::llround(values[model.x3_index(i)]);
        d.open[i] = values[model.open_index(i)] > 0.5 ? 1 : 0;
    }
    for (std::size_t k = 0; k < model.pairs.size(); ++k) {
        // Noise-level shares are dropped and near-one shares clamped; both
        // sit far inside the feasibility tolerances of the demand rows.
        const double y = std::min(values[model.y_index(k)], 1.0);
        if (y > 1e-9) d.assignment.push_back({model.pairs[k].site, model.pairs[k].rp, y});
    }
    return d;
}

FeasibilityReport check_feasibility(const MilpModel& model, const Decision& decision,
                                    double rel_tol, double int_tol) {
    FeasibilityReport report;
    std::vector<double> values;
    try {
        values = decision_to_values(model, decision);
    } catch (const std::invalid_argument& e) {
        report.feasible = false;
        report.violations.push_back({std::string("layout: ") + e.what(), -1.0, 1.0});
        return report;
    }

    for (std::size_t k = 0; k < model.variables.size(); ++k) {
        const auto& v = model.variables[k];
        const double x = values[k];
        const double lo_tol = rel_tol * std::max(1.0, std::abs(v.lb));
        const double hi_tol = rel_tol * std::max(1.0, std::abs(v.ub));
        if (x < v.lb - lo_tol) {
            report.violations.push_back({"bound:" + v.name, x - v.lb, v.lb - x});
        } else if (x > v.ub + hi_tol) {
            report.violations.push_back({"bound:" + v.name, v.ub - x, x - v.ub});
        }
        if (v.is_integer) {
            const double gap = std::abs(x - std::round(x));
            if (gap > int_tol) {
                report.violations.push_back({"integrality:" + v.name, -gap, gap});
            }
        }
    }

    for (const auto& row : model.rows) {
        double lhs = 0.0;
        for (const auto& [idx, coef] : row.coefs) lhs += coef * values[idx];
        double slack = 0.0;
        switch (row.sense) {
            case RowSense::le: slack = row.rhs - lhs; break;
            case RowSense::ge: slack = lhs - row.rhs; break;
            case RowSense::eq: slack = -std::abs(lhs - row.rhs); break;
        }
        const double tol = rel_tol * std::max({1.0, std::abs(row.rhs), std::abs(lhs)});
        if (slack < -tol) {
            report.violations.push_back({row.name, slack, -slack});
        }
    }
    report.feasible = report.violations.empty();
    return report;
}

}  // namespace evplace
