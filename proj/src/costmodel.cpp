#include "evplace/costmodel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace evplace {

namespace {

void check_counts(long long x2, long long x3) {
    if (x2 < 0 || x3 < 0) {
        throw std::invalid_argument("station counts must be non-negative");
    }
}

}  // namespace

const char* CostBreakdown::component_name(std::size_t idx) {
    static const char* names[kComponents] = {
        "installation", "land", "maintenance", "operation", "charging", "waiting", "travel",
    };
    if (idx >= kComponents) throw std::out_of_range("component index");
    return names[idx];
}

SiteEconomics effective_economics(const CandidateSite& site, const ScenarioParams& params) {
    SiteEconomics e;
    e.install_l2 = site.install_l2.value_or(params.level2.install_cost);
    e.install_l3 = site.install_l3.value_or(params.level3.install_cost);
    e.maintenance_l2 = site.maintenance_l2.value_or(params.level2.maintenance_cost);
    e.maintenance_l3 = site.maintenance_l3.value_or(params.level3.maintenance_cost);
    e.energy_l2 = site.energy_l2.value_or(params.level2.energy_per_day);
    e.energy_l3 = site.energy_l3.value_or(params.level3.energy_per_day);
    return e;
}

double installation_cost(long long x2, long long x3, const ChargerSpec& spec2,
                         const ChargerSpec& spec3, long long amortization_days) {
    check_counts(x2, x3);
    if (amortization_days < 1) throw std::invalid_argument("amortization_days must be >= 1");
    return (static_cast<double>(x2) * spec2.install_cost +
            static_cast<double>(x3) * spec3.install_cost) /
           static_cast<double>(amortization_days);
}

double land_cost(long long x2, long long x3, double land_cost_total,
                 long long amortization_days) {
    check_counts(x2, x3);
    if (amortization_days < 1) throw std::invalid_argument("amortization_days must be >= 1");
    return land_cost_total / static_cast<double>(amortization_days) *
           static_cast<double>(x2 + x3);
}

double maintenance_cost(long long x2, long long x3, const ChargerSpec& spec2,
                        const ChargerSpec& spec3) {
    check_counts(x2, x3);
    return static_cast<double>(x2) * spec2.maintenance_cost +
           static_cast<double>(x3) * spec3.maintenance_cost;
}

double operation_cost(long long x2, long long x3, const ChargerSpec& spec2,
                      const ChargerSpec& spec3, double price_operator) {
    check_counts(x2, x3);
    return (static_cast<double>(x2) * spec2.energy_per_day +
            static_cast<double>(x3) * spec3.energy_per_day) *
           price_operator;
}

double charging_cost(long long x2, long long x3, const ChargerSpec& spec2,
                     const ChargerSpec& spec3, double price_user) {
    check_counts(x2, x3);
    return (static_cast<double>(x2) * spec2.energy_per_day +
            static_cast<double>(x3) * spec3.energy_per_day) *
           price_user;
}

double waiting_cost(long long x2, long long x3, double avg_wage, double traffic_rate) {
    check_counts(x2, x3);
    return avg_wage * traffic_rate * static_cast<double>(x2 + x3);
}

double travel_cost(const std::vector<ServedDemand>& assignment, const DistanceMatrix& dmat,
                   double price_per_km, double traffic_rate) {
    double total = 0.0;
    for (const auto& edge : assignment) {
        if (edge.rp >= dmat.rows || edge.site >= dmat.cols) {
            throw std::logic_error("travel_cost: assignment edge out of range");
        }
        if (!dmat.reachable(edge.rp, edge.site)) {
            throw std::logic_error("travel_cost: assignment edge exceeds driving range");
        }
        total += dmat(edge.rp, edge.site) * price_per_km * traffic_rate * edge.vehicles;
    }
    return total;
}

double charging_time(double e100_kwh, double d_avg_km, double power_kw) {
    if (!(power_kw > 0)) throw std::invalid_argument("charging power must be positive");
    return e100_kwh * d_avg_km / (100.0 * power_kw);
}

double charging_time_derated(double consumption_kwh, double power_kw) {
    if (!(power_kw > 0)) throw std::invalid_argument("charging power must be positive");
    return consumption_kwh / (0.85 * power_kw);
}

CostBreakdown evaluate(const Decision& decision, const std::vector<CandidateSite>& sites,
                       const std::vector<ResidentialPoint>& rps, const DistanceMatrix& dmat,
                       const ScenarioParams& params) {
    const std::size_t n = sites.size();
    if (decision.x2.size() != n || decision.x3.size() != n || decision.open.size() != n) {
        throw std::invalid_argument("evaluate: decision arrays must match the site count");
    }
    if (dmat.rows != rps.size() || dmat.cols != n) {
        throw std::invalid_argument("evaluate: distance matrix shape mismatch");
    }

    CostBreakdown b;
    for (std::size_t i = 0; i < n; ++i) {
        const SiteEconomics econ = effective_economics(sites[i], params);
        ChargerSpec s2 = params.level2;
        s2.install_cost = econ.install_l2;
        s2.maintenance_cost = econ.maintenance_l2;
        s2.energy_per_day = econ.energy_l2;
        ChargerSpec s3 = params.level3;
        s3.install_cost = econ.install_l3;
        s3.maintenance_cost = econ.maintenance_l3;
        s3.energy_per_day = econ.energy_l3;

        const long long x2 = decision.x2[i];
        const long long x3 = decision.x3[i];
        b.installation += installation_cost(x2, x3, s2, s3, params.amortization_days);
        b.land += land_cost(x2, x3, sites[i].land_cost, params.amortization_days);
        b.maintenance += maintenance_cost(x2, x3, s2, s3);
        b.operation += operation_cost(x2, x3, s2, s3, params.price_operator);
        b.charging += charging_cost(x2, x3, s2, s3, params.price_user);
        b.waiting += waiting_cost(x2, x3, params.avg_wage, params.traffic_rate);
    }

    std::vector<ServedDemand> edges;
    edges.reserve(decision.assignment.size());
    for (const auto& share : decision.assignment) {
        if (share.rp >= rps.size() || share.site >= n) {
            throw std::invalid_argument("evaluate: assignment share out of range");
        }
        if (!std::isfinite(share.share) || share.share < 0) {
            throw std::invalid_argument("evaluate: assignment share must be finite and >= 0");
        }
        if (share.share == 0.0) continue;
        edges.push_back({share.site, share.rp,
                         share.share * static_cast<double>(rps[share.rp].vehicles)});
    }
    b.travel = travel_cost(edges, dmat, params.price_per_km, params.traffic_rate);
    b.total = b.installation + b.land + b.maintenance + b.operation + b.charging + b.waiting +
              b.travel;
    return b;
}

}  // namespace evplace
