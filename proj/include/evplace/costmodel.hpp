#pragma once

#include <cstddef>
#include <vector>

#include "evplace/entities.hpp"
#include "evplace/geo.hpp"

namespace evplace {

/// One assignment edge: `vehicles` of residential point `rp` are served at
/// candidate site `site` (fractional splitting allowed upstream, so this is
/// a real number).
struct ServedDemand {
    std::size_t site = 0;
    std::size_t rp = 0;
    double vehicles = 0.0;
};

/// Daily cost of a candidate decision, split into the seven components.
struct CostBreakdown {
    double installation = 0.0;
    double land = 0.0;
    double maintenance = 0.0;
    double operation = 0.0;
    double charging = 0.0;
    double waiting = 0.0;
    double travel = 0.0;
    double total = 0.0;

    static constexpr std::size_t kComponents = 7;
    std::array<double, kComponents> components() const {
        return {installation, land, maintenance, operation, charging, waiting, travel};
    }
    static const char* component_name(std::size_t idx);
};

// Per-site component formulas. Counts are station counts at one site; all
// results are currency/day. One-off installation and land prices are
// amortized over `amortization_days`.

double installation_cost(long long x2, long long x3, const ChargerSpec& spec2,
                         const ChargerSpec& spec3, long long amortization_days);

double land_cost(long long x2, long long x3, double land_cost_total,
                 long long amortization_days);

double maintenance_cost(long long x2, long long x3, const ChargerSpec& spec2,
                        const ChargerSpec& spec3);

double operation_cost(long long x2, long long x3, const ChargerSpec& spec2,
                      const ChargerSpec& spec3, double price_operator);

double charging_cost(long long x2, long long x3, const ChargerSpec& spec2,
                     const ChargerSpec& spec3, double price_user);

double waiting_cost(long long x2, long long x3, double avg_wage, double traffic_rate);

/// Demand-side access cost over explicit assignment edges. Every edge must
/// lie on a reachable (within-range) pair; an edge on an unreachable pair is
/// a contract violation and throws std::logic_error.
double travel_cost(const std::vector<ServedDemand>& assignment, const DistanceMatrix& dmat,
                   double price_per_km, double traffic_rate);

/// Hours to replenish `e100`*`d_avg`/100 kWh at `power_kw`.
double charging_time(double e100_kwh, double d_avg_km, double power_kw);

/// Hours to deliver `consumption_kwh` at `power_kw` with a 0.85 power factor.
double charging_time_derated(double consumption_kwh, double power_kw);

/// A full decision: per-site integer station counts, open flags, and the
/// demand assignment as fractions of each residential point's vehicles.
struct Decision {
    std::vector<long long> x2;       // per site
    std::vector<long long> x3;       // per site
    std::vector<std::uint8_t> open;  // per site
    struct Share {
        std::size_t site = 0;
        std::size_t rp = 0;
        double share = 0.0;  // fraction of rp's vehicles served at site
    };
    std::vector<Share> assignment;
};

/// Sums every component over all sites (travel over all assignment edges).
/// total is the exact sum of the seven components.
CostBreakdown evaluate(const Decision& decision, const std::vector<CandidateSite>& sites,
                       const std::vector<ResidentialPoint>& rps, const DistanceMatrix& dmat,
                       const ScenarioParams& params);

}  // namespace evplace
