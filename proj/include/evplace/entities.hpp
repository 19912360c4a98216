#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "evplace/geo.hpp"

namespace evplace {

enum class ChargerLevel { L2, L3 };

/// Economic and physical profile of one charger level.
struct ChargerSpec {
    ChargerLevel level = ChargerLevel::L2;
    double install_cost = 0.0;      // currency, one-off
    double maintenance_cost = 0.0;  // currency per day
    double energy_per_day = 0.0;    // kWh/day nominal throughput
    double power_kw = 0.0;          // charging power
};

/// Power-band advisories: L2 is expected in [3.7, 22] kW, L3 above 44 kW.
/// Out-of-band specs are flagged, never rejected.
std::vector<std::string> power_band_warnings(const ChargerSpec& spec);

enum class SiteCategory {
    parking,
    supermarket_mall,
    apartment_office,
    university_college,
    hotel,
    gas_station,
};

const char* to_string(SiteCategory c);
std::optional<SiteCategory> site_category_from_string(const std::string& s);

/// A point of interest where chargers may be installed.
struct CandidateSite {
    std::string id;
    GeoPoint location;
    double land_cost = 0.0;  // currency over the amortization horizon
    SiteCategory category = SiteCategory::parking;
    std::string district;  // optional grouping key, empty when absent

    // Per-site overrides of the level constants; fall back to ScenarioParams.
    std::optional<double> install_l2, install_l3;
    std::optional<double> maintenance_l2, maintenance_l3;
    std::optional<double> energy_l2, energy_l3;
};

/// A demand point: a ward centered at its administrative office.
struct ResidentialPoint {
    std::string id;
    GeoPoint location;
    long long vehicles = 0;  // EV count, >= 0
    std::string district;
};

/// Scenario-wide constants of the cost model and the constraint set.
struct ScenarioParams {
    double avg_energy_per_vehicle_day = 0.0;  // kWh/vehicle/day
    double price_operator = 0.0;              // currency/kWh paid by the CSO
    double price_user = 0.0;                  // currency/kWh paid by drivers
    double price_per_km = 0.0;                // currency/km of access travel
    double avg_wage = 0.0;                    // currency/day
    double traffic_rate = 1.0;                // utilization fraction, (0, 1]
    double budget = 0.0;                      // installation budget
    double d_max = 0.0;                       // km driving range
    long long amortization_days = 14600;      // one-off -> daily divisor
    long long max_stations_per_site = 50;     // hard cap on per-site counts
    ChargerSpec level2;
    ChargerSpec level3;

    const ChargerSpec& spec(ChargerLevel lv) const {
        return lv == ChargerLevel::L2 ? level2 : level3;
    }
};

/// Effective per-site constants after applying CandidateSite overrides.
struct SiteEconomics {
    double install_l2 = 0, install_l3 = 0;
    double maintenance_l2 = 0, maintenance_l3 = 0;
    double energy_l2 = 0, energy_l3 = 0;
};

SiteEconomics effective_economics(const CandidateSite& site, const ScenarioParams& params);

}  // namespace evplace
