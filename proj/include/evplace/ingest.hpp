#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evplace/entities.hpp"

namespace evplace {

/// Candidate-site file, CSV with header
///   id,lat,lon,land_cost,category[,district][,i2,i3,m2,m3,e2,e3]
/// or a GeoJSON FeatureCollection of Point features carrying the same
/// properties (picked by .json/.geojson extension). Rows are validated in
/// full; any invalid row aborts the load with a SchemaError that names every
/// offending row and field, so nothing is dropped silently.
std::vector<CandidateSite> load_sites(const std::string& path);

/// Residential-point file, CSV with header id,lat,lon,vehicles[,district]
/// or the GeoJSON equivalent.
std::vector<ResidentialPoint> load_rps(const std::string& path);

/// Flat key-value parameter file ("key = value", '#' comments). Required
/// keys: avg_energy_per_vehicle_day, price_operator, price_user,
/// price_per_km, avg_wage, traffic_rate, budget, d_max, and
/// level{2,3}.{install,maintenance,energy}. Optional keys with defaults:
/// amortization_days (14600), max_stations_per_site (50), level2.power
/// (7.4), level3.power (60).
ScenarioParams load_params(const std::string& path);

void write_sites(const std::vector<CandidateSite>& sites, const std::string& path);
void write_rps(const std::vector<ResidentialPoint>& rps, const std::string& path);
void write_params(const ScenarioParams& params, const std::string& path);

struct SyntheticInstance {
    std::vector<CandidateSite> sites;
    std::vector<ResidentialPoint> rps;
    ScenarioParams params;
};

/// Deterministic synthetic instance for a fixed seed. Sites and residential
/// points are uniform in the bbox; land costs uniform in [25e6, 80e6];
/// vehicle counts uniform integers sized so that the level-2 fleet can cover
/// total demand within the per-site cap (3 for these instances, keeping them
/// inside brute_force guard rails); budget is twice the level-2 cover cost.
/// Throws std::invalid_argument on zero counts or a degenerate bbox.
SyntheticInstance generate_synthetic(int n_sites, int n_rps, std::uint64_t seed,
                                     GeoPoint bbox_min = {10.75, 106.65},
                                     GeoPoint bbox_max = {10.78, 106.68});

}  // namespace evplace
