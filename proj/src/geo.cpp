#include "evplace/geo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "evplace/entities.hpp"
#include "evplace/errors.hpp"

namespace evplace {

bool is_valid(const GeoPoint& p) {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
           p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    if (!is_valid(a) || !is_valid(b)) {
        throw std::invalid_argument("haversine_km: coordinate out of range or not finite");
    }
    constexpr double deg = std::numbers::pi / 180.0;
    const double lat1 = a.lat * deg;
    const double lat2 = b.lat * deg;
    const double dlat = (b.lat - a.lat) * deg;
    const double dlon = (b.lon - a.lon) * deg;
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

DistanceMatrix build_distance_matrix(const std::vector<GeoPoint>& rp_locations,
                                     const std::vector<GeoPoint>& site_locations,
                                     double d_max) {
    if (rp_locations.empty() || site_locations.empty()) {
        throw EmptyInstanceError("build_distance_matrix: empty point list");
    }
    if (!(d_max > 0.0) || !std::isfinite(d_max)) {
        throw std::invalid_argument("build_distance_matrix: d_max must be positive and finite");
    }
    DistanceMatrix dm;
    dm.rows = rp_locations.size();
    dm.cols = site_locations.size();
    dm.d_max = d_max;
    dm.km.resize(dm.rows * dm.cols);
    dm.mask.resize(dm.rows * dm.cols);
    for (std::size_t j = 0; j < dm.rows; ++j) {
        for (std::size_t i = 0; i < dm.cols; ++i) {
            const double d = haversine_km(rp_locations[j], site_locations[i]);
            dm.km[j * dm.cols + i] = d;
            dm.mask[j * dm.cols + i] = d <= d_max ? 1 : 0;
        }
    }
    return dm;
}

DistanceMatrix build_distance_matrix(const std::vector<ResidentialPoint>& rps,
                                     const std::vector<CandidateSite>& sites,
                                     double d_max) {
    std::vector<GeoPoint> rp_locs;
    rp_locs.reserve(rps.size());
    for (const auto& rp : rps) rp_locs.push_back(rp.location);
    std::vector<GeoPoint> site_locs;
    site_locs.reserve(sites.size());
    for (const auto& s : sites) site_locs.push_back(s.location);
    return build_distance_matrix(rp_locs, site_locs, d_max);
}

}  // namespace evplace
