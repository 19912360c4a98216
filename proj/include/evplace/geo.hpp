#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace evplace {

struct CandidateSite;
struct ResidentialPoint;

/// Mean Earth radius used by all great-circle computations.
inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double lat = 0.0;  // degrees, [-90, 90]
    double lon = 0.0;  // degrees, [-180, 180]
};

/// True iff both coordinates are finite and within bounds.
bool is_valid(const GeoPoint& p);

/// Great-circle distance in km. Symmetric, non-negative.
/// Throws std::invalid_argument on a non-finite or out-of-range point.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

/// Dense residential-point x candidate-site distance matrix.
/// reachable(j, i) == (km(j, i) <= d_max), the range mask applied by the
/// assignment model.
struct DistanceMatrix {
    std::size_t rows = 0;  // residential points
    std::size_t cols = 0;  // candidate sites
    double d_max = 0.0;
    std::vector<double> km;           // row-major, rows x cols
    std::vector<std::uint8_t> mask;   // 1 where km <= d_max

    double operator()(std::size_t rp, std::size_t site) const {
        return km[rp * cols + site];
    }
    bool reachable(std::size_t rp, std::size_t site) const {
        return mask[rp * cols + site] != 0;
    }
};

DistanceMatrix build_distance_matrix(const std::vector<GeoPoint>& rp_locations,
                                     const std::vector<GeoPoint>& site_locations,
                                     double d_max);

/// Entity overload; rows follow rps order, columns follow sites order.
/// Throws EmptyInstanceError when either list is empty.
DistanceMatrix build_distance_matrix(const std::vector<ResidentialPoint>& rps,
                                     const std::vector<CandidateSite>& sites,
                                     double d_max);

}  // namespace evplace
