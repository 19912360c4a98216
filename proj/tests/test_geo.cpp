#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "evplace/errors.hpp"
#include "evplace/geo.hpp"

using namespace evplace;

TEST_CASE("point validity") {
    CHECK(is_valid({0.0, 0.0}));
    CHECK(is_valid({-90.0, 180.0}));
    CHECK(is_valid({90.0, -180.0}));
    CHECK_FALSE(is_valid({90.0001, 0.0}));
    CHECK_FALSE(is_valid({0.0, -180.0001}));
    CHECK_FALSE(is_valid({std::nan(""), 0.0}));
    CHECK_FALSE(is_valid({0.0, std::numeric_limits<double>::infinity()}));
}

TEST_CASE("haversine identity and symmetry") {
    const GeoPoint a{10.762622, 106.660172};
    const GeoPoint b{10.823099, 106.629664};
    CHECK(haversine_km(a, a) == 0.0);
    CHECK(haversine_km(a, b) == haversine_km(b, a));
    CHECK(haversine_km(a, b) > 0.0);
}

TEST_CASE("haversine reference arcs") {
    // One degree of longitude along the equator subtends R*pi/180.
    CHECK(haversine_km({0.0, 0.0}, {0.0, 1.0}) ==
          doctest::Approx(111.19492664455873).epsilon(1e-12));
    // Pole to pole is half the great circle.
    CHECK(haversine_km({90.0, 0.0}, {-90.0, 0.0}) ==
          doctest::Approx(6371.0 * 3.14159265358979323846).epsilon(1e-12));
    // Antimeridian wrap: these two points are 2 degrees apart, not 358.
    CHECK(haversine_km({0.0, 179.0}, {0.0, -179.0}) ==
          doctest::Approx(2 * 111.19492664455873).epsilon(1e-9));
}

TEST_CASE("haversine rejects invalid points") {
    CHECK_THROWS_AS(haversine_km({91.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(haversine_km({0.0, 0.0}, {0.0, 181.0}), std::invalid_argument);
    CHECK_THROWS_AS(haversine_km({std::nan(""), 0.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("triangle inequality on random triples") {
    std::mt19937_64 rng(7);
    auto pt = [&rng]() {
        auto u = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
        return GeoPoint{-90.0 + 180.0 * u(), -180.0 + 360.0 * u()};
    };
    for (int it = 0; it < 200; ++it) {
        const GeoPoint a = pt(), b = pt(), c = pt();
        const double ab = haversine_km(a, b);
        const double bc = haversine_km(b, c);
        const double ac = haversine_km(a, c);
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("distance matrix masks by range") {
    const std::vector<GeoPoint> sites{{10.76, 106.66}, {10.90, 106.80}};
    const std::vector<GeoPoint> rps{{10.76, 106.67}, {10.70, 106.60}};
    const DistanceMatrix m = build_distance_matrix(rps, sites, 5.0);
    CHECK(m.rows == 2);
    CHECK(m.cols == 2);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(m(j, i) == haversine_km(rps[j], sites[i]));
            CHECK(m.reachable(j, i) == (m(j, i) <= 5.0));
        }
    // The first rp is ~1 km from the first site, so that pair must survive.
    CHECK(m.reachable(0, 0));
    // A larger radius can only add reachable pairs.
    const DistanceMatrix wide = build_distance_matrix(rps, sites, 50.0);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < 2; ++i)
            if (m.reachable(j, i)) CHECK(wide.reachable(j, i));
}

TEST_CASE("distance matrix input validation") {
    const std::vector<GeoPoint> one{{0.0, 0.0}};
    CHECK_THROWS_AS(build_distance_matrix({}, one, 5.0), EmptyInstanceError);
    CHECK_THROWS_AS(build_distance_matrix(one, {}, 5.0), EmptyInstanceError);
    CHECK_THROWS_AS(build_distance_matrix(one, one, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_distance_matrix(one, one, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_distance_matrix(one, one, std::nan("")), std::invalid_argument);
}
