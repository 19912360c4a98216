#pragma once

#include <string>
#include <vector>

#include "evplace/costmodel.hpp"
#include "evplace/entities.hpp"
#include "evplace/geo.hpp"

namespace evplace {

/// One solvable problem: entities, scenario constants, and the precomputed
/// range-masked distance matrix.
struct Instance {
    std::vector<CandidateSite> sites;
    std::vector<ResidentialPoint> rps;
    ScenarioParams params;
    DistanceMatrix dmat;

    long long total_vehicles() const;
};

/// Bundles the inputs and builds the distance matrix. Validates id
/// uniqueness and non-emptiness.
Instance make_instance(std::vector<CandidateSite> sites, std::vector<ResidentialPoint> rps,
                       ScenarioParams params);

CostBreakdown evaluate(const Decision& decision, const Instance& inst);

}  // namespace evplace
