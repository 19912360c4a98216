#include "evplace/instance.hpp"

#include <set>

#include "evplace/errors.hpp"

namespace evplace {

UnreachableDemandError::UnreachableDemandError(std::vector<std::string> ids)
    : std::runtime_error([&ids] {
          std::string msg = "no candidate site within range of ";
          msg += std::to_string(ids.size());
          msg += ids.size() == 1 ? " residential point:" : " residential points:";
          for (const auto& id : ids) {
              msg += ' ';
              msg += id;
          }
          return msg;
      }()),
      rp_ids(std::move(ids)) {}

long long Instance::total_vehicles() const {
    long long total = 0;
    for (const auto& rp : rps) total += rp.vehicles;
    return total;
}

Instance make_instance(std::vector<CandidateSite> sites, std::vector<ResidentialPoint> rps,
                       ScenarioParams params) {
    if (sites.empty()) throw EmptyInstanceError("make_instance: no candidate sites");
    if (rps.empty()) throw EmptyInstanceError("make_instance: no residential points");

    std::set<std::string> ids;
    std::string dups;
    for (const auto& s : sites) {
        if (!ids.insert("S:" + s.id).second) dups += " site '" + s.id + "'";
    }
    for (const auto& r : rps) {
        if (!ids.insert("R:" + r.id).second) dups += " residential point '" + r.id + "'";
    }
    if (!dups.empty()) throw SchemaError("make_instance: duplicate ids:" + dups);

    Instance inst;
    inst.dmat = build_distance_matrix(rps, sites, params.d_max);
    inst.sites = std::move(sites);
    inst.rps = std::move(rps);
    inst.params = std::move(params);
    return inst;
}

CostBreakdown evaluate(const Decision& decision, const Instance& inst) {
    return evaluate(decision, inst.sites, inst.rps, inst.dmat, inst.params);
}

}  // namespace evplace
