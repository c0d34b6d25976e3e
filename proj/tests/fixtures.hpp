#pragma once

#include <string>
#include <vector>

#include "umssim/domain.hpp"

namespace umssim::testing {

inline UavSpec coop(UavId id, int speed = 1, int sensor_range = 0, int battery = 1000) {
    return {id, speed, sensor_range, battery, BehaviorProfile::cooperative()};
}

inline UavSpec byz(UavId id, double claim_rate = 0.0, std::uint32_t max_claims = 3, int speed = 1,
                   int sensor_range = 0, int battery = 1000) {
    return {id, speed, sensor_range, battery, BehaviorProfile::byzantine(claim_rate, max_claims)};
}

inline Marketplace market(std::vector<UavSpec> uavs, std::string name = "m") {
    return {std::move(name), std::move(uavs)};
}

inline MissionTemplate mission(int n, GridSize area, Position fire, Position target, double density = 0.0,
                               int period = 1, bool collaboration = true) {
    return {"mission", n, density, period, fire, area, target, collaboration};
}

}  // namespace umssim::testing
