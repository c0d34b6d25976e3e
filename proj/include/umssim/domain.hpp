#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace umssim {

using UavId = std::uint32_t;

struct Position {
    int row = 0;
    int col = 0;

    friend bool operator==(const Position&, const Position&) = default;
    friend auto operator<=>(const Position&, const Position&) = default;
};

struct GridSize {
    int rows = 1;
    int cols = 1;

    bool contains(Position p) const noexcept {
        return p.row >= 0 && p.row < rows && p.col >= 0 && p.col < cols;
    }
    std::size_t cell_count() const noexcept {
        return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    }

    friend bool operator==(const GridSize&, const GridSize&) = default;
};

enum class BehaviorKind { Cooperative, Byzantine };

/// Adversary parameters only carry meaning for Byzantine profiles; a
/// cooperative profile keeps both at zero.
struct BehaviorProfile {
    BehaviorKind kind = BehaviorKind::Cooperative;
    double claim_rate = 0.0;
    std::uint32_t max_claims = 0;

    static constexpr double kDefaultClaimRate = 0.01;
    static constexpr std::uint32_t kDefaultMaxClaims = 3;

    static BehaviorProfile cooperative() { return {}; }
    static BehaviorProfile byzantine(double claim_rate = kDefaultClaimRate,
                                     std::uint32_t max_claims = kDefaultMaxClaims) {
        return {BehaviorKind::Byzantine, claim_rate, max_claims};
    }

    bool is_byzantine() const noexcept { return kind == BehaviorKind::Byzantine; }

    friend bool operator==(const BehaviorProfile&, const BehaviorProfile&) = default;
};

struct UavSpec {
    UavId id = 0;
    int speed = 1;         // cells per tick
    int sensor_range = 0;  // Chebyshev radius
    int battery = 1;       // ticks of activity
    BehaviorProfile behavior;

    friend bool operator==(const UavSpec&, const UavSpec&) = default;
};

struct Marketplace {
    std::string name;
    std::vector<UavSpec> uavs;

    std::optional<std::size_t> index_of(UavId id) const {
        for (std::size_t i = 0; i < uavs.size(); ++i)
            if (uavs[i].id == id) return i;
        return std::nullopt;
    }

    const UavSpec& at(UavId id) const {
        auto idx = index_of(id);
        if (!idx) throw std::out_of_range("unknown UAV id " + std::to_string(id));
        return uavs[*idx];
    }

    std::size_t size() const noexcept { return uavs.size(); }

    friend bool operator==(const Marketplace&, const Marketplace&) = default;
};

/// One mission: team size, forest density, fire spread period, fire origin,
/// area, target position and whether Byzantine members coordinate.
struct MissionTemplate {
    std::string id;
    int team_size = 1;
    double forest_density = 0.0;
    int spread_period = 1;
    Position fire_start;
    GridSize area;
    Position target;
    bool byzantine_collaboration = true;

    friend bool operator==(const MissionTemplate&, const MissionTemplate&) = default;
};

struct EigenTrustParams {
    double alpha = 0.1;
    double epsilon = 1e-6;
    int max_iter = 100;

    friend bool operator==(const EigenTrustParams&, const EigenTrustParams&) = default;
};

struct SimConfig {
    int cycles = 1;
    bool constancy = false;
    std::uint64_t master_seed = 0;
    std::vector<std::string> strategies;
    std::string marketplace_ref;
    std::string mission_ref;
    EigenTrustParams eigentrust;
    int max_ticks_factor = 4;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationCode {
    EmptyMarketplace,
    DuplicateId,
    InvalidSpeed,
    InvalidBattery,
    InvalidSensorRange,
    InvalidClaimRate,
    CooperativeAttackParams,
    TeamTooSmall,
    TeamLargerThanMarketplace,
    TeamLargerThanRows,
    InvalidArea,
    FireStartOutOfBounds,
    TargetOutOfBounds,
    TargetInsideFireOrigin,
    DensityOutOfRange,
    InvalidSpreadPeriod,
    InvalidCycles,
    NoStrategies,
    DuplicateStrategy,
    UnknownStrategy,
    InvalidEigenTrust,
    InvalidMaxTicksFactor,
};

struct Violation {
    ViolationCode code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    bool has(ViolationCode code) const {
        return std::any_of(violations.begin(), violations.end(),
                           [code](const Violation& v) { return v.code == code; });
    }
    void add(ViolationCode code, std::string message) {
        violations.push_back({code, std::move(message)});
    }
    void append(const ValidationReport& other) {
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    }
};

inline ValidationReport validate_marketplace(const Marketplace& m) {
    ValidationReport report;
    const std::string where = "marketplace '" + m.name + "'";
    if (m.uavs.empty()) report.add(ViolationCode::EmptyMarketplace, where + ": has no UAVs");

    std::set<UavId> seen;
    for (const auto& u : m.uavs) {
        const std::string uav = where + " uav " + std::to_string(u.id);
        if (!seen.insert(u.id).second)
            report.add(ViolationCode::DuplicateId, uav + ": duplicate id");
        if (u.speed < 1) report.add(ViolationCode::InvalidSpeed, uav + ": speed must be >= 1");
        if (u.battery < 1)
            report.add(ViolationCode::InvalidBattery, uav + ": battery must be >= 1");
        if (u.sensor_range < 0)
            report.add(ViolationCode::InvalidSensorRange, uav + ": sensor_range must be >= 0");
        if (!(u.behavior.claim_rate >= 0.0 && u.behavior.claim_rate <= 1.0))
            report.add(ViolationCode::InvalidClaimRate, uav + ": claim_rate out of [0,1]");
        if (!u.behavior.is_byzantine() &&
            (u.behavior.claim_rate != 0.0 || u.behavior.max_claims != 0))
            report.add(ViolationCode::CooperativeAttackParams,
                       uav + ": cooperative UAV carries attack parameters");
    }
    return report;
}

inline ValidationReport validate_mission(const MissionTemplate& t, const Marketplace& m) {
    ValidationReport report;
    const std::string where = "mission '" + t.id + "'";
    if (t.team_size < 1) report.add(ViolationCode::TeamTooSmall, where + ": team size must be >= 1");
    if (t.team_size > static_cast<int>(m.size()))
        report.add(ViolationCode::TeamLargerThanMarketplace,
                   where + ": team larger than marketplace '" + m.name + "'");
    const bool area_ok = t.area.rows >= 1 && t.area.cols >= 1;
    if (!area_ok) report.add(ViolationCode::InvalidArea, where + ": area must be at least 1x1");
    if (area_ok && t.team_size > t.area.rows)
        report.add(ViolationCode::TeamLargerThanRows, where + ": more UAVs than grid rows");
    if (!t.area.contains(t.fire_start))
        report.add(ViolationCode::FireStartOutOfBounds, where + ": fire start outside area");
    if (!t.area.contains(t.target))
        report.add(ViolationCode::TargetOutOfBounds, where + ": target outside area");
    if (t.target == t.fire_start)
        report.add(ViolationCode::TargetInsideFireOrigin, where + ": target inside fire origin");
    if (!(t.forest_density >= 0.0 && t.forest_density <= 1.0))
        report.add(ViolationCode::DensityOutOfRange, where + ": density out of [0,1]");
    if (t.spread_period < 1)
        report.add(ViolationCode::InvalidSpreadPeriod, where + ": fire spread period must be >= 1");
    return report;
}

/// Structural checks on the simulation block. Strategy names are checked
/// against `known_strategies` when it is non-empty.
inline ValidationReport validate_sim_config(const SimConfig& c,
                                            const std::vector<std::string>& known_strategies = {}) {
    ValidationReport report;
    if (c.cycles < 1) report.add(ViolationCode::InvalidCycles, "simulation: cycles must be >= 1");
    if (c.strategies.empty())
        report.add(ViolationCode::NoStrategies, "simulation: at least one strategy is required");
    std::set<std::string> seen;
    for (const auto& s : c.strategies) {
        if (!seen.insert(s).second)
            report.add(ViolationCode::DuplicateStrategy, "simulation: duplicate strategy '" + s + "'");
        if (!known_strategies.empty() &&
            std::find(known_strategies.begin(), known_strategies.end(), s) == known_strategies.end())
            report.add(ViolationCode::UnknownStrategy, "simulation: unknown strategy '" + s + "'");
    }
    const auto& et = c.eigentrust;
    if (!(et.alpha > 0.0 && et.alpha <= 1.0))
        report.add(ViolationCode::InvalidEigenTrust, "simulation: eigentrust alpha must be in (0,1]");
    if (!(et.epsilon > 0.0))
        report.add(ViolationCode::InvalidEigenTrust, "simulation: eigentrust epsilon must be > 0");
    if (et.max_iter < 1)
        report.add(ViolationCode::InvalidEigenTrust, "simulation: eigentrust max_iter must be >= 1");
    if (c.max_ticks_factor < 1)
        report.add(ViolationCode::InvalidMaxTicksFactor, "simulation: max_ticks_factor must be >= 1");
    return report;
}

inline double byzantine_fraction(const Marketplace& m) {
    if (m.uavs.empty()) return 0.0;
    const auto byz = std::count_if(m.uavs.begin(), m.uavs.end(),
                                   [](const UavSpec& u) { return u.behavior.is_byzantine(); });
    return static_cast<double>(byz) / static_cast<double>(m.uavs.size());
}

enum class Difficulty { Easy, Medium, Hard };

/// Easy below 20% Byzantine, Hard above 40%. Labels are informational.
inline Difficulty difficulty_label(double fraction) {
    if (fraction < 0.2) return Difficulty::Easy;
    if (fraction <= 0.4) return Difficulty::Medium;
    return Difficulty::Hard;
}

inline const char* to_string(Difficulty d) {
    switch (d) {
        case Difficulty::Easy: return "Easy";
        case Difficulty::Medium: return "Medium";
        case Difficulty::Hard: return "Hard";
    }
    return "?";
}

}  // namespace umssim
