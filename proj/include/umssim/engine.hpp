#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "umssim/agents.hpp"
#include "umssim/domain.hpp"
#include "umssim/reputation.hpp"
#include "umssim/rng.hpp"
#include "umssim/world.hpp"

namespace umssim {

enum class MissionOutcome { TargetFound, FireReachedTarget, BatteryExhausted, TickLimit };

inline const char* to_string(MissionOutcome o) {
    switch (o) {
        case MissionOutcome::TargetFound: return "TargetFound";
        case MissionOutcome::FireReachedTarget: return "FireReachedTarget";
        case MissionOutcome::BatteryExhausted: return "BatteryExhausted";
        case MissionOutcome::TickLimit: return "TickLimit";
    }
    return "?";
}

struct MissionRecord {
    std::string mission_id;
    int completion_ticks = 0;
    int max_ticks = 0;
    MissionOutcome outcome = MissionOutcome::TickLimit;
    /// Team order. True when the UAV sent a false claim or colluded in feedback.
    std::vector<std::pair<UavId, bool>> adversarial;
    std::vector<Event> events;
    std::vector<AgentState> final_agents;
    std::uint64_t grid_hash = 0;
};

struct EpisodeResult {
    int cycle = 0;
    int episode = 0;
    std::string strategy;
    std::string marketplace;
    double byzantine_pct = 0.0;  // 0..100
    std::vector<UavId> team;
    std::vector<std::pair<UavId, double>> reputation_before;
    std::vector<std::pair<UavId, double>> reputation_after;
    MissionRecord mission;
    std::vector<FeedbackReport> feedback;
};

/// Seed of the per-UAV false-claim stream. Derived from the environment seed
/// so every strategy in a cycle faces the same attack timing.
inline std::uint64_t claim_stream_seed(std::uint64_t env_seed, UavId id) {
    return derive_seed(env_seed, 0, id, SeedPurpose::Claims);
}

inline int max_ticks_for(const MissionTemplate& mission, int max_ticks_factor) {
    return max_ticks_factor * mission.area.rows * mission.area.cols;
}

/// Runs one mission with the given team to termination.
///
/// Tick 0 is deployment (agents sense where they start). Each following tick
/// delivers the previous tick's claims, advances every active agent in
/// marketplace order, spreads the fire and then checks, in priority order:
/// target found by a cooperative agent, fire at the target, all cooperative
/// agents out of battery. Reaching max_ticks ends the mission as TickLimit.
inline MissionRecord run_mission(const Marketplace& m, const MissionTemplate& mission,
                                 std::span<const UavId> team, std::uint64_t env_seed,
                                 int max_ticks_factor = 4) {
    if (auto report = validate_mission(mission, m); !report.ok())
        throw std::invalid_argument(report.violations.front().message);
    if (team.size() != static_cast<std::size_t>(mission.team_size))
        throw std::invalid_argument("team size does not match mission '" + mission.id + "'");
    if (max_ticks_factor < 1) throw std::invalid_argument("max_ticks_factor must be >= 1");

    std::vector<std::size_t> members;
    for (UavId id : team) {
        auto idx = m.index_of(id);
        if (!idx) throw std::invalid_argument("team member " + std::to_string(id) + " not in marketplace");
        if (std::find(members.begin(), members.end(), *idx) != members.end())
            throw std::invalid_argument("duplicate team member " + std::to_string(id));
        members.push_back(*idx);
    }
    std::sort(members.begin(), members.end());

    GridWorld grid = generate_grid(mission.area, mission.forest_density, mission.target, mission.fire_start,
                                   env_seed, mission.spread_period);

    MissionRecord rec;
    rec.mission_id = mission.id;
    rec.grid_hash = grid.hash();
    rec.max_ticks = max_ticks_for(mission, max_ticks_factor);

    const auto bands = assign_bands(members.size(), mission.area);
    std::vector<AgentState> agents;
    std::vector<SplitMix64> claim_rngs;
    for (std::size_t k = 0; k < members.size(); ++k) {
        const UavSpec& spec = m.uavs[members[k]];
        agents.push_back(make_agent(spec, bands[k]));
        claim_rngs.emplace_back(claim_stream_seed(env_seed, spec.id));
    }

    auto finish = [&](MissionOutcome outcome, int tick) {
        rec.outcome = outcome;
        rec.completion_ticks = tick;
        for (const auto& a : agents) rec.adversarial.emplace_back(a.spec.id, a.claims_sent > 0);
        rec.final_agents = agents;
        return rec;
    };

    bool found = false;
    for (const auto& a : agents) found = deploy_sense(a, grid, rec.events) || found;
    if (found) return finish(MissionOutcome::TargetFound, 0);

    std::vector<TargetClaim> in_flight;
    for (int tick = 1; tick <= rec.max_ticks; ++tick) {
        std::vector<TargetClaim> emitted;
        for (std::size_t k = 0; k < agents.size(); ++k) {
            auto out = tick_agent(agents[k], grid, in_flight, tick, claim_rngs[k], rec.events);
            found = found || out.target_found;
            emitted.insert(emitted.end(), out.emitted.begin(), out.emitted.end());
        }
        in_flight = std::move(emitted);
        step_fire(grid, tick);

        if (found) return finish(MissionOutcome::TargetFound, tick);
        if (fire_reached_target(grid)) return finish(MissionOutcome::FireReachedTarget, tick);
        const bool cooperative_active = std::any_of(agents.begin(), agents.end(), [](const AgentState& a) {
            return !a.is_byzantine() && a.active;
        });
        if (!cooperative_active) return finish(MissionOutcome::BatteryExhausted, tick);
    }
    return finish(MissionOutcome::TickLimit, rec.max_ticks);
}

namespace detail {

inline std::vector<std::pair<UavId, double>> team_scores(const Marketplace& m, std::span<const UavId> team,
                                                         const std::vector<double>& scores) {
    std::vector<std::pair<UavId, double>> out;
    for (UavId id : team) out.emplace_back(id, scores[*m.index_of(id)]);
    return out;
}

}  // namespace detail

/// Select a team, fly the mission, collect feedback from every member and
/// fold it into the strategy's trust state.
inline EpisodeResult run_episode(const TeamFormationStrategy& strategy, const Marketplace& m,
                                 const MissionTemplate& mission, TrustState& state, std::uint64_t env_seed,
                                 std::uint64_t sim_seed, int max_ticks_factor = 4, int cycle = 0,
                                 int episode = 0) {
    if (state.strategy_name != strategy.name())
        throw std::invalid_argument("trust state '" + state.strategy_name + "' does not belong to strategy '" +
                                    strategy.name() + "'");
    EpisodeResult res;
    res.cycle = cycle;
    res.episode = episode;
    res.strategy = strategy.name();
    res.marketplace = m.name;
    res.byzantine_pct = 100.0 * byzantine_fraction(m);

    SplitMix64 rng(sim_seed);
    res.team = strategy.select(m, state, static_cast<std::size_t>(mission.team_size), rng);
    res.reputation_before = detail::team_scores(m, res.team, strategy.scores(state));

    res.mission = run_mission(m, mission, res.team, env_seed, max_ticks_factor);

    const auto& agents = res.mission.final_agents;
    for (const auto& rater : agents) {
        auto reports = generate_feedback(rater, agents, mission);
        if (rater.is_byzantine() && !reports.empty()) {
            for (auto& [id, flag] : res.mission.adversarial)
                if (id == rater.spec.id) flag = true;
        }
        res.feedback.insert(res.feedback.end(), reports.begin(), reports.end());
    }
    apply_feedback(state, m, res.feedback);
    res.reputation_after = detail::team_scores(m, res.team, strategy.scores(state));
    return res;
}

/// Runs `cycles` passes of every configured strategy. Within a cycle all
/// strategies share one environment seed; with constancy every cycle reuses
/// the cycle-0 seed. Trust states persist across cycles per strategy.
inline std::vector<EpisodeResult> run_cycles(const SimConfig& config, const Marketplace& m,
                                             const MissionTemplate& mission,
                                             const StrategyRegistry& registry = StrategyRegistry::builtin()) {
    ValidationReport report = validate_sim_config(config, registry.names());
    report.append(validate_marketplace(m));
    report.append(validate_mission(mission, m));
    if (!report.ok()) throw std::invalid_argument(report.violations.front().message);

    std::vector<std::unique_ptr<TeamFormationStrategy>> strategies;
    std::vector<TrustState> states;
    for (const auto& name : config.strategies) {
        strategies.push_back(registry.create(name, config.eigentrust));
        states.emplace_back(strategies.back()->name(), m.size());
    }

    std::vector<EpisodeResult> results;
    results.reserve(static_cast<std::size_t>(config.cycles) * strategies.size());
    for (int k = 0; k < config.cycles; ++k) {
        const std::uint64_t env_cycle = config.constancy ? 0 : static_cast<std::uint64_t>(k);
        const std::uint64_t env_seed = derive_seed(config.master_seed, env_cycle, 0, SeedPurpose::Environment);
        for (std::size_t j = 0; j < strategies.size(); ++j) {
            const std::uint64_t sim_seed =
                derive_seed(config.master_seed, static_cast<std::uint64_t>(k), j, SeedPurpose::Simulation);
            results.push_back(run_episode(*strategies[j], m, mission, states[j], env_seed, sim_seed,
                                          config.max_ticks_factor, k, static_cast<int>(j)));
        }
    }
    return results;
}

}  // namespace umssim
