#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "umssim/domain.hpp"
#include "umssim/rng.hpp"
#include "umssim/world.hpp"

namespace umssim {

/// Radius (Chebyshev) around the sender in which false target claims land.
inline constexpr int kClaimRadius = 10;

struct TargetClaim {
    UavId sender = 0;
    Position claimed_pos;
    int tick = 0;

    friend bool operator==(const TargetClaim&, const TargetClaim&) = default;
};

enum class AgentMode { Sweeping, Diverting, Verifying };

/// Inclusive row interval owned by one team member.
struct Band {
    int first_row = 0;
    int last_row = 0;

    int rows() const noexcept { return last_row - first_row + 1; }
    friend bool operator==(const Band&, const Band&) = default;
};

struct AgentState {
    UavSpec spec;
    Position pos;
    int battery_left = 0;
    AgentMode mode = AgentMode::Sweeping;
    std::optional<TargetClaim> claim;   // set while Diverting / Verifying
    std::deque<TargetClaim> pending;    // claims received while busy
    Band band;
    Position sweep_cursor;              // where the sweep resumes
    std::uint32_t claims_sent = 0;
    std::set<UavId> flags;              // senders found unreliable
    bool active = true;

    bool is_byzantine() const noexcept { return spec.behavior.is_byzantine(); }
};

inline AgentState make_agent(const UavSpec& spec, Band band) {
    AgentState a;
    a.spec = spec;
    a.band = band;
    a.pos = {band.first_row, 0};
    a.sweep_cursor = a.pos;
    a.battery_left = spec.battery;
    a.active = spec.battery > 0;
    return a;
}

enum class EventKind {
    Move,
    Sense,
    ClaimSent,
    ClaimRecv,
    Divert,
    VerifyFail,
    Flag,
    TargetFound,
    BatteryOut,
};

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Move: return "MOVE";
        case EventKind::Sense: return "SENSE";
        case EventKind::ClaimSent: return "CLAIM_SENT";
        case EventKind::ClaimRecv: return "CLAIM_RECV";
        case EventKind::Divert: return "DIVERT";
        case EventKind::VerifyFail: return "VERIFY_FAIL";
        case EventKind::Flag: return "FLAG";
        case EventKind::TargetFound: return "TARGET_FOUND";
        case EventKind::BatteryOut: return "BATTERY_OUT";
    }
    return "?";
}

struct Event {
    int tick = 0;
    UavId uav = 0;
    EventKind kind = EventKind::Move;
    std::string detail;

    friend bool operator==(const Event&, const Event&) = default;
};

inline std::string format_pos(Position p) {
    return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

/// Splits the rows into `team_count` contiguous bands, top to bottom. Band
/// sizes differ by at most one; the larger bands come first.
inline std::vector<Band> assign_bands(std::size_t team_count, GridSize s) {
    if (team_count < 1) throw std::invalid_argument("team must not be empty");
    if (team_count > static_cast<std::size_t>(s.rows))
        throw std::invalid_argument("more UAVs than grid rows");
    const int k = static_cast<int>(team_count);
    const int base = s.rows / k;
    const int extra = s.rows % k;
    std::vector<Band> bands;
    bands.reserve(team_count);
    int row = 0;
    for (int i = 0; i < k; ++i) {
        const int height = base + (i < extra ? 1 : 0);
        bands.push_back({row, row + height - 1});
        row += height;
    }
    return bands;
}

/// Next raster cell of the west-to-east sweep from the agent's position.
/// At the east edge the sweep continues at the west edge of the next line;
/// on the last cell of the band the position is held.
inline Position plan_sweep_step(const AgentState& a, int cols) {
    const Position p = a.pos;
    if (p.col < cols - 1) return {p.row, p.col + 1};
    if (p.row < a.band.last_row) return {p.row + 1, 0};
    return p;
}

inline bool sense(const AgentState& a, const GridWorld& g) {
    return chebyshev(a.pos, g.target()) <= a.spec.sensor_range;
}

/// Bernoulli(claim_rate) per call while under the claim cap. The claimed
/// cell is uniform over the radius-10 Chebyshev ball clipped to the grid.
template <class Rng>
std::optional<TargetClaim> maybe_emit_false_claim(AgentState& a, const GridWorld& g, int tick,
                                                  Rng& rng) {
    if (!a.is_byzantine() || !a.active) return std::nullopt;
    if (a.claims_sent >= a.spec.behavior.max_claims) return std::nullopt;
    if (!bernoulli(rng, a.spec.behavior.claim_rate)) return std::nullopt;

    const GridSize s = g.size();
    const int r0 = std::max(0, a.pos.row - kClaimRadius);
    const int r1 = std::min(s.rows - 1, a.pos.row + kClaimRadius);
    const int c0 = std::max(0, a.pos.col - kClaimRadius);
    const int c1 = std::min(s.cols - 1, a.pos.col + kClaimRadius);
    const auto width = static_cast<std::uint64_t>(c1 - c0 + 1);
    const auto cells = static_cast<std::uint64_t>(r1 - r0 + 1) * width;
    const std::uint64_t pick = uniform_below(rng, cells);

    ++a.claims_sent;
    return TargetClaim{a.spec.id,
                       {r0 + static_cast<int>(pick / width), c0 + static_cast<int>(pick % width)},
                       tick};
}

/// Cooperative agents divert to the claimed cell, or queue the claim while
/// already busy with another one. Returns true when the agent diverted.
inline bool handle_claim(AgentState& a, const TargetClaim& claim) {
    if (a.is_byzantine() || !a.active) return false;
    if (claim.sender == a.spec.id || a.flags.contains(claim.sender)) return false;
    if (a.mode != AgentMode::Sweeping) {
        a.pending.push_back(claim);
        return false;
    }
    a.mode = AgentMode::Diverting;
    a.claim = claim;
    return true;
}

enum class VerifyOutcome { TargetFound, SenderFlagged };

/// Checks the claimed location. A miss flags the sender and sends the agent
/// back to its saved sweep cursor.
inline VerifyOutcome verify_claim(AgentState& a, const TargetClaim& claim, const GridWorld& g) {
    if (sense(a, g)) return VerifyOutcome::TargetFound;
    a.flags.insert(claim.sender);
    a.mode = AgentMode::Sweeping;
    a.claim.reset();
    return VerifyOutcome::SenderFlagged;
}

struct TickOutcome {
    bool target_found = false;
    std::vector<TargetClaim> emitted;
};

namespace detail {

inline Position step_toward(Position from, Position to) {
    if (from.row != to.row) return {from.row + (to.row > from.row ? 1 : -1), from.col};
    if (from.col != to.col) return {from.row, from.col + (to.col > from.col ? 1 : -1)};
    return from;
}

// Picks up the next queued claim whose sender is still trusted.
inline bool resume_pending(AgentState& a) {
    while (!a.pending.empty()) {
        TargetClaim next = a.pending.front();
        a.pending.pop_front();
        if (a.flags.contains(next.sender)) continue;
        a.mode = AgentMode::Diverting;
        a.claim = next;
        return true;
    }
    return false;
}

}  // namespace detail

/// Sensing at the deployment position before the first tick.
inline bool deploy_sense(const AgentState& a, const GridWorld& g, std::vector<Event>& events) {
    const bool hit = sense(a, g);
    events.push_back({0, a.spec.id, EventKind::Sense,
                      "pos=" + format_pos(a.pos) + " hit=" + (hit ? "1" : "0")});
    if (hit && !a.is_byzantine()) {
        events.push_back({0, a.spec.id, EventKind::TargetFound, "pos=" + format_pos(g.target())});
        return true;
    }
    return false;
}

/// One tick of a single agent: inbox handling, up to `speed` sub-steps with
/// sensing after each, one claim draw for Byzantine agents, and battery use.
template <class Rng>
TickOutcome tick_agent(AgentState& a, const GridWorld& g, const std::vector<TargetClaim>& inbox,
                       int tick, Rng& claim_rng, std::vector<Event>& events) {
    TickOutcome out;
    if (!a.active) return out;
    const UavId self = a.spec.id;
    const bool cooperative = !a.is_byzantine();
    const int cols = g.size().cols;

    for (const auto& claim : inbox) {
        if (claim.sender == self) continue;
        std::string detail = "from=" + std::to_string(claim.sender) +
                             " pos=" + format_pos(claim.claimed_pos);
        if (cooperative && a.flags.contains(claim.sender)) detail += " ignored=flagged";
        events.push_back({tick, self, EventKind::ClaimRecv, std::move(detail)});
        if (handle_claim(a, claim))
            events.push_back({tick, self, EventKind::Divert, "to=" + format_pos(claim.claimed_pos)});
    }

    int moves_left = a.spec.speed;
    while (true) {
        if (a.mode == AgentMode::Diverting && a.claim &&
            chebyshev(a.pos, a.claim->claimed_pos) <= a.spec.sensor_range) {
            a.mode = AgentMode::Verifying;
            const TargetClaim claim = *a.claim;
            if (verify_claim(a, claim, g) == VerifyOutcome::TargetFound) {
                events.push_back({tick, self, EventKind::TargetFound, "pos=" + format_pos(g.target())});
                out.target_found = true;
                break;
            }
            events.push_back({tick, self, EventKind::VerifyFail,
                              "sender=" + std::to_string(claim.sender) +
                                  " pos=" + format_pos(claim.claimed_pos)});
            events.push_back({tick, self, EventKind::Flag, "sender=" + std::to_string(claim.sender)});
            if (detail::resume_pending(a))
                events.push_back({tick, self, EventKind::Divert, "to=" + format_pos(a.claim->claimed_pos)});
            continue;
        }
        if (moves_left == 0) break;

        Position next;
        if (a.mode == AgentMode::Diverting && a.claim) {
            next = detail::step_toward(a.pos, a.claim->claimed_pos);
        } else if (a.pos != a.sweep_cursor) {
            next = detail::step_toward(a.pos, a.sweep_cursor);
        } else {
            next = plan_sweep_step(a, cols);
            if (next == a.pos) break;  // band complete
            a.sweep_cursor = next;
        }
        a.pos = next;
        --moves_left;
        events.push_back({tick, self, EventKind::Move, "pos=" + format_pos(a.pos)});

        const bool hit = sense(a, g);
        events.push_back({tick, self, EventKind::Sense,
                          "pos=" + format_pos(a.pos) + " hit=" + (hit ? "1" : "0")});
        if (hit && cooperative) {
            events.push_back({tick, self, EventKind::TargetFound, "pos=" + format_pos(g.target())});
            out.target_found = true;
            break;
        }
    }

    if (!cooperative) {
        if (auto claim = maybe_emit_false_claim(a, g, tick, claim_rng)) {
            events.push_back({tick, self, EventKind::ClaimSent, "pos=" + format_pos(claim->claimed_pos)});
            out.emitted.push_back(*claim);
        }
    }

    --a.battery_left;
    if (a.battery_left <= 0) {
        a.battery_left = 0;
        a.active = false;
        events.push_back({tick, self, EventKind::BatteryOut, ""});
    }
    return out;
}

}  // namespace umssim
