#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "umssim/domain.hpp"
#include "umssim/rng.hpp"

namespace umssim {

enum class CellState : std::uint8_t { Empty = 0, Forest = 1, Burning = 2 };

inline int chebyshev(Position a, Position b) noexcept {
    return std::max(std::abs(a.row - b.row), std::abs(a.col - b.col));
}

inline int manhattan(Position a, Position b) noexcept {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

class GridWorld {
public:
    GridWorld(GridSize size, Position target, Position fire_origin, int spread_period)
        : size_(size),
          cells_(size.cell_count(), CellState::Empty),
          target_(target),
          fire_origin_(fire_origin),
          spread_period_(spread_period) {
        if (size.rows < 1 || size.cols < 1) throw std::invalid_argument("grid must be at least 1x1");
        if (!size.contains(target)) throw std::invalid_argument("target outside grid");
        if (!size.contains(fire_origin)) throw std::invalid_argument("fire origin outside grid");
        if (target == fire_origin) throw std::invalid_argument("target inside fire origin");
        if (spread_period < 1) throw std::invalid_argument("spread period must be >= 1");
        at(fire_origin) = CellState::Burning;
    }

    GridSize size() const noexcept { return size_; }
    Position target() const noexcept { return target_; }
    Position fire_origin() const noexcept { return fire_origin_; }
    int spread_period() const noexcept { return spread_period_; }

    CellState at(Position p) const { return cells_[index(p)]; }
    CellState& at(Position p) { return cells_[index(p)]; }

    const std::vector<CellState>& cells() const noexcept { return cells_; }

    std::size_t count(CellState s) const {
        std::size_t n = 0;
        for (auto c : cells_) n += (c == s);
        return n;
    }

    /// FNV-1a over dimensions, target, origin and cell states.
    std::uint64_t hash() const {
        std::uint64_t h = 0xCBF29CE484222325ull;
        auto mix = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (8 * i)) & 0xFFu;
                h *= 0x100000001B3ull;
            }
        };
        mix(static_cast<std::uint64_t>(size_.rows));
        mix(static_cast<std::uint64_t>(size_.cols));
        mix(static_cast<std::uint64_t>(target_.row));
        mix(static_cast<std::uint64_t>(target_.col));
        mix(static_cast<std::uint64_t>(fire_origin_.row));
        mix(static_cast<std::uint64_t>(fire_origin_.col));
        mix(static_cast<std::uint64_t>(spread_period_));
        for (auto c : cells_) {
            h ^= static_cast<std::uint8_t>(c);
            h *= 0x100000001B3ull;
        }
        return h;
    }

    friend bool operator==(const GridWorld&, const GridWorld&) = default;

private:
    std::size_t index(Position p) const {
        if (!size_.contains(p)) throw std::out_of_range("position outside grid");
        return static_cast<std::size_t>(p.row) * static_cast<std::size_t>(size_.cols) +
               static_cast<std::size_t>(p.col);
    }

    GridSize size_;
    std::vector<CellState> cells_;
    Position target_;
    Position fire_origin_;
    int spread_period_;
};

/// Samples one SplitMix64 draw per cell in row-major order (the fire origin's
/// draw is consumed and discarded). A cell is Forest when the draw, mapped to
/// [0,1), falls below the density.
inline GridWorld generate_grid(GridSize size, double density, Position target, Position fire_origin,
                               std::uint64_t seed, int spread_period = 1) {
    if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("density out of [0,1]");
    GridWorld g(size, target, fire_origin, spread_period);
    SplitMix64 rng(seed);
    for (int r = 0; r < size.rows; ++r) {
        for (int c = 0; c < size.cols; ++c) {
            const bool forest = uniform_unit(rng) < density;
            const Position p{r, c};
            if (p == fire_origin) continue;
            g.at(p) = forest ? CellState::Forest : CellState::Empty;
        }
    }
    return g;
}

/// Advances the fire for `tick`. On multiples of the spread period every
/// Forest cell 4-adjacent to a Burning cell ignites, synchronously.
inline void step_fire(GridWorld& g, int tick) {
    if (tick < 1 || tick % g.spread_period() != 0) return;
    const GridSize s = g.size();
    std::vector<Position> ignite;
    for (int r = 0; r < s.rows; ++r) {
        for (int c = 0; c < s.cols; ++c) {
            const Position p{r, c};
            if (g.at(p) != CellState::Forest) continue;
            constexpr int dr[] = {-1, 1, 0, 0};
            constexpr int dc[] = {0, 0, -1, 1};
            for (int k = 0; k < 4; ++k) {
                const Position q{r + dr[k], c + dc[k]};
                if (s.contains(q) && g.at(q) == CellState::Burning) {
                    ignite.push_back(p);
                    break;
                }
            }
        }
    }
    for (auto p : ignite) g.at(p) = CellState::Burning;
}

inline GridWorld stepped_fire(GridWorld g, int tick) {
    step_fire(g, tick);
    return g;
}

inline bool fire_reached_target(const GridWorld& g) {
    return g.at(g.target()) == CellState::Burning;
}

}  // namespace umssim
