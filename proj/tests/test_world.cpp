#include "umssim/world.hpp"

#include "oracles.hpp"

#include "gtest/gtest.h"

using namespace umssim;

namespace {

GridWorld full_forest(GridSize s, Position fire, Position target, int period) {
    return generate_grid(s, 1.0, target, fire, 7, period);
}

}  // namespace

TEST(World, Chebyshev)
{
    EXPECT_EQ(chebyshev({0, 0}, {0, 0}), 0);
    EXPECT_EQ(chebyshev({2, 3}, {5, 3}), 3);
    EXPECT_EQ(chebyshev({1, 1}, {4, 5}), 4);
}

TEST(World, ZeroDensityHasNoForest)
{
    auto g = generate_grid({8, 9}, 0.0, {7, 8}, {3, 3}, 99);
    EXPECT_EQ(g.count(CellState::Forest), 0u);
    EXPECT_EQ(g.count(CellState::Burning), 1u);
    EXPECT_EQ(g.at({3, 3}), CellState::Burning);
}

TEST(World, FullDensityForestsEverythingButOrigin)
{
    auto g = generate_grid({8, 9}, 1.0, {7, 8}, {3, 3}, 99);
    EXPECT_EQ(g.count(CellState::Forest), 8u * 9u - 1u);
    EXPECT_EQ(g.at({3, 3}), CellState::Burning);
}

TEST(World, HalfDensityMatchesReferenceStream)
{
    const GridSize s{20, 20};
    const Position origin{4, 11};
    const std::uint64_t seed = 0xC0FFEE;
    auto g = generate_grid(s, 0.5, {19, 0}, origin, seed);
    const auto expected = oracle::forest_layout(20, 20, 0.5, origin, seed);
    std::size_t forest = 0;
    for (int r = 0; r < 20; ++r)
        for (int c = 0; c < 20; ++c) {
            const Position p{r, c};
            if (p == origin) continue;
            EXPECT_EQ(g.at(p) == CellState::Forest, expected[static_cast<std::size_t>(r * 20 + c)]);
            forest += g.at(p) == CellState::Forest;
        }
    const double fraction = static_cast<double>(forest) / 400.0;
    EXPECT_GE(fraction, 0.35);
    EXPECT_LE(fraction, 0.65);
    EXPECT_EQ(g, generate_grid(s, 0.5, {19, 0}, origin, seed));
}

TEST(World, InvalidPositionsThrow)
{
    EXPECT_THROW(generate_grid({5, 5}, 0.5, {5, 0}, {0, 0}, 1), std::invalid_argument);
    EXPECT_THROW(generate_grid({5, 5}, 0.5, {1, 1}, {1, 1}, 1), std::invalid_argument);
    EXPECT_THROW(generate_grid({5, 5}, 1.5, {1, 1}, {0, 0}, 1), std::invalid_argument);
}

TEST(World, OneSynchronousFrontStep)
{
    auto g = full_forest({5, 5}, {2, 2}, {0, 0}, 1);
    step_fire(g, 1);
    EXPECT_EQ(g.count(CellState::Burning), 5u);
    for (Position p : {Position{1, 2}, Position{3, 2}, Position{2, 1}, Position{2, 3}})
        EXPECT_EQ(g.at(p), CellState::Burning);
    EXPECT_EQ(g.at({1, 1}), CellState::Forest);
}

TEST(World, OffPeriodTickLeavesGridUnchanged)
{
    auto g = full_forest({5, 5}, {2, 2}, {0, 0}, 3);
    const auto before = g;
    EXPECT_EQ(stepped_fire(g, 2), before);
    EXPECT_NE(stepped_fire(g, 3), before);
}

TEST(World, FullForestBurnsAtManhattanTimesPeriod)
{
    for (int period : {1, 2, 3}) {
        auto g = full_forest({7, 6}, {2, 4}, {6, 0}, period);
        std::vector<int> first(42, -1);
        for (int tick = 0; tick <= 40; ++tick) {
            if (tick > 0) step_fire(g, tick);
            for (int r = 0; r < 7; ++r)
                for (int c = 0; c < 6; ++c)
                    if (g.at({r, c}) == CellState::Burning && first[r * 6 + c] < 0) first[r * 6 + c] = tick;
        }
        for (int r = 0; r < 7; ++r)
            for (int c = 0; c < 6; ++c) EXPECT_EQ(first[r * 6 + c], period * manhattan({2, 4}, {r, c}));
    }
}

TEST(World, FireReachedTarget)
{
    auto g = full_forest({1, 5}, {0, 0}, {0, 3}, 1);
    EXPECT_FALSE(fire_reached_target(g));
    const int crossing = oracle::first_burn_ticks(g)[3];
    ASSERT_EQ(crossing, 3);
    for (int tick = 1; tick <= 5; ++tick) {
        step_fire(g, tick);
        EXPECT_EQ(fire_reached_target(g), tick >= crossing);
    }
}

TEST(World, NoForestMeansFireNeverReachesTarget)
{
    auto g = generate_grid({6, 6}, 0.0, {0, 1}, {0, 0}, 5);
    for (int tick = 1; tick <= 100; ++tick) step_fire(g, tick);
    EXPECT_FALSE(fire_reached_target(g));
    EXPECT_EQ(g.count(CellState::Burning), 1u);
}

TEST(World, RandomGridsMatchBfsOracleAndKeepInvariants)
{
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const GridSize s{1 + static_cast<int>(uniform_below(rng, 20)), 1 + static_cast<int>(uniform_below(rng, 20))};
        if (s.cell_count() < 2) continue;
        const Position fire{static_cast<int>(uniform_below(rng, s.rows)), static_cast<int>(uniform_below(rng, s.cols))};
        Position target = fire;
        while (target == fire)
            target = {static_cast<int>(uniform_below(rng, s.rows)), static_cast<int>(uniform_below(rng, s.cols))};
        const int period = 1 + static_cast<int>(uniform_below(rng, 3));
        auto g = generate_grid(s, uniform_unit(rng), target, fire, rng(), period);
        const auto expected = oracle::first_burn_ticks(g);
        const int horizon = period * static_cast<int>(s.cell_count()) + 1;
        std::size_t burning = g.count(CellState::Burning);
        for (int tick = 1; tick <= horizon; ++tick) {
            step_fire(g, tick);
            ASSERT_EQ(g.count(CellState::Forest) + g.count(CellState::Empty) + g.count(CellState::Burning),
                      s.cell_count());
            ASSERT_GE(g.count(CellState::Burning), burning);
            burning = g.count(CellState::Burning);
            for (int r = 0; r < s.rows; ++r)
                for (int c = 0; c < s.cols; ++c) {
                    const bool should_burn = expected[static_cast<std::size_t>(r * s.cols + c)] <= tick;
                    ASSERT_EQ(g.at({r, c}) == CellState::Burning, should_burn) << "trial " << trial;
                }
        }
    }
}
