#include "umssim/reputation.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include "gtest/gtest.h"

#include <cmath>

using namespace umssim;
using namespace umssim::testing;

namespace {

SquareMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    SquareMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    return m;
}

SquareMatrix random_raw(SplitMix64& rng, std::size_t n, double zero_row_chance = 0.1) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (uniform_unit(rng) < zero_row_chance) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (uniform_unit(rng) < 0.6) m(i, j) = 10.0 * uniform_unit(rng);
    }
    return m;
}

Marketplace numbered(std::size_t n) {
    std::vector<UavSpec> uavs;
    for (std::size_t i = 0; i < n; ++i) uavs.push_back(coop(static_cast<UavId>(i)));
    return market(uavs);
}

AgentState member(UavSpec spec) { return make_agent(spec, {0, 0}); }

}  // namespace

TEST(Reputation, EmptyRowFallsBackToPretrust)
{
    auto c = normalize_local_trust(SquareMatrix(4), uniform_distribution(4));
    for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(c(0, j), 0.25);
}

TEST(Reputation, NormalizationArithmetic)
{
    auto c = normalize_local_trust(from_rows({{0, 2, 1}, {1, 1, 1}, {0, 0, 0}}), uniform_distribution(3));
    EXPECT_DOUBLE_EQ(c(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(c(0, 1), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(c(0, 2), 1.0 / 3.0);

    auto neg = normalize_local_trust(from_rows({{-1, 3}, {0, 0}}), uniform_distribution(2));
    EXPECT_DOUBLE_EQ(neg(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(neg(0, 1), 1.0);
    EXPECT_THROW(normalize_local_trust(SquareMatrix(3), uniform_distribution(2)), std::invalid_argument);
}

TEST(Reputation, AlphaOneReturnsPretrust)
{
    const std::vector<double> p = {0.1, 0.2, 0.7};
    auto c = from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
    auto v = eigentrust_global(c, p, {1.0, 1e-12, 100});
    for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(v[i], p[i]);
}

TEST(Reputation, UniformRowsGiveUniformTrust)
{
    auto c = from_rows({{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25},
                        {0.25, 0.25, 0.25, 0.25}});
    auto v = eigentrust_global(c, uniform_distribution(4), {0.1, 1e-12, 100});
    for (double x : v) EXPECT_NEAR(x, 0.25, 1e-15);
}

TEST(Reputation, ThreeAgentFixedPoint)
{
    // Exact solution of v = 0.1 p + 0.9 C^T v for this C is (29/60, 29/60, 1/30).
    auto c = from_rows({{0, 1, 0}, {1, 0, 0}, {0.5, 0.5, 0}});
    auto p = uniform_distribution(3);
    auto v = eigentrust_global(c, p, {0.1, 1e-14, 10000});
    auto oracle_v = oracle::eigentrust_fixed_point(c, p, 0.1);
    const double exact[] = {29.0 / 60.0, 29.0 / 60.0, 1.0 / 30.0};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(v[i], exact[i], 1e-9);
        EXPECT_NEAR(oracle_v[i], exact[i], 1e-12);
    }
}

TEST(Reputation, NonStochasticMatrixRejected)
{
    auto c = from_rows({{0.5, 0.4}, {0, 1}});
    EXPECT_THROW(eigentrust_global(c, uniform_distribution(2), {}), std::invalid_argument);
    EXPECT_THROW(eigentrust_global(from_rows({{1.5, -0.5}, {0, 1}}), uniform_distribution(2), {}),
                 std::invalid_argument);
}

TEST(Reputation, RowsSumToOneProperty)
{
    SplitMix64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + uniform_below(rng, 50);
        auto c = normalize_local_trust(random_raw(rng, n), uniform_distribution(n));
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (double x : c.row(i)) {
                ASSERT_GE(x, 0.0);
                sum += x;
            }
            ASSERT_NEAR(sum, 1.0, 1e-12);
        }
    }
}

TEST(Reputation, PowerIterationMatchesLinearSolve)
{
    SplitMix64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + uniform_below(rng, 20);
        const double alpha = trial % 2 ? 0.5 : 0.1;
        const auto p = uniform_distribution(n);
        auto c = normalize_local_trust(random_raw(rng, n), p);
        auto v = eigentrust_global(c, p, {alpha, 1e-13, 10000});
        auto expected = oracle::eigentrust_fixed_point(c, p, alpha);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ASSERT_NEAR(v[i], expected[i], 1e-9);
            ASSERT_GE(v[i], 0.0);
            sum += v[i];
        }
        ASSERT_NEAR(sum, 1.0, 1e-9);
    }
}

TEST(Reputation, FullTeamForAnyStrategy)
{
    auto m = numbered(5);
    SplitMix64 rng(1);
    for (const auto& name : StrategyRegistry::builtin().names()) {
        auto s = StrategyRegistry::builtin().create(name, {});
        TrustState state(s->name(), m.size());
        EXPECT_EQ(s->select(m, state, 5, rng), (std::vector<UavId>{0, 1, 2, 3, 4}));
        EXPECT_THROW(s->select(m, state, 6, rng), std::invalid_argument);
    }
}

TEST(Reputation, TopNOrdering)
{
    const std::vector<double> global = {0.5, 0.3, 0.2};
    EXPECT_EQ(top_n(global, 2), (std::vector<std::size_t>{0, 1}));
    const std::vector<double> shuffled = {0.2, 0.5, 0.3};
    EXPECT_EQ(top_n(shuffled, 2), (std::vector<std::size_t>{1, 2}));
}

TEST(Reputation, FreshEigenTrustPicksLowestIds)
{
    auto m = numbered(7);
    EigenTrustStrategy et;
    TrustState state("eigentrust", m.size());
    SplitMix64 rng(1);
    EXPECT_EQ(et.select(m, state, 3, rng), (std::vector<UavId>{0, 1, 2}));
    for (double g : state.global) EXPECT_NEAR(g, 1.0 / 7.0, 1e-12);
}

TEST(Reputation, DirectAverageScores)
{
    auto m = numbered(3);
    TrustState state("mdbr_standin", 3);
    std::vector<FeedbackReport> reports = {{0, 1, 1.0, "x"}, {2, 1, 0.0, "x"}, {1, 2, 1.0, "x"}};
    apply_feedback(state, m, reports);
    auto s = direct_average_scores(state);
    EXPECT_DOUBLE_EQ(s[0], 0.5);
    EXPECT_DOUBLE_EQ(s[1], 0.5);
    EXPECT_DOUBLE_EQ(s[2], 1.0);
    DirectAverageStrategy da;
    SplitMix64 rng(1);
    EXPECT_EQ(da.select(m, state, 1, rng), (std::vector<UavId>{2}));
}

TEST(Reputation, RandomSelectionReproducibleAndUniform)
{
    auto m = numbered(8);
    RandomStrategy rs;
    TrustState state("random", m.size());
    SplitMix64 a(99), b(99);
    for (int i = 0; i < 50; ++i) ASSERT_EQ(rs.select(m, state, 3, a), rs.select(m, state, 3, b));

    constexpr int kTrials = 10000;
    std::vector<int> count(8, 0);
    SplitMix64 rng(2718);
    for (int i = 0; i < kTrials; ++i) ++count[rs.select(m, state, 1, rng).front()];
    const double p = 1.0 / 8.0;
    const double se = std::sqrt(kTrials * p * (1 - p));
    for (int c : count) EXPECT_LT(std::abs(c - kTrials * p), 3 * se);
}

TEST(Reputation, CooperativeFeedbackPunishesFlaggedSender)
{
    auto rater = member(coop(1));
    rater.flags.insert(4);
    std::vector<AgentState> team = {member(coop(2)), rater, member(byz(4))};
    auto r = generate_feedback(rater, team, mission(3, {5, 5}, {0, 0}, {4, 4}));
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].ratee, 2u);
    EXPECT_EQ(r[0].score, 1.0);
    EXPECT_EQ(r[1].ratee, 4u);
    EXPECT_EQ(r[1].score, 0.0);
}

TEST(Reputation, CollusiveFeedback)
{
    auto rater = member(byz(7));
    std::vector<AgentState> team = {member(coop(2)), rater, member(byz(9))};
    auto r = generate_feedback(rater, team, mission(3, {5, 5}, {0, 0}, {4, 4}, 0.0, 1, true));
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].ratee, 7u);
    EXPECT_EQ(r[0].score, 1.0);
    EXPECT_EQ(r[1].ratee, 2u);
    EXPECT_EQ(r[1].score, 0.0);
    EXPECT_EQ(r[2].ratee, 9u);
    EXPECT_EQ(r[2].score, 1.0);

    auto solo = generate_feedback(rater, team, mission(3, {5, 5}, {0, 0}, {4, 4}, 0.0, 1, false));
    ASSERT_EQ(solo.size(), 3u);
    EXPECT_EQ(solo[0].score, 1.0);
    EXPECT_EQ(solo[1].score, 0.0);
    EXPECT_EQ(solo[2].score, 0.0);
}

TEST(Reputation, SoloCooperativeGivesNoFeedback)
{
    auto a = member(coop(3));
    std::vector<AgentState> team = {a};
    EXPECT_TRUE(generate_feedback(a, team, mission(1, {5, 5}, {0, 0}, {4, 4})).empty());
}

TEST(Reputation, ApplyFeedbackAccumulates)
{
    auto m = numbered(3);
    TrustState state("eigentrust", 3);
    const auto fresh = state;
    apply_feedback(state, m, {});
    EXPECT_EQ(state, fresh);

    std::vector<FeedbackReport> one = {{1, 2, 1.0, "x"}};
    apply_feedback(state, m, one);
    EXPECT_EQ(state.raw(1, 2), 1.0);

    std::vector<FeedbackReport> episode = {{0, 1, 1.0, "x"}, {2, 0, 0.5, "x"}};
    TrustState twice("eigentrust", 3);
    apply_feedback(twice, m, episode);
    auto once = twice;
    apply_feedback(twice, m, episode);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(twice.raw(i, j), 2 * once.raw(i, j));

    std::vector<FeedbackReport> unknown = {{1, 42, 1.0, "x"}};
    EXPECT_THROW(apply_feedback(state, m, unknown), std::invalid_argument);
}

TEST(Reputation, ScalingRawFeedbackKeepsEigenTrustTeam)
{
    auto m = numbered(10);
    SplitMix64 rng(31337);
    EigenTrustStrategy et;
    for (int trial = 0; trial < 200; ++trial) {
        TrustState state("eigentrust", m.size());
        state.raw = random_raw(rng, m.size(), 0.3);
        auto scaled = state;
        scaled.raw *= 0.25 + 20.0 * uniform_unit(rng);
        const std::size_t n = 1 + uniform_below(rng, 10);
        EXPECT_EQ(et.select(m, state, n, rng), et.select(m, scaled, n, rng));
    }
}

TEST(Reputation, CollusionAmplifiesCliqueTrust)
{
    // UAVs 0,1 Byzantine, 2..4 cooperative. Only collusive feedback exists:
    // each Byzantine scores itself and its ally 1 and the others 0.
    auto m = market({byz(0), byz(1), coop(2), coop(3), coop(4)});
    TrustState state("eigentrust", 5);
    std::vector<FeedbackReport> reports;
    for (UavId rater : {0u, 1u})
        for (UavId ratee : {0u, 1u, 2u, 3u, 4u}) reports.push_back({rater, ratee, ratee < 2 ? 1.0 : 0.0, "x"});
    apply_feedback(state, m, reports);

    const auto p = uniform_distribution(5);
    const auto c = normalize_local_trust(state.raw, p);
    const auto v = eigentrust_global(c, p, {0.1, 1e-13, 10000});
    const auto expected = oracle::eigentrust_fixed_point(c, p, 0.1);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(v[i], expected[i], 1e-9);
    EXPECT_GT(v[0] + v[1], 2.0 / 5.0);

    SplitMix64 rng(1);
    EXPECT_EQ(EigenTrustStrategy{}.select(m, state, 2, rng), (std::vector<UavId>{0, 1}));
}
