#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "umssim/agents.hpp"
#include "umssim/domain.hpp"
#include "umssim/rng.hpp"

namespace umssim {

/// Dense row-major square matrix.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

    SquareMatrix& operator*=(double k) {
        for (auto& v : data_) v *= k;
        return *this;
    }

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

inline std::vector<double> uniform_distribution(std::size_t n) {
    return std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0);
}

/// Row-normalizes clipped local trust: c_ij = max(s_ij,0) / sum_j max(s_ij,0).
/// Rows with no positive mass fall back to the pre-trust distribution.
inline SquareMatrix normalize_local_trust(const SquareMatrix& raw, std::span<const double> pretrust) {
    const std::size_t n = raw.size();
    if (pretrust.size() != n) throw std::invalid_argument("pretrust dimension mismatch");
    SquareMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += std::max(raw(i, j), 0.0);
        for (std::size_t j = 0; j < n; ++j)
            c(i, j) = sum > 0.0 ? std::max(raw(i, j), 0.0) / sum : pretrust[j];
    }
    return c;
}

/// Damped power iteration v <- (1-alpha) C^T v + alpha p, starting at p.
/// Stops when the L1 change drops below epsilon or after max_iter steps.
inline std::vector<double> eigentrust_global(const SquareMatrix& c, std::span<const double> pretrust,
                                             const EigenTrustParams& params) {
    const std::size_t n = c.size();
    if (pretrust.size() != n) throw std::invalid_argument("pretrust dimension mismatch");
    if (!(params.alpha > 0.0 && params.alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
    if (!(params.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (double v : c.row(i)) {
            if (v < 0.0 || !std::isfinite(v)) throw std::invalid_argument("trust matrix has invalid entries");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("trust matrix is not row-stochastic");
    }

    const double a = params.alpha;
    std::vector<double> v(pretrust.begin(), pretrust.end());
    std::vector<double> next(n);
    for (int iter = 0; iter < params.max_iter; ++iter) {
        for (std::size_t j = 0; j < n; ++j) next[j] = a * pretrust[j];
        for (std::size_t i = 0; i < n; ++i) {
            const double w = (1.0 - a) * v[i];
            if (w == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) next[j] += w * c(i, j);
        }
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) delta += std::abs(next[j] - v[j]);
        v.swap(next);
        if (delta < params.epsilon) break;
    }
    return v;
}

struct FeedbackReport {
    UavId rater = 0;
    UavId ratee = 0;
    double score = 0.0;
    std::string mission_id;

    friend bool operator==(const FeedbackReport&, const FeedbackReport&) = default;
};

/// Per-strategy accumulated feedback. `raw` holds score sums and `counts`
/// the number of reports, both indexed by marketplace position.
struct TrustState {
    std::string strategy_name;
    SquareMatrix raw;
    SquareMatrix counts;
    std::vector<double> global;

    TrustState() = default;
    TrustState(std::string name, std::size_t population)
        : strategy_name(std::move(name)),
          raw(population),
          counts(population),
          global(uniform_distribution(population)) {}

    friend bool operator==(const TrustState&, const TrustState&) = default;
};

inline void apply_feedback(TrustState& state, const Marketplace& m, std::span<const FeedbackReport> reports) {
    for (const auto& r : reports) {
        const auto i = m.index_of(r.rater);
        const auto j = m.index_of(r.ratee);
        if (!i || !j)
            throw std::invalid_argument("feedback references unknown UAV " +
                                        std::to_string(i ? r.ratee : r.rater));
    }
    for (const auto& r : reports) {
        const auto i = *m.index_of(r.rater);
        const auto j = *m.index_of(r.ratee);
        state.raw(i, j) += std::max(r.score, 0.0);
        state.counts(i, j) += 1.0;
    }
}

/// Post-mission scores from one team member.
///
/// Cooperative raters give 0 to senders they flagged and 1 to everyone else.
/// Byzantine raters always score themselves 1; with collaboration they also
/// give 1 to fellow Byzantines and 0 to cooperative members, without it they
/// give 0 to all others.
inline std::vector<FeedbackReport> generate_feedback(const AgentState& rater, std::span<const AgentState> team,
                                                     const MissionTemplate& mission) {
    std::vector<FeedbackReport> out;
    const UavId self = rater.spec.id;
    if (!rater.is_byzantine()) {
        for (const auto& mate : team) {
            if (mate.spec.id == self) continue;
            out.push_back({self, mate.spec.id, rater.flags.contains(mate.spec.id) ? 0.0 : 1.0, mission.id});
        }
        return out;
    }
    out.push_back({self, self, 1.0, mission.id});
    for (const auto& mate : team) {
        if (mate.spec.id == self) continue;
        const bool ally = mission.byzantine_collaboration && mate.is_byzantine();
        out.push_back({self, mate.spec.id, ally ? 1.0 : 0.0, mission.id});
    }
    return out;
}

/// Mean received feedback per UAV, 0.5 for UAVs nobody has rated yet.
inline std::vector<double> direct_average_scores(const TrustState& state) {
    const std::size_t n = state.raw.size();
    std::vector<double> scores(n, 0.5);
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        double count = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += state.raw(i, j);
            count += state.counts(i, j);
        }
        if (count > 0.0) scores[j] = sum / count;
    }
    return scores;
}

/// Indices of the n best scores. Scores equal to 12 decimal places are ties
/// and resolve to the earlier marketplace position. Result is in marketplace order.
inline std::vector<std::size_t> top_n(std::span<const double> scores, std::size_t n) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::vector<long long> key(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) key[i] = std::llround(scores[i] * 1e12);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    idx.resize(std::min(n, idx.size()));
    std::sort(idx.begin(), idx.end());
    return idx;
}

class TeamFormationStrategy {
public:
    virtual ~TeamFormationStrategy() = default;

    virtual std::string name() const = 0;

    /// Reputation per marketplace position as this strategy sees it.
    virtual std::vector<double> scores(const TrustState& state) const = 0;

    /// Picks n UAVs; ids are returned in marketplace order.
    virtual std::vector<UavId> select(const Marketplace& m, TrustState& state, std::size_t n,
                                      SplitMix64& rng) const = 0;
};

namespace detail {

inline std::vector<UavId> ids_at(const Marketplace& m, const std::vector<std::size_t>& idx) {
    std::vector<UavId> ids;
    ids.reserve(idx.size());
    for (auto i : idx) ids.push_back(m.uavs[i].id);
    return ids;
}

inline void check_team_size(const Marketplace& m, std::size_t n) {
    if (n > m.size()) throw std::invalid_argument("team larger than marketplace '" + m.name + "'");
}

}  // namespace detail

class RandomStrategy final : public TeamFormationStrategy {
public:
    std::string name() const override { return "random"; }

    std::vector<double> scores(const TrustState& state) const override { return direct_average_scores(state); }

    std::vector<UavId> select(const Marketplace& m, TrustState&, std::size_t n, SplitMix64& rng) const override {
        detail::check_team_size(m, n);
        std::vector<std::size_t> idx(m.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = i + static_cast<std::size_t>(uniform_below(rng, idx.size() - i));
            std::swap(idx[i], idx[j]);
        }
        idx.resize(n);
        std::sort(idx.begin(), idx.end());
        return detail::ids_at(m, idx);
    }
};

class EigenTrustStrategy final : public TeamFormationStrategy {
public:
    explicit EigenTrustStrategy(EigenTrustParams params = {}) : params_(params) {}

    std::string name() const override { return "eigentrust"; }

    std::vector<double> scores(const TrustState& state) const override {
        const auto pretrust = uniform_distribution(state.raw.size());
        return eigentrust_global(normalize_local_trust(state.raw, pretrust), pretrust, params_);
    }

    std::vector<UavId> select(const Marketplace& m, TrustState& state, std::size_t n, SplitMix64&) const override {
        detail::check_team_size(m, n);
        state.global = scores(state);
        return detail::ids_at(m, top_n(state.global, n));
    }

private:
    EigenTrustParams params_;
};

/// Direct-feedback baseline standing in for MDBR: top-n by mean received score.
class DirectAverageStrategy final : public TeamFormationStrategy {
public:
    std::string name() const override { return "mdbr_standin"; }

    std::vector<double> scores(const TrustState& state) const override { return direct_average_scores(state); }

    std::vector<UavId> select(const Marketplace& m, TrustState& state, std::size_t n, SplitMix64&) const override {
        detail::check_team_size(m, n);
        return detail::ids_at(m, top_n(scores(state), n));
    }
};

/// Name -> strategy factory. New strategies plug in here without engine changes.
class StrategyRegistry {
public:
    using Factory = std::function<std::unique_ptr<TeamFormationStrategy>(const EigenTrustParams&)>;

    void add(std::string name, Factory factory) { factories_[std::move(name)] = std::move(factory); }

    bool contains(const std::string& name) const { return factories_.contains(name); }

    std::unique_ptr<TeamFormationStrategy> create(const std::string& name, const EigenTrustParams& params) const {
        auto it = factories_.find(name);
        if (it == factories_.end()) throw std::invalid_argument("unknown strategy '" + name + "'");
        return it->second(params);
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& [name, _] : factories_) out.push_back(name);
        return out;
    }

    static const StrategyRegistry& builtin() {
        static const StrategyRegistry registry = [] {
            StrategyRegistry r;
            r.add("random", [](const EigenTrustParams&) { return std::make_unique<RandomStrategy>(); });
            r.add("eigentrust",
                  [](const EigenTrustParams& p) { return std::make_unique<EigenTrustStrategy>(p); });
            r.add("mdbr_standin", [](const EigenTrustParams&) { return std::make_unique<DirectAverageStrategy>(); });
            return r;
        }();
        return registry;
    }

private:
    std::map<std::string, Factory> factories_;
};

}  // namespace umssim
