#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <type_traits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "umssim/domain.hpp"
#include "umssim/reputation.hpp"

namespace umssim {

struct ConfigFile {
    std::vector<Marketplace> marketplaces;
    std::vector<MissionTemplate> missions;
    SimConfig simulation;

    const Marketplace& marketplace() const {
        for (const auto& m : marketplaces)
            if (m.name == simulation.marketplace_ref) return m;
        throw std::out_of_range("unknown marketplace '" + simulation.marketplace_ref + "'");
    }
    const MissionTemplate& mission() const {
        for (const auto& t : missions)
            if (t.id == simulation.mission_ref) return t;
        throw std::out_of_range("unknown mission '" + simulation.mission_ref + "'");
    }

    friend bool operator==(const ConfigFile&, const ConfigFile&) = default;
};

enum class ConfigErrorKind { MissingFile, Syntax, Schema, Resolution, Validation };

inline const char* to_string(ConfigErrorKind k) {
    switch (k) {
        case ConfigErrorKind::MissingFile: return "missing file";
        case ConfigErrorKind::Syntax: return "syntax error";
        case ConfigErrorKind::Schema: return "schema error";
        case ConfigErrorKind::Resolution: return "resolution error";
        case ConfigErrorKind::Validation: return "validation error";
    }
    return "?";
}

class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorKind kind, std::vector<std::string> problems)
        : std::runtime_error(render(kind, problems)), kind_(kind), problems_(std::move(problems)) {}

    ConfigErrorKind kind() const noexcept { return kind_; }
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string render(ConfigErrorKind kind, const std::vector<std::string>& problems) {
        std::string out = std::string(to_string(kind)) + ":";
        for (const auto& p : problems) out += "\n  - " + p;
        return out;
    }

    ConfigErrorKind kind_;
    std::vector<std::string> problems_;
};

namespace detail {

using json = nlohmann::json;

// Collects schema problems instead of stopping at the first one.
class SchemaReader {
public:
    std::vector<std::string> problems;

    bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
        if (!j.is_object()) {
            problems.push_back(path + ": expected an object");
            return false;
        }
        std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& [key, _] : j.items())
            if (!keys.contains(key)) problems.push_back(path + ": unknown field '" + key + "'");
        return true;
    }

    const json* field(const json& j, const std::string& path, const char* key, bool required = true) {
        if (!j.is_object()) return nullptr;
        auto it = j.find(key);
        if (it == j.end()) {
            if (required) problems.push_back(path + ": missing field '" + key + "'");
            return nullptr;
        }
        return &*it;
    }

    template <class T>
    void read(const json& j, const std::string& path, const char* key, T& out, bool required = true) {
        const json* v = field(j, path, key, required);
        if (!v) return;
        const std::string where = path + "." + key;
        if constexpr (std::is_same_v<T, bool>) {
            if (!v->is_boolean()) return type_error(where, "a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v->is_string()) return type_error(where, "a string");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v->is_number()) return type_error(where, "a number");
        } else if constexpr (std::is_unsigned_v<T>) {
            if (!v->is_number_unsigned() || v->get<std::uint64_t>() > std::numeric_limits<T>::max())
                return type_error(where, "a non-negative integer in range");
        } else {
            if (!v->is_number_integer()) return type_error(where, "an integer");
            const auto wide = v->get<long long>();
            if (wide < std::numeric_limits<T>::min() || wide > std::numeric_limits<T>::max())
                return type_error(where, "an integer in range");
        }
        out = v->get<T>();
    }

    void position(const json& j, const std::string& path, const char* key, Position& out) {
        const json* v = field(j, path, key);
        if (!v) return;
        const std::string where = path + "." + key;
        if (!object(*v, where, {"row", "col"})) return;
        read(*v, where, "row", out.row);
        read(*v, where, "col", out.col);
    }

private:
    void type_error(const std::string& where, const char* expected) {
        problems.push_back(where + ": expected " + expected);
    }
};

inline UavSpec parse_uav(SchemaReader& r, const json& j, const std::string& path) {
    UavSpec u;
    if (!r.object(j, path, {"id", "speed", "sensor_range", "battery", "behavior"})) return u;
    r.read(j, path, "id", u.id);
    r.read(j, path, "speed", u.speed);
    r.read(j, path, "sensor_range", u.sensor_range);
    r.read(j, path, "battery", u.battery);
    const json* b = r.field(j, path, "behavior");
    if (!b) return u;
    const std::string bpath = path + ".behavior";
    if (!b->is_object()) {
        r.problems.push_back(bpath + ": expected an object");
        return u;
    }
    std::string kind;
    r.read(*b, bpath, "kind", kind);
    if (kind == "cooperative") {
        r.object(*b, bpath, {"kind"});
        u.behavior = BehaviorProfile::cooperative();
    } else if (kind == "byzantine") {
        r.object(*b, bpath, {"kind", "claim_rate", "max_claims"});
        u.behavior = BehaviorProfile::byzantine();
        r.read(*b, bpath, "claim_rate", u.behavior.claim_rate, false);
        r.read(*b, bpath, "max_claims", u.behavior.max_claims, false);
    } else if (!kind.empty()) {
        r.problems.push_back(bpath + ".kind: expected \"cooperative\" or \"byzantine\"");
    }
    return u;
}

inline MissionTemplate parse_mission(SchemaReader& r, const json& j, const std::string& path) {
    MissionTemplate t;
    if (!r.object(j, path,
                  {"id", "team_size", "forest_density", "fire_spread_ticks", "fire_start", "area", "target",
                   "byzantine_collaboration"}))
        return t;
    r.read(j, path, "id", t.id);
    r.read(j, path, "team_size", t.team_size);
    r.read(j, path, "forest_density", t.forest_density);
    r.read(j, path, "fire_spread_ticks", t.spread_period);
    r.position(j, path, "fire_start", t.fire_start);
    r.position(j, path, "target", t.target);
    r.read(j, path, "byzantine_collaboration", t.byzantine_collaboration);
    if (const json* a = r.field(j, path, "area")) {
        const std::string apath = path + ".area";
        if (r.object(*a, apath, {"rows", "cols"})) {
            r.read(*a, apath, "rows", t.area.rows);
            r.read(*a, apath, "cols", t.area.cols);
        }
    }
    return t;
}

inline SimConfig parse_simulation(SchemaReader& r, const json& j, const std::string& path) {
    SimConfig c;
    if (!r.object(j, path,
                  {"cycles", "constancy", "master_seed", "strategies", "marketplace", "mission", "eigentrust",
                   "max_ticks_factor"}))
        return c;
    r.read(j, path, "cycles", c.cycles);
    r.read(j, path, "constancy", c.constancy);
    r.read(j, path, "master_seed", c.master_seed);
    r.read(j, path, "marketplace", c.marketplace_ref);
    r.read(j, path, "mission", c.mission_ref);
    r.read(j, path, "max_ticks_factor", c.max_ticks_factor, false);
    if (const json* s = r.field(j, path, "strategies")) {
        if (!s->is_array()) {
            r.problems.push_back(path + ".strategies: expected an array of strings");
        } else {
            for (const auto& name : *s) {
                if (name.is_string()) c.strategies.push_back(name.get<std::string>());
                else r.problems.push_back(path + ".strategies: expected an array of strings");
            }
        }
    }
    if (const json* e = r.field(j, path, "eigentrust", false)) {
        const std::string epath = path + ".eigentrust";
        if (r.object(*e, epath, {"alpha", "epsilon", "max_iter"})) {
            r.read(*e, epath, "alpha", c.eigentrust.alpha, false);
            r.read(*e, epath, "epsilon", c.eigentrust.epsilon, false);
            r.read(*e, epath, "max_iter", c.eigentrust.max_iter, false);
        }
    }
    return c;
}

}  // namespace detail

/// Full check of a parsed configuration: references, then every embedded
/// validation. Throws ConfigError listing all problems of the first failing
/// category.
inline void check_config(const ConfigFile& cfg, const StrategyRegistry& registry = StrategyRegistry::builtin()) {
    std::vector<std::string> unresolved;
    const Marketplace* market = nullptr;
    const MissionTemplate* mission = nullptr;
    std::set<std::string> names;
    for (const auto& m : cfg.marketplaces) {
        if (!names.insert(m.name).second) unresolved.push_back("duplicate marketplace name '" + m.name + "'");
        if (m.name == cfg.simulation.marketplace_ref) market = &m;
    }
    names.clear();
    for (const auto& t : cfg.missions) {
        if (!names.insert(t.id).second) unresolved.push_back("duplicate mission id '" + t.id + "'");
        if (t.id == cfg.simulation.mission_ref) mission = &t;
    }
    if (!market) unresolved.push_back("simulation references unknown marketplace '" + cfg.simulation.marketplace_ref + "'");
    if (!mission) unresolved.push_back("simulation references unknown mission '" + cfg.simulation.mission_ref + "'");
    if (!unresolved.empty()) throw ConfigError(ConfigErrorKind::Resolution, std::move(unresolved));

    ValidationReport report = validate_sim_config(cfg.simulation, registry.names());
    for (const auto& m : cfg.marketplaces) report.append(validate_marketplace(m));
    for (const auto& t : cfg.missions) {
        if (&t == mission) {
            report.append(validate_mission(t, *market));
        } else {
            // Unreferenced missions only need to be self-consistent.
            Marketplace any{"", std::vector<UavSpec>(static_cast<std::size_t>(std::max(t.team_size, 0)))};
            report.append(validate_mission(t, any));
        }
    }
    if (!report.ok()) {
        std::vector<std::string> problems;
        for (const auto& v : report.violations) problems.push_back(v.message);
        throw ConfigError(ConfigErrorKind::Validation, std::move(problems));
    }
}

inline ConfigFile parse_config(const std::string& text, const StrategyRegistry& registry = StrategyRegistry::builtin()) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(ConfigErrorKind::Syntax, {e.what()});
    }

    detail::SchemaReader r;
    ConfigFile cfg;
    if (r.object(doc, "config", {"marketplaces", "missions", "simulation"})) {
        if (const auto* ms = r.field(doc, "config", "marketplaces")) {
            if (!ms->is_array()) r.problems.push_back("config.marketplaces: expected an array");
            else
                for (std::size_t i = 0; i < ms->size(); ++i) {
                    const auto path = "marketplaces[" + std::to_string(i) + "]";
                    const auto& mj = (*ms)[i];
                    Marketplace m;
                    if (r.object(mj, path, {"name", "uavs"})) {
                        r.read(mj, path, "name", m.name);
                        if (const auto* us = r.field(mj, path, "uavs")) {
                            if (!us->is_array()) r.problems.push_back(path + ".uavs: expected an array");
                            else
                                for (std::size_t k = 0; k < us->size(); ++k)
                                    m.uavs.push_back(detail::parse_uav(r, (*us)[k],
                                                                       path + ".uavs[" + std::to_string(k) + "]"));
                        }
                    }
                    cfg.marketplaces.push_back(std::move(m));
                }
        }
        if (const auto* ts = r.field(doc, "config", "missions")) {
            if (!ts->is_array()) r.problems.push_back("config.missions: expected an array");
            else
                for (std::size_t i = 0; i < ts->size(); ++i)
                    cfg.missions.push_back(detail::parse_mission(r, (*ts)[i], "missions[" + std::to_string(i) + "]"));
        }
        if (const auto* s = r.field(doc, "config", "simulation"))
            cfg.simulation = detail::parse_simulation(r, *s, "simulation");
    }
    if (!r.problems.empty()) throw ConfigError(ConfigErrorKind::Schema, std::move(r.problems));

    check_config(cfg, registry);
    return cfg;
}

inline ConfigFile load_config(const std::filesystem::path& path,
                              const StrategyRegistry& registry = StrategyRegistry::builtin()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(ConfigErrorKind::MissingFile, {"cannot open '" + path.string() + "'"});
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), registry);
}

inline nlohmann::json to_json(const ConfigFile& cfg) {
    using nlohmann::json;
    auto pos = [](Position p) { return json{{"row", p.row}, {"col", p.col}}; };
    json doc;
    doc["marketplaces"] = json::array();
    for (const auto& m : cfg.marketplaces) {
        json uavs = json::array();
        for (const auto& u : m.uavs) {
            json behavior = {{"kind", u.behavior.is_byzantine() ? "byzantine" : "cooperative"}};
            if (u.behavior.is_byzantine()) {
                behavior["claim_rate"] = u.behavior.claim_rate;
                behavior["max_claims"] = u.behavior.max_claims;
            }
            uavs.push_back({{"id", u.id},
                            {"speed", u.speed},
                            {"sensor_range", u.sensor_range},
                            {"battery", u.battery},
                            {"behavior", behavior}});
        }
        doc["marketplaces"].push_back({{"name", m.name}, {"uavs", uavs}});
    }
    doc["missions"] = json::array();
    for (const auto& t : cfg.missions) {
        doc["missions"].push_back({{"id", t.id},
                                   {"team_size", t.team_size},
                                   {"forest_density", t.forest_density},
                                   {"fire_spread_ticks", t.spread_period},
                                   {"fire_start", pos(t.fire_start)},
                                   {"area", {{"rows", t.area.rows}, {"cols", t.area.cols}}},
                                   {"target", pos(t.target)},
                                   {"byzantine_collaboration", t.byzantine_collaboration}});
    }
    const auto& s = cfg.simulation;
    doc["simulation"] = {{"cycles", s.cycles},
                         {"constancy", s.constancy},
                         {"master_seed", s.master_seed},
                         {"strategies", s.strategies},
                         {"marketplace", s.marketplace_ref},
                         {"mission", s.mission_ref},
                         {"eigentrust",
                          {{"alpha", s.eigentrust.alpha},
                           {"epsilon", s.eigentrust.epsilon},
                           {"max_iter", s.eigentrust.max_iter}}},
                         {"max_ticks_factor", s.max_ticks_factor}};
    return doc;
}

inline std::string write_config(const ConfigFile& cfg) { return to_json(cfg).dump(2) + "\n"; }

}  // namespace umssim
