#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "umssim/engine.hpp"

namespace umssim {

namespace fs = std::filesystem;

inline constexpr const char* kCsvHeader =
    "cycle,episode,strategy,marketplace,byzantine_pct,mission_id,outcome,completion_ticks,team,"
    "adversarial_flags,reputation_before,reputation_after";

class ExportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

/// RFC 4180: quote fields containing separators, quotes or line breaks.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// Splits one CSV record. Quoted fields may contain commas and doubled quotes.
inline std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

inline std::string csv_row(const EpisodeResult& r) {
    auto join_ids = [&] {
        std::string s;
        for (std::size_t i = 0; i < r.team.size(); ++i) s += (i ? ";" : "") + std::to_string(r.team[i]);
        return s;
    };
    auto join_scores = [](const std::vector<std::pair<UavId, double>>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? ";" : "") + std::to_string(v[i].first) + ":" + format_fixed(v[i].second, 6);
        return s;
    };
    std::string flags;
    for (std::size_t i = 0; i < r.mission.adversarial.size(); ++i)
        flags += (i ? ";" : "") + std::to_string(r.mission.adversarial[i].first) + ":" +
                 (r.mission.adversarial[i].second ? "1" : "0");

    const std::vector<std::string> fields = {std::to_string(r.cycle),
                                             std::to_string(r.episode),
                                             r.strategy,
                                             r.marketplace,
                                             format_fixed(r.byzantine_pct, 2),
                                             r.mission.mission_id,
                                             to_string(r.mission.outcome),
                                             std::to_string(r.mission.completion_ticks),
                                             join_ids(),
                                             flags,
                                             join_scores(r.reputation_before),
                                             join_scores(r.reputation_after)};
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_field(fields[i]);
    return line;
}

namespace detail {

inline std::ofstream open_for_write(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ExportError("cannot write '" + path.string() + "'");
    return out;
}

inline void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ExportError("cannot create directory '" + dir.string() + "'");
}

}  // namespace detail

/// Writes `<strategy>.csv` for every strategy in `strategies` (header-only
/// when it has no episodes). Rows keep the (cycle, episode) order of `results`.
inline void export_csv(const std::vector<EpisodeResult>& results, const std::vector<std::string>& strategies,
                       const fs::path& out_dir) {
    detail::ensure_dir(out_dir);
    std::map<std::string, std::vector<const EpisodeResult*>> by_strategy;
    for (const auto& s : strategies) by_strategy[s];
    for (const auto& r : results) by_strategy[r.strategy].push_back(&r);
    for (const auto& [name, rows] : by_strategy) {
        auto out = detail::open_for_write(out_dir / (name + ".csv"));
        out << kCsvHeader << "\r\n";
        for (const auto* r : rows) out << csv_row(*r) << "\r\n";
        if (!out) throw ExportError("failed writing '" + name + ".csv'");
    }
}

inline std::string uav_log_name(int cycle, int episode, UavId id) {
    return "cycle" + std::to_string(cycle) + "_ep" + std::to_string(episode) + "_uav" + std::to_string(id) + ".log";
}

/// One tab-separated log per team member per episode.
inline void write_uav_logs(const std::vector<EpisodeResult>& results, const fs::path& out_dir) {
    detail::ensure_dir(out_dir);
    for (const auto& r : results) {
        for (UavId id : r.team) {
            auto out = detail::open_for_write(out_dir / uav_log_name(r.cycle, r.episode, id));
            for (const auto& e : r.mission.events) {
                if (e.uav != id) continue;
                out << e.tick << '\t' << e.uav << '\t' << to_string(e.kind) << '\t' << e.detail << '\n';
            }
        }
    }
}

/// Initial-grid hash per episode, used to check environment constancy.
inline void write_grid_log(const std::vector<EpisodeResult>& results, const fs::path& path) {
    auto out = detail::open_for_write(path);
    out << "cycle\tepisode\tstrategy\tgrid_hash\n";
    char hex[17];
    for (const auto& r : results) {
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(r.mission.grid_hash));
        out << r.cycle << '\t' << r.episode << '\t' << r.strategy << '\t' << hex << '\n';
    }
}

/// Full output tree of one run: per-strategy CSVs, `logs/` and `grids.tsv`.
inline void write_run_outputs(const std::vector<EpisodeResult>& results, const std::vector<std::string>& strategies,
                              const fs::path& out_dir) {
    export_csv(results, strategies, out_dir);
    write_uav_logs(results, out_dir / "logs");
    write_grid_log(results, out_dir / "grids.tsv");
}

// ---------------------------------------------------------------------------
// Summary

struct StrategySummary {
    std::string strategy;
    std::size_t episodes = 0;
    double success_rate = 0.0;
    std::optional<double> mean_ticks;    // successful episodes only
    std::optional<double> median_ticks;
    double mean_byzantine_per_team = 0.0;
    std::optional<double> mean_rep_change_byzantine;
    std::optional<double> mean_rep_change_cooperative;
};

namespace detail {

// "id:value;id:value" -> pairs
inline std::vector<std::pair<std::string, std::string>> split_pairs(const std::string& s) {
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ExportError("malformed id:value pair '" + item + "'");
        out.emplace_back(item.substr(0, colon), item.substr(colon + 1));
    }
    return out;
}

inline double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ExportError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw ExportError("not a number: '" + s + "'");
    return v;
}

inline std::optional<double> mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline std::optional<double> median_of(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::string na_or(const std::optional<double>& v, int decimals) {
    return v ? format_fixed(*v, decimals) : "NA";
}

}  // namespace detail

/// Aggregates one exported strategy CSV. UAVs flagged adversarial count as
/// Byzantine for the reputation-change split.
inline StrategySummary summarize_csv(const std::string& content) {
    std::stringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw ExportError("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw ExportError("unexpected CSV header");

    StrategySummary s;
    std::size_t successes = 0;
    double byz_members = 0.0;
    std::vector<double> ticks, byz_change, coop_change;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto f = parse_csv_line(line);
        if (f.size() != 12) throw ExportError("expected 12 columns, got " + std::to_string(f.size()));
        if (s.strategy.empty()) s.strategy = f[2];
        ++s.episodes;
        if (f[6] == "TargetFound") {
            ++successes;
            ticks.push_back(detail::parse_number(f[7]));
        }
        std::map<std::string, bool> adversarial;
        for (const auto& [id, v] : detail::split_pairs(f[9])) {
            adversarial[id] = v == "1";
            byz_members += v == "1";
        }
        std::map<std::string, double> before;
        for (const auto& [id, v] : detail::split_pairs(f[10])) before[id] = detail::parse_number(v);
        for (const auto& [id, v] : detail::split_pairs(f[11])) {
            const double delta = detail::parse_number(v) - before[id];
            (adversarial[id] ? byz_change : coop_change).push_back(delta);
        }
    }
    if (s.episodes > 0) {
        s.success_rate = static_cast<double>(successes) / static_cast<double>(s.episodes);
        s.mean_byzantine_per_team = byz_members / static_cast<double>(s.episodes);
    }
    s.mean_ticks = detail::mean_of(ticks);
    s.median_ticks = detail::median_of(ticks);
    s.mean_rep_change_byzantine = detail::mean_of(byz_change);
    s.mean_rep_change_cooperative = detail::mean_of(coop_change);
    return s;
}

/// Summaries for every `*.csv` in `csv_dir` except summary.csv, sorted by name.
inline std::vector<StrategySummary> summarize(const fs::path& csv_dir) {
    if (!fs::is_directory(csv_dir)) throw ExportError("not a directory: '" + csv_dir.string() + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(csv_dir)) {
        const auto& p = entry.path();
        if (entry.is_regular_file() && p.extension() == ".csv" && p.filename() != "summary.csv") files.push_back(p);
    }
    if (files.empty()) throw ExportError("no strategy CSV files in '" + csv_dir.string() + "'");
    std::sort(files.begin(), files.end());

    std::vector<StrategySummary> out;
    for (const auto& p : files) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        StrategySummary s;
        try {
            s = summarize_csv(buf.str());
        } catch (const ExportError& e) {
            throw ExportError(p.filename().string() + ": " + e.what());
        }
        if (s.strategy.empty()) s.strategy = p.stem().string();
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<std::string> summary_fields(const StrategySummary& s) {
    return {s.strategy,
            std::to_string(s.episodes),
            format_fixed(s.success_rate, 4),
            detail::na_or(s.mean_ticks, 2),
            detail::na_or(s.median_ticks, 2),
            format_fixed(s.mean_byzantine_per_team, 4),
            detail::na_or(s.mean_rep_change_byzantine, 6),
            detail::na_or(s.mean_rep_change_cooperative, 6)};
}

inline const std::vector<std::string>& summary_columns() {
    static const std::vector<std::string> cols = {
        "strategy",        "episodes",           "success_rate",          "mean_ticks", "median_ticks",
        "mean_byz_per_team", "mean_rep_change_byz", "mean_rep_change_coop"};
    return cols;
}

inline std::string summary_csv(const std::vector<StrategySummary>& rows) {
    std::string out;
    const auto& cols = summary_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
    out += "\r\n";
    for (const auto& s : rows) {
        const auto f = summary_fields(s);
        for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + csv_field(f[i]);
        out += "\r\n";
    }
    return out;
}

inline std::string summary_table(const std::vector<StrategySummary>& rows) {
    std::vector<std::vector<std::string>> cells = {summary_columns()};
    for (const auto& s : rows) cells.push_back(summary_fields(s));
    std::vector<std::size_t> width(cells[0].size(), 0);
    for (const auto& r : cells)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    std::string out;
    for (const auto& r : cells) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += "  ";
            out += i == 0 ? r[i] + std::string(width[i] - r[i].size(), ' ')
                          : std::string(width[i] - r[i].size(), ' ') + r[i];
        }
        out += '\n';
    }
    return out;
}

inline void write_summary(const std::vector<StrategySummary>& rows, const fs::path& csv_dir) {
    auto out = detail::open_for_write(csv_dir / "summary.csv");
    out << summary_csv(rows);
}

}  // namespace umssim
