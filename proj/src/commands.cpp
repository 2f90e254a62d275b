#include "voltpath/commands.h"

#include "voltpath/csv.h"
#include "voltpath/digest.h"
#include "voltpath/metrics.h"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

#ifndef VOLTPATH_VERSION
#define VOLTPATH_VERSION "0.0.0"
#endif

namespace voltpath::report {

namespace {

namespace fs = std::filesystem;
using ingest::ParseMode;
using ingest::ScenarioTable;
using ingest::TableKind;

/// Configured scenario absent from the energy table.
class MissingScenario : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs failed validation; the violations were already reported.
class DataFindings : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ScenarioTable read_table(const fs::path& path, TableKind kind, ParseMode mode)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read '" + path.string() + "'");
    }
    try {
        return ingest::parse_scenario_csv(in, kind, mode);
    } catch (const ingest::IngestError& e) {
        throw ConfigError(path.filename().string() + ": " + e.what());
    }
}

ingest::BAAllocationMap read_ba_map(const fs::path& path)
{
    if (path.empty()) {
        throw ConfigError("config does not name a ba_map file");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read '" + path.string() + "'");
    }
    try {
        return ingest::load_ba_map(in);
    } catch (const ingest::IngestError& e) {
        throw ConfigError(path.filename().string() + ": " + e.what());
    }
}

ScenarioTable read_inputs(const RunConfig& cfg, ParseMode mode, bool need_fleet)
{
    if (cfg.energy.empty()) {
        throw ConfigError("config does not name an energy file");
    }
    auto table = read_table(cfg.energy, TableKind::Energy, mode);
    if (!cfg.fleet.empty()) {
        table.merge(read_table(cfg.fleet, TableKind::Fleet, mode));
    } else if (need_fleet) {
        throw ConfigError("config does not name a fleet file");
    }
    if (!cfg.population.empty()) {
        table.merge(read_table(cfg.population, TableKind::Population, mode));
    }
    return table;
}

/// Years with energy records for the configured scenarios, used when the
/// config leaves `years` empty.
void fill_years(RunConfig& cfg, const ScenarioTable& table)
{
    if (!cfg.years.empty()) {
        std::sort(cfg.years.begin(), cfg.years.end());
        cfg.years.erase(std::unique(cfg.years.begin(), cfg.years.end()), cfg.years.end());
        return;
    }
    std::set<int> years;
    for (const auto& r : table.energy) {
        if (std::find(cfg.scenarios.begin(), cfg.scenarios.end(), r.scenario) != cfg.scenarios.end()) {
            years.insert(r.year);
        }
    }
    cfg.years.assign(years.begin(), years.end());
}

bool has_scenario(const ScenarioTable& table, const ScenarioId& s)
{
    return std::any_of(table.energy.begin(), table.energy.end(),
                       [&](const auto& r) { return r.scenario == s; });
}

void report_violations(const ingest::ValidationReport& report, std::ostream& out)
{
    out << "code,key,detail\n";
    for (const auto& v : report) {
        out << csv::escape_field(v.code) << ',' << csv::escape_field(v.key) << ','
            << csv::escape_field(v.detail) << '\n';
    }
}

/// Strictly parsed, validated inputs with years resolved.
struct Inputs {
    RunConfig cfg;
    ScenarioTable table;
};

Inputs prepare(const CommandOptions& options, bool need_fleet, std::ostream& out)
{
    Inputs in{resolve_config(options), {}};
    in.table = read_inputs(in.cfg, ParseMode::Strict, need_fleet);
    const auto report = ingest::validate_table(in.table);
    if (!report.empty()) {
        report_violations(report, out);
        throw DataFindings(fmt::format("{} validation finding(s); run `validate` for details", report.size()));
    }
    for (const auto& s : in.cfg.scenarios) {
        if (!has_scenario(in.table, s)) {
            throw MissingScenario("scenario '" + s.str() + "' has no energy records");
        }
    }
    fill_years(in.cfg, in.table);
    return in;
}

std::string fmt_optional(const std::optional<double>& v) { return v ? csv::format_double(*v) : ""; }

void add_fraction_rows(std::vector<MetricRow>& rows, const MetricRow& base, const std::string& metric,
                       const std::string& label, auto&& compute)
{
    MetricRow row = base;
    row.metric = metric;
    row.fuel_or_class = label;
    try {
        row.value = compute();
    } catch (const metrics::MetricsError& e) {
        row.status = std::string(metrics::to_token(e.kind()));
    }
    rows.push_back(std::move(row));
}

std::set<VehicleClass> road_subset(const std::set<VehicleClass>& classes)
{
    std::set<VehicleClass> road;
    for (auto c : classes) {
        if (is_road(c)) {
            road.insert(c);
        }
    }
    return road;
}

void write_manifest(const fs::path& path, const RunConfig& cfg, const ScenarioTable& table,
                    const ingest::BAAllocationMap& map, const std::vector<ScenarioYearLoads>& loads,
                    const std::vector<fs::path>& outputs)
{
    using nlohmann::ordered_json;
    ordered_json manifest;
    manifest["tool"] = "voltpath";
    manifest["version"] = VOLTPATH_VERSION;
    manifest["seed"] = cfg.seed;
    manifest["config_digest"] = sha256_hex(canonical_text(cfg));

    ordered_json inputs = ordered_json::object();
    const std::pair<const char*, const fs::path*> named[] = {
        {"energy", &cfg.energy}, {"fleet", &cfg.fleet}, {"population", &cfg.population}, {"ba_map", &cfg.ba_map}};
    for (const auto& [name, p] : named) {
        if (!p->empty()) {
            inputs[name] = {{"file", p->filename().string()}, {"sha256", sha256_file(*p)}};
        }
    }
    manifest["inputs"] = inputs;

    SimulationCounts counts;
    for (const auto& l : loads) {
        counts.sessions += l.counts.sessions;
        counts.clipped += l.counts.clipped;
        counts.enroute_split += l.counts.enroute_split;
        counts.enroute_infeasible += l.counts.enroute_infeasible;
    }
    manifest["counts"] = {
        {"energy_records", table.energy.size()},
        {"fleet_records", table.fleet.size()},
        {"population_records", table.population.size()},
        {"ba_map_keys", map.entries().size()},
        {"scenario_years", loads.size()},
        {"sessions", counts.sessions},
        {"clipped_sessions", counts.clipped},
        {"enroute_split", counts.enroute_split},
        {"enroute_infeasible", counts.enroute_infeasible},
    };

    ordered_json files = ordered_json::array();
    for (const auto& p : outputs) {
        files.push_back({{"file", p.filename().string()}, {"sha256", sha256_file(p)}});
    }
    manifest["outputs"] = files;
    write_atomic(path, [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
}

std::vector<fs::path> write_loads(const RunConfig& cfg, const std::vector<ScenarioYearLoads>& loads)
{
    // Build every output map first so a reserved-id clash aborts before any file is written.
    std::vector<std::map<std::string, std::vector<double>>> series;
    series.reserve(loads.size());
    for (const auto& l : loads) {
        series.push_back(l.output_series());
    }
    fs::create_directories(cfg.out);
    std::vector<fs::path> written;
    for (std::size_t i = 0; i < loads.size(); ++i) {
        const auto& l = loads[i];
        const auto path = cfg.out / fmt::format("load_{}_{}.csv", l.scenario.str(), l.year);
        write_atomic(path, [&](std::ostream& out) { downscale::write_load_csv(out, l.year, series[i]); });
        written.push_back(path);
        if (cfg.session_dump) {
            const auto dump = cfg.out / fmt::format("sessions_{}_{}.csv", l.scenario.str(), l.year);
            write_atomic(dump, [&](std::ostream& out) {
                sim::write_session_dump_header(out);
                for (std::size_t m = 0; m < l.sessions_by_month.size(); ++m) {
                    sim::write_session_dump(out, l.sessions_by_month[m], static_cast<int>(m + 1));
                }
            });
            written.push_back(dump);
        }
    }
    return written;
}

std::vector<ScenarioYearLoads> simulate(const RunConfig& cfg, const ScenarioTable& table,
                                        const ingest::BAAllocationMap& map, const CommandOptions& options)
{
    PipelineOptions po;
    po.threads = options.threads.value_or(thread_budget());
    po.keep_sessions = cfg.session_dump;
    return run_downscale(cfg, table, map, po);
}

std::pair<ScenarioId, ScenarioId> comparison_pair(const RunConfig& cfg, const ScenarioTable& table)
{
    if (cfg.scenarios.size() < 2) {
        throw ConfigError("compare needs two scenarios (config `scenarios` or repeated --scenario)");
    }
    for (std::size_t i = 0; i < 2; ++i) {
        if (!has_scenario(table, cfg.scenarios[i])) {
            throw MissingScenario("scenario '" + cfg.scenarios[i].str() + "' has no energy records");
        }
    }
    return {cfg.scenarios[0], cfg.scenarios[1]};
}

/// Maps exceptions to the exit-status contract.
int guarded(std::ostream& err, const std::function<int()>& body)
{
    try {
        return body();
    } catch (const DataFindings& e) {
        err << "error: " << e.what() << '\n';
        return kExitFindings;
    } catch (const downscale::DownscaleError& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == downscale::DownscaleError::Kind::UnmappedState ? kExitFindings : kExitEnvironment;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitEnvironment;
    }
}

int run_metrics(const Inputs& in, std::ostream& out)
{
    const auto rows = metric_rows(in.cfg, in.table);
    fs::create_directories(in.cfg.out);
    const auto path = in.cfg.out / "metrics.csv";
    write_atomic(path, [&](std::ostream& os) { write_metrics_csv(os, rows); });
    out << fmt::format("wrote {} ({} rows)\n", path.string(), rows.size());
    return kExitOk;
}

int run_compare(const Inputs& in, const std::vector<ScenarioYearLoads>& loads, const ScenarioId& a,
                const ScenarioId& b, std::ostream& out)
{
    const auto rows = comparison_rows(in.cfg, in.table, loads, a, b);
    fs::create_directories(in.cfg.out);
    const auto path = in.cfg.out / "comparison.csv";
    write_atomic(path, [&](std::ostream& os) { write_comparison_csv(os, rows); });
    out << fmt::format("wrote {} ({} rows)\n", path.string(), rows.size());
    return kExitOk;
}

int run_downscale_outputs(const Inputs& in, const ingest::BAAllocationMap& map,
                          const std::vector<ScenarioYearLoads>& loads, std::ostream& out)
{
    const auto written = write_loads(in.cfg, loads);
    write_manifest(in.cfg.out / "manifest.json", in.cfg, in.table, map, loads, written);
    out << fmt::format("wrote {} file(s) and manifest.json to {}\n", written.size(), in.cfg.out.string());
    return kExitOk;
}

} // namespace

RunConfig resolve_config(const CommandOptions& options)
{
    auto cfg = load_run_config(options.config);
    if (options.seed) {
        cfg.seed = *options.seed;
    }
    if (options.out) {
        cfg.out = *options.out;
    }
    if (!options.scenarios.empty()) {
        cfg.scenarios.clear();
        for (const auto& s : options.scenarios) {
            if (!ScenarioId::is_valid(s)) {
                throw ConfigError("--scenario: invalid scenario id '" + s + "'");
            }
            cfg.scenarios.emplace_back(s);
        }
    }
    if (!options.years.empty()) {
        cfg.years = options.years;
    }
    cfg.validate();
    return cfg;
}

void write_atomic(const fs::path& target, const std::function<void(std::ostream&)>& body)
{
    auto tmp = target;
    tmp += ".partial";
    try {
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw std::runtime_error("cannot write '" + tmp.string() + "'");
            }
            body(out);
            out.flush();
            if (!out) {
                throw std::runtime_error("write to '" + tmp.string() + "' failed");
            }
        }
        fs::rename(tmp, target);
    } catch (...) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

std::vector<MetricRow> metric_rows(const RunConfig& cfg, const ScenarioTable& table)
{
    std::vector<MetricRow> rows;
    const auto road = road_subset(cfg.region.vclasses);
    for (const auto& scenario : cfg.scenarios) {
        for (int year : cfg.years) {
            auto emit = [&](const metrics::RegionFilter& region, const std::string& label) {
                const MetricRow base{scenario.str(), year, label, {}, {}, {}, "ok"};
                if (!road.empty()) {
                    const auto road_region = region.with_classes(road);
                    add_fraction_rows(rows, base, "ev_energy_fraction", "road", [&] {
                        return metrics::ev_energy_fraction(table, scenario, year, road_region);
                    });
                    add_fraction_rows(rows, base, "ev_fleet_fraction", "road", [&] {
                        return metrics::ev_fleet_fraction(table, scenario, year, road_region);
                    });
                }
                const auto mix = metrics::fuel_mix(table, scenario, year, region);
                for (auto f : kAllFuels) {
                    MetricRow row = base;
                    row.metric = "fuel_mix";
                    row.fuel_or_class = std::string(to_token(f));
                    row.value = mix[f];
                    rows.push_back(std::move(row));
                }
            };

            emit(cfg.region, cfg.region.name);
            for (auto c : road) {
                const auto one = cfg.region.with_classes({c});
                const MetricRow base{scenario.str(), year, cfg.region.name, {}, {}, {}, "ok"};
                add_fraction_rows(rows, base, "ev_energy_fraction", std::string(to_token(c)), [&] {
                    return metrics::ev_energy_fraction(table, scenario, year, one);
                });
                add_fraction_rows(rows, base, "ev_fleet_fraction", std::string(to_token(c)), [&] {
                    return metrics::ev_fleet_fraction(table, scenario, year, one);
                });
            }

            std::set<StateCode> states = cfg.region.states;
            if (states.empty()) {
                for (const auto& r : table.energy) {
                    if (r.scenario == scenario && r.year == year) {
                        states.insert(r.state);
                    }
                }
            }
            for (const auto& state : states) {
                emit(cfg.region.single_state(state), state.str());
                std::optional<metrics::FuelMix> per_capita;
                std::string status = "ok";
                try {
                    per_capita = metrics::fuel_mix_per_capita(table, scenario, year, state);
                } catch (const metrics::MetricsError& e) {
                    status = std::string(metrics::to_token(e.kind()));
                }
                for (auto f : kAllFuels) {
                    MetricRow row{scenario.str(), year, state.str(), "fuel_mix_per_capita",
                                  std::string(to_token(f)), {}, status};
                    if (per_capita) {
                        row.value = (*per_capita)[f];
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows)
{
    out << "scenario,year,region,metric,fuel_or_class,value,status\n";
    for (const auto& r : rows) {
        out << csv::escape_field(r.scenario) << ',' << r.year << ',' << csv::escape_field(r.region) << ','
            << r.metric << ',' << r.fuel_or_class << ',' << fmt_optional(r.value) << ',' << r.status << '\n';
    }
}

std::vector<ComparisonRow> comparison_rows(const RunConfig& cfg, const ScenarioTable& table,
                                           const std::vector<ScenarioYearLoads>& loads,
                                           const ScenarioId& a, const ScenarioId& b)
{
    auto find = [&](const ScenarioId& s, int year) -> const ScenarioYearLoads& {
        for (const auto& l : loads) {
            if (l.scenario == s && l.year == year) {
                return l;
            }
        }
        throw MissingScenario(fmt::format("no load series for {} {}", s.str(), year));
    };
    const auto road = road_subset(cfg.region.vclasses);
    const auto road_region = cfg.region.with_classes(road);

    std::vector<ComparisonRow> rows;
    for (int year : cfg.years) {
        const auto& la = find(a, year);
        const auto& lb = find(b, year);
        const auto sa = downscale::load_stats(la.total);
        const auto sb = downscale::load_stats(lb.total);
        const auto gap_a = downscale::seasonal_peak_gap(downscale::seasonal_average(la.total));
        const auto gap_b = downscale::seasonal_peak_gap(downscale::seasonal_average(lb.total));

        auto add = [&](std::string metric, std::optional<double> va, std::optional<double> vb, std::string unit) {
            ComparisonRow row{year, a.str(), b.str(), std::move(metric), va, vb, std::nullopt, std::move(unit)};
            if (va && vb) {
                if (*va == *vb) {
                    row.delta = 0.0;
                } else if (*va != 0.0) {
                    row.delta = metrics::scenario_delta(*va, *vb);
                }
            }
            rows.push_back(std::move(row));
        };
        auto fraction = [&](auto&& fn, const ScenarioId& s) -> std::optional<double> {
            if (road.empty()) {
                return std::nullopt;
            }
            try {
                return fn(table, s, year, road_region);
            } catch (const metrics::MetricsError&) {
                return std::nullopt;
            }
        };

        add("peak_load", sa.peak, sb.peak, "MW");
        add("valley_load", sa.valley, sb.valley, "MW");
        add("spread", sa.spread, sb.spread, "MW");
        add("seasonal_peak_gap", gap_a, gap_b, "MW");
        add("ev_energy_fraction", fraction(metrics::ev_energy_fraction, a),
            fraction(metrics::ev_energy_fraction, b), "fraction");
        add("ev_fleet_fraction", fraction(metrics::ev_fleet_fraction, a),
            fraction(metrics::ev_fleet_fraction, b), "fraction");
    }
    return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows)
{
    out << "year,scenario_a,scenario_b,metric,value_a,value_b,delta,unit\n";
    for (const auto& r : rows) {
        out << r.year << ',' << r.scenario_a << ',' << r.scenario_b << ',' << r.metric << ','
            << fmt_optional(r.value_a) << ',' << fmt_optional(r.value_b) << ',' << fmt_optional(r.delta) << ','
            << r.unit << '\n';
    }
}

int cmd_validate(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto cfg = resolve_config(options);
        const auto table = read_inputs(cfg, ParseMode::Lenient, false);
        auto report = ingest::validate_table(table);
        for (const auto& s : cfg.scenarios) {
            if (!has_scenario(table, s)) {
                report.push_back({"missing_scenario", s.str(), "no energy records for configured scenario"});
            }
        }
        if (!cfg.ba_map.empty()) {
            const auto map = read_ba_map(cfg.ba_map);
            std::set<std::pair<StateCode, VClassGroup>> reported;
            for (const auto& r : table.energy) {
                const auto key = std::make_pair(r.state, group_of(r.vclass));
                if (cfg.region.contains(r.state) && map.find(key.first, key.second) == nullptr
                    && reported.insert(key).second) {
                    report.push_back({"unmapped_state", key.first.str() + "," + std::string(to_token(key.second)),
                                      "no BA allocation for this state and vehicle group"});
                }
            }
        }
        report_violations(report, out);
        err << fmt::format("{} energy, {} fleet, {} population records; {} finding(s)\n", table.energy.size(),
                           table.fleet.size(), table.population.size(), report.size());
        return report.empty() ? kExitOk : kExitFindings;
    });
}

int cmd_metrics(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] { return run_metrics(prepare(options, false, out), out); });
}

int cmd_downscale(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const auto in = prepare(options, false, out);
        const auto map = read_ba_map(in.cfg.ba_map);
        const auto loads = simulate(in.cfg, in.table, map, options);
        return run_downscale_outputs(in, map, loads, out);
    });
}

int cmd_compare(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto in = prepare(options, false, out);
        const auto [a, b] = comparison_pair(in.cfg, in.table);
        in.cfg.scenarios = {a, b};
        const auto map = read_ba_map(in.cfg.ba_map);
        const auto loads = simulate(in.cfg, in.table, map, options);
        return run_compare(in, loads, a, b, out);
    });
}

int cmd_all(const CommandOptions& options, std::ostream& out, std::ostream& err)
{
    const int status = cmd_validate(options, out, err);
    if (status != kExitOk) {
        return status;
    }
    return guarded(err, [&] {
        const auto in = prepare(options, false, out);
        run_metrics(in, out);
        const auto map = read_ba_map(in.cfg.ba_map);
        const auto loads = simulate(in.cfg, in.table, map, options);
        if (in.cfg.scenarios.size() >= 2) {
            const auto [a, b] = comparison_pair(in.cfg, in.table);
            run_compare(in, loads, a, b, out);
        }
        return run_downscale_outputs(in, map, loads, out);
    });
}

} // namespace voltpath::report
