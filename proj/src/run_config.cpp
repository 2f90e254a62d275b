#include "voltpath/run_config.h"

#include "voltpath/csv.h"
#include "voltpath/scenario_ingest.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace voltpath::report {

namespace {

namespace fs = std::filesystem;

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        auto end = value.find(',', start);
        if (end == std::string::npos) {
            end = value.size();
        }
        auto item = trim(std::string_view(value).substr(start, end - start));
        if (!item.empty()) {
            items.push_back(std::move(item));
        }
        start = end + 1;
    }
    return items;
}

double to_double(const std::string& key, const std::string& text)
{
    const auto v = csv::parse_double(text);
    if (!v || !std::isfinite(*v)) {
        throw ConfigError(key + ": '" + text + "' is not a number");
    }
    return *v;
}

long long to_int(const std::string& key, const std::string& text)
{
    const auto v = csv::parse_int(text);
    if (!v) {
        throw ConfigError(key + ": '" + text + "' is not an integer");
    }
    return *v;
}

std::vector<double> to_doubles(const std::string& key, const std::string& value)
{
    std::vector<double> out;
    for (const auto& item : split_list(value)) {
        out.push_back(to_double(key, item));
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw ConfigError(key + ": expected true or false");
}

sim::TruncatedNormal to_truncated_normal(const std::string& key, const std::string& value)
{
    const auto v = to_doubles(key, value);
    if (v.size() != 4) {
        throw ConfigError(key + ": expected mean, stddev, lower, upper");
    }
    return {v[0], v[1], v[2], v[3]};
}

sim::StrategyMix to_mix(const std::string& key, const std::string& value)
{
    const auto v = to_doubles(key, value);
    if (v.size() != 3) {
        throw ConfigError(key + ": expected immediate, min_power, delayed weights");
    }
    return sim::StrategyMix{{v[0], v[1], v[2]}};
}

int to_year(const std::string& key, const std::string& text)
{
    const auto year = to_int(key, text);
    if (!ingest::is_model_year(static_cast<int>(year))) {
        throw ConfigError(key + ": year " + text + " is not a model year (2015-2100, step 5)");
    }
    return static_cast<int>(year);
}

StateCode to_state(const std::string& key, const std::string& text)
{
    if (!StateCode::is_well_formed(text)) {
        throw ConfigError(key + ": '" + text + "' is not a state code");
    }
    return StateCode(text);
}

void apply_mobility_key(sim::MobilityConfig& m, const std::string& key, std::string_view rest,
                        const std::string& value)
{
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos) {
        throw ConfigError("unknown key '" + key + "'");
    }
    const auto vclass = parse_vehicle_class(rest.substr(0, dot));
    if (!vclass || !is_road(*vclass)) {
        throw ConfigError(key + ": mobility parameters exist only for ldv, mdv and hdv");
    }
    const auto field = rest.substr(dot + 1);
    auto& cls = m.classes[*vclass];
    if (field == "arrival_hour") {
        cls.arrival_hour = to_truncated_normal(key, value);
    } else if (field == "dwell_minutes") {
        cls.dwell_minutes = to_truncated_normal(key, value);
    } else if (field == "energy_kwh") {
        cls.energy_kwh = to_truncated_normal(key, value);
    } else if (field == "charger_kw") {
        cls.charger.levels_kw = to_doubles(key, value);
    } else if (field == "charger_weights") {
        cls.charger.weights = to_doubles(key, value);
    } else if (field == "sessions_per_day") {
        cls.sessions_per_day = to_double(key, value);
    } else if (field == "monthly_factors" && *vclass == VehicleClass::LDV) {
        const auto v = to_doubles(key, value);
        if (v.size() != 12) {
            throw ConfigError(key + ": expected 12 values");
        }
        std::array<double, 12> factors{};
        std::copy(v.begin(), v.end(), factors.begin());
        m.ldv_monthly_factors = factors;
    } else {
        throw ConfigError("unknown key '" + key + "'");
    }
}

} // namespace

void RunConfig::validate() const
{
    if (scenarios.empty()) {
        throw ConfigError("at least one scenario is required");
    }
    for (int y : years) {
        if (!ingest::is_model_year(y)) {
            throw ConfigError("year " + std::to_string(y) + " is not a model year (2015-2100, step 5)");
        }
    }
    if (region.vclasses.empty()) {
        throw ConfigError("region.vclasses must not be empty");
    }
    try {
        mobility.validate();
    } catch (const sim::SessionError& e) {
        throw ConfigError(std::string("mobility: ") + e.what());
    }
}

std::optional<std::uint64_t> parse_seed(std::string_view text)
{
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
        return std::nullopt;
    }
    return value;
}

RunConfig parse_run_config(std::istream& in, const fs::path& base_dir)
{
    RunConfig cfg;
    cfg.region.name = "all";
    cfg.region.vclasses = {kAllVehicleClasses.begin(), kAllVehicleClasses.end()};
    std::set<std::string> seen;
    bool strategy_defaults_cleared = false;

    auto resolve = [&](const std::string& p) {
        fs::path path(p);
        return path.is_absolute() ? path : (base_dir / path).lexically_normal();
    };

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const auto line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(fmt::format("line {}: expected key = value", line_no));
        }
        const auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(fmt::format("line {}: empty key", line_no));
        }
        if (!seen.insert(key).second) {
            throw ConfigError(fmt::format("line {}: key '{}' given twice", line_no, key));
        }
        const std::string_view k(key);

        if (key == "energy") {
            cfg.energy = resolve(value);
        } else if (key == "fleet") {
            cfg.fleet = resolve(value);
        } else if (key == "population") {
            cfg.population = resolve(value);
        } else if (key == "ba_map") {
            cfg.ba_map = resolve(value);
        } else if (key == "out") {
            cfg.out = resolve(value);
        } else if (key == "seed") {
            const auto s = parse_seed(value);
            if (!s) {
                throw ConfigError("seed: expected an unsigned 64-bit integer");
            }
            cfg.seed = *s;
        } else if (key == "scenarios") {
            for (const auto& item : split_list(value)) {
                if (!ScenarioId::is_valid(item)) {
                    throw ConfigError("scenarios: invalid scenario id '" + item + "'");
                }
                cfg.scenarios.emplace_back(item);
            }
        } else if (key == "years") {
            for (const auto& item : split_list(value)) {
                cfg.years.push_back(to_year(key, item));
            }
        } else if (key == "session_dump") {
            cfg.session_dump = to_bool(key, value);
        } else if (key == "region.name") {
            cfg.region.name = value;
        } else if (key == "region.states") {
            for (const auto& item : split_list(value)) {
                cfg.region.states.insert(to_state(key, item));
            }
        } else if (key == "region.vclasses") {
            cfg.region.vclasses.clear();
            for (const auto& item : split_list(value)) {
                const auto c = parse_vehicle_class(item);
                if (!c) {
                    throw ConfigError("region.vclasses: unknown class '" + item + "'");
                }
                cfg.region.vclasses.insert(*c);
            }
        } else if (k.starts_with("strategy_mix.")) {
            const auto rest = k.substr(std::string_view("strategy_mix.").size());
            const auto dot = rest.rfind('.');
            if (dot == std::string_view::npos) {
                if (!strategy_defaults_cleared) {
                    cfg.mobility.strategy_by_year.clear();
                    strategy_defaults_cleared = true;
                }
                cfg.mobility.strategy_by_year[to_year(key, std::string(rest))] = to_mix(key, value);
            } else {
                const std::string scenario(rest.substr(0, dot));
                if (!ScenarioId::is_valid(scenario)) {
                    throw ConfigError(key + ": invalid scenario id");
                }
                const int year = to_year(key, std::string(rest.substr(dot + 1)));
                cfg.mobility.strategy_by_scenario_year[{scenario, year}] = to_mix(key, value);
            }
        } else if (key == "enroute.enabled") {
            cfg.mobility.enroute.enabled = to_bool(key, value);
        } else if (key == "enroute.depot_share") {
            cfg.mobility.enroute.depot_share = to_double(key, value);
        } else if (key == "enroute.start_buffer_min") {
            cfg.mobility.enroute.start_buffer_min = to_double(key, value);
        } else if (key == "enroute.end_buffer_min") {
            cfg.mobility.enroute.end_buffer_min = to_double(key, value);
        } else if (key == "enroute.route_minutes") {
            cfg.mobility.enroute.route_minutes = to_truncated_normal(key, value);
        } else if (key == "utc_offset.default") {
            cfg.mobility.default_utc_offset_hours = static_cast<int>(to_int(key, value));
        } else if (k.starts_with("utc_offset.")) {
            const auto state = to_state(key, std::string(k.substr(std::string_view("utc_offset.").size())));
            const auto hours = to_int(key, value);
            if (hours < -12 || hours > 14) {
                throw ConfigError(key + ": offset outside [-12, 14]");
            }
            cfg.mobility.utc_offset_hours[state.str()] = static_cast<int>(hours);
        } else if (k.starts_with("mobility.")) {
            apply_mobility_key(cfg.mobility, key, k.substr(std::string_view("mobility.").size()), value);
        } else {
            throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
        }
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config '" + path.string() + "'");
    }
    return parse_run_config(in, path.parent_path());
}

std::string canonical_text(const RunConfig& cfg)
{
    std::map<std::string, std::string> kv;
    auto list = [](const auto& items, auto&& fmt_item) {
        std::string out;
        for (const auto& item : items) {
            if (!out.empty()) {
                out += ',';
            }
            out += fmt_item(item);
        }
        return out;
    };
    auto num = [](double v) { return csv::format_double(v); };
    auto tn = [&](const sim::TruncatedNormal& t) {
        return list(std::array<double, 4>{t.mean, t.stddev, t.lower, t.upper}, num);
    };

    kv["energy"] = cfg.energy.filename().string();
    kv["fleet"] = cfg.fleet.filename().string();
    kv["population"] = cfg.population.filename().string();
    kv["ba_map"] = cfg.ba_map.filename().string();
    kv["scenarios"] = list(cfg.scenarios, [](const ScenarioId& s) { return s.str(); });
    kv["years"] = list(cfg.years, [](int y) { return std::to_string(y); });
    kv["seed"] = std::to_string(cfg.seed);
    kv["session_dump"] = cfg.session_dump ? "true" : "false";
    kv["region.name"] = cfg.region.name;
    kv["region.states"] = list(cfg.region.states, [](const StateCode& s) { return s.str(); });
    kv["region.vclasses"] = list(cfg.region.vclasses, [](VehicleClass c) { return std::string(to_token(c)); });

    const auto& m = cfg.mobility;
    for (const auto& [c, cls] : m.classes) {
        const auto prefix = "mobility." + std::string(to_token(c)) + ".";
        kv[prefix + "arrival_hour"] = tn(cls.arrival_hour);
        kv[prefix + "dwell_minutes"] = tn(cls.dwell_minutes);
        kv[prefix + "energy_kwh"] = tn(cls.energy_kwh);
        kv[prefix + "charger_kw"] = list(cls.charger.levels_kw, num);
        kv[prefix + "charger_weights"] = list(cls.charger.weights, num);
        kv[prefix + "sessions_per_day"] = num(cls.sessions_per_day);
    }
    if (m.ldv_monthly_factors) {
        kv["mobility.ldv.monthly_factors"] = list(*m.ldv_monthly_factors, num);
    }
    for (const auto& [year, mix] : m.strategy_by_year) {
        kv["strategy_mix." + std::to_string(year)] = list(mix.weights, num);
    }
    for (const auto& [key, mix] : m.strategy_by_scenario_year) {
        kv["strategy_mix." + key.first + "." + std::to_string(key.second)] = list(mix.weights, num);
    }
    kv["enroute.enabled"] = m.enroute.enabled ? "true" : "false";
    kv["enroute.depot_share"] = num(m.enroute.depot_share);
    kv["enroute.start_buffer_min"] = num(m.enroute.start_buffer_min);
    kv["enroute.end_buffer_min"] = num(m.enroute.end_buffer_min);
    kv["enroute.route_minutes"] = tn(m.enroute.route_minutes);
    kv["utc_offset.default"] = std::to_string(m.default_utc_offset_hours);
    for (const auto& [state, hours] : m.utc_offset_hours) {
        kv["utc_offset." + state] = std::to_string(hours);
    }

    std::string text;
    for (const auto& [k, v] : kv) {
        text += k + " = " + v + "\n";
    }
    return text;
}

} // namespace voltpath::report
