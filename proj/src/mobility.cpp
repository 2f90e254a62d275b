#include "voltpath/mobility.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace voltpath::sim {

namespace {

constexpr double kWeightTolerance = 1e-9;
constexpr int kMaxRejections = 10000;

[[noreturn]] void bad_config(const std::string& message)
{
    throw SessionError(SessionError::Kind::BadConfig, message);
}

void check_weights(const std::string& name, const auto& weights)
{
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            bad_config(name + ": negative weight");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightTolerance) {
        bad_config(name + ": weights sum to " + std::to_string(sum));
    }
}

std::size_t pick(SeededRng& rng, const auto& weights)
{
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) {
            continue;
        }
        last = i;
        acc += weights[i];
        if (u < acc) {
            return i;
        }
    }
    return last;
}

} // namespace

std::string_view to_token(Strategy s)
{
    switch (s) {
    case Strategy::Immediate: return "immediate";
    case Strategy::MinPower: return "min_power";
    case Strategy::Delayed: return "delayed";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view token)
{
    if (token == "immediate" || token == "min_delay") {
        return Strategy::Immediate;
    }
    if (token == "min_power" || token == "load_level") {
        return Strategy::MinPower;
    }
    if (token == "delayed") {
        return Strategy::Delayed;
    }
    return std::nullopt;
}

double TruncatedNormal::sample(SeededRng& rng) const
{
    for (int i = 0; i < kMaxRejections; ++i) {
        const double x = mean + stddev * rng.standard_normal();
        if (x >= lower && x < upper) {
            return x;
        }
    }
    // Only reachable when the window sits far in a tail.
    return std::clamp(mean, lower, std::nextafter(upper, lower));
}

void TruncatedNormal::validate(const std::string& name) const
{
    if (!(stddev > 0.0) || !(lower < upper) || !std::isfinite(mean)) {
        bad_config(name + ": needs stddev > 0 and lower < upper");
    }
}

double PowerMixture::sample(SeededRng& rng) const { return levels_kw[pick(rng, weights)]; }

double PowerMixture::max_level() const
{
    double best = 0.0;
    for (std::size_t i = 0; i < levels_kw.size(); ++i) {
        if (weights[i] > 0.0) {
            best = std::max(best, levels_kw[i]);
        }
    }
    return best;
}

void PowerMixture::validate(const std::string& name) const
{
    if (levels_kw.empty() || levels_kw.size() != weights.size()) {
        bad_config(name + ": levels and weights must be non-empty and equally long");
    }
    for (double kw : levels_kw) {
        if (!(kw >= kMinChargerKw && kw <= kMaxChargerKw)) {
            bad_config(name + ": charger level " + std::to_string(kw) + " kW outside [3.7, 500]");
        }
    }
    check_weights(name, weights);
}

Strategy StrategyMix::sample(SeededRng& rng) const
{
    return static_cast<Strategy>(pick(rng, weights));
}

void StrategyMix::validate(const std::string& name) const { check_weights(name, weights); }

namespace {

StrategyMix interpolate(const std::map<int, StrategyMix>& anchors, int year)
{
    auto hi = anchors.lower_bound(year);
    if (hi == anchors.end()) {
        return std::prev(hi)->second;
    }
    if (hi->first == year || hi == anchors.begin()) {
        return hi->second;
    }
    auto lo = std::prev(hi);
    const double t = double(year - lo->first) / double(hi->first - lo->first);
    StrategyMix mix;
    for (std::size_t i = 0; i < mix.weights.size(); ++i) {
        mix.weights[i] = (1.0 - t) * lo->second.weights[i] + t * hi->second.weights[i];
    }
    return mix;
}

} // namespace

StrategyMix MobilityConfig::strategy_mix(const std::string& scenario, int year) const
{
    std::map<int, StrategyMix> scenario_anchors;
    for (const auto& [key, mix] : strategy_by_scenario_year) {
        if (key.first == scenario) {
            scenario_anchors.emplace(key.second, mix);
        }
    }
    if (!scenario_anchors.empty()) {
        return interpolate(scenario_anchors, year);
    }
    if (strategy_by_year.empty()) {
        bad_config("no strategy mix configured");
    }
    return interpolate(strategy_by_year, year);
}

int MobilityConfig::utc_offset(const StateCode& state) const
{
    const auto it = utc_offset_hours.find(state.str());
    return it == utc_offset_hours.end() ? default_utc_offset_hours : it->second;
}

const ClassMobility& MobilityConfig::mobility(VehicleClass c) const
{
    const auto it = classes.find(c);
    if (it == classes.end()) {
        bad_config("no mobility parameters for " + std::string(voltpath::to_token(c)));
    }
    return it->second;
}

void MobilityConfig::validate() const
{
    for (auto c : kRoadClasses) {
        const auto& m = mobility(c);
        const std::string name(voltpath::to_token(c));
        m.arrival_hour.validate(name + ".arrival_hour");
        m.dwell_minutes.validate(name + ".dwell_minutes");
        m.energy_kwh.validate(name + ".energy_kwh");
        m.charger.validate(name + ".charger");
        if (m.arrival_hour.lower < 0.0 || m.arrival_hour.upper > 24.0) {
            bad_config(name + ".arrival_hour: bounds must lie in [0, 24]");
        }
        if (!(m.dwell_minutes.lower > 0.0) || !(m.energy_kwh.lower > 0.0)) {
            bad_config(name + ": dwell and energy lower bounds must be positive");
        }
        if (!(m.sessions_per_day >= 0.0)) {
            bad_config(name + ".sessions_per_day must be non-negative");
        }
    }
    if (strategy_by_year.empty() && strategy_by_scenario_year.empty()) {
        bad_config("no strategy mix configured");
    }
    for (const auto& [year, mix] : strategy_by_year) {
        mix.validate("strategy_mix." + std::to_string(year));
    }
    for (const auto& [key, mix] : strategy_by_scenario_year) {
        mix.validate("strategy_mix." + key.first + "." + std::to_string(key.second));
    }
    if (!(enroute.depot_share >= 0.0 && enroute.depot_share <= 1.0)) {
        bad_config("enroute.depot_share outside [0, 1]");
    }
    if (!(enroute.start_buffer_min >= 0.0) || !(enroute.end_buffer_min >= 0.0)) {
        bad_config("enroute buffers must be non-negative");
    }
    enroute.route_minutes.validate("enroute.route_minutes");
    if (!(enroute.route_minutes.lower > 0.0)) {
        bad_config("enroute.route_minutes lower bound must be positive");
    }
    if (ldv_monthly_factors) {
        for (double f : *ldv_monthly_factors) {
            if (!(f > 0.0)) {
                bad_config("ldv monthly factors must be positive");
            }
        }
    }
}

MobilityConfig MobilityConfig::defaults()
{
    MobilityConfig cfg;
    // Evening-weighted home arrivals for LDVs, overnight depot dwell for MHDVs.
    cfg.classes[VehicleClass::LDV] = ClassMobility{
        {18.0, 3.0, 0.0, 24.0},
        {600.0, 180.0, 30.0, 1200.0},
        {12.0, 6.0, 1.0, 60.0},
        {{3.7, 7.4, 11.0, 22.0, 50.0, 150.0}, {0.25, 0.45, 0.15, 0.05, 0.05, 0.05}},
        100.0};
    cfg.classes[VehicleClass::MDV] = ClassMobility{
        {17.5, 2.0, 0.0, 24.0},
        {720.0, 120.0, 120.0, 1080.0},
        {80.0, 30.0, 10.0, 250.0},
        {{22.0, 50.0, 150.0}, {0.2, 0.5, 0.3}},
        35.0};
    cfg.classes[VehicleClass::HDV] = ClassMobility{
        {18.0, 2.0, 0.0, 24.0},
        {660.0, 120.0, 120.0, 1080.0},
        {250.0, 80.0, 30.0, 600.0},
        {{50.0, 150.0, 350.0, 500.0}, {0.2, 0.5, 0.25, 0.05}},
        35.0};
    cfg.strategy_by_year[2035] = StrategyMix{{0.8, 0.2, 0.0}};
    cfg.strategy_by_year[2050] = StrategyMix{{0.3, 0.7, 0.0}};
    cfg.enroute.route_minutes = TruncatedNormal{540.0, 90.0, 240.0, 840.0};
    cfg.utc_offset_hours = {{"CA", -8}, {"NV", -8}, {"OR", -8}, {"WA", -8},
                            {"AZ", -7}, {"CO", -7}, {"ID", -7}, {"MT", -7},
                            {"NM", -7}, {"UT", -7}, {"WY", -7}};
    return cfg;
}

} // namespace voltpath::sim
