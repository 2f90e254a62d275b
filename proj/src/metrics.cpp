#include "voltpath/metrics.h"

namespace voltpath::metrics {

using ingest::ScenarioTable;

RegionFilter RegionFilter::with_classes(std::set<VehicleClass> classes) const
{
    RegionFilter out = *this;
    out.vclasses = std::move(classes);
    return out;
}

RegionFilter RegionFilter::single_state(const StateCode& state) const
{
    RegionFilter out = *this;
    out.name = state.str();
    out.states = {state};
    return out;
}

RegionFilter road_filter(std::string name, std::set<StateCode> states)
{
    return RegionFilter{std::move(name), std::move(states),
                        {VehicleClass::LDV, VehicleClass::MDV, VehicleClass::HDV}};
}

std::string_view to_token(MetricsError::Kind kind)
{
    switch (kind) {
    case MetricsError::Kind::EmptyDenominator: return "empty_denominator";
    case MetricsError::Kind::UnsupportedClass: return "unsupported_class";
    case MetricsError::Kind::MissingPopulation: return "missing_population";
    case MetricsError::Kind::ZeroBaseline: return "zero_baseline";
    case MetricsError::Kind::InvalidRegion: return "invalid_region";
    }
    return "error";
}

namespace {

void require_classes(const RegionFilter& region)
{
    if (region.vclasses.empty()) {
        throw MetricsError(MetricsError::Kind::InvalidRegion,
                           "region '" + region.name + "' selects no vehicle class");
    }
}

template <typename Record>
bool selected(const Record& r, const ScenarioId& scenario, int year, const RegionFilter& region)
{
    return r.scenario == scenario && r.year == year && region.contains(r.state)
        && region.contains(r.vclass);
}

} // namespace

double ev_energy_fraction(const ScenarioTable& table, const ScenarioId& scenario, int year,
                          const RegionFilter& region)
{
    require_classes(region);
    double electric = 0.0;
    double total = 0.0;
    for (const auto& r : table.energy) {
        if (!selected(r, scenario, year, region)) {
            continue;
        }
        total += r.energy_ej;
        if (r.fuel == Fuel::Electricity) {
            electric += r.energy_ej;
        }
    }
    if (!(total > 0.0)) {
        throw MetricsError(MetricsError::Kind::EmptyDenominator,
                           "no energy for " + scenario.str() + " " + std::to_string(year) + " in "
                               + region.name);
    }
    return electric / total;
}

double ev_fleet_fraction(const ScenarioTable& table, const ScenarioId& scenario, int year,
                         const RegionFilter& region)
{
    require_classes(region);
    for (auto c : region.vclasses) {
        if (!is_road(c)) {
            throw MetricsError(MetricsError::Kind::UnsupportedClass,
                               "fleet fraction undefined for " + std::string(to_token(c)));
        }
    }
    double ev = 0.0;
    double total = 0.0;
    for (const auto& r : table.fleet) {
        if (!selected(r, scenario, year, region)) {
            continue;
        }
        total += r.count;
        if (r.powertrain == Powertrain::EV) {
            ev += r.count;
        }
    }
    if (!(total > 0.0)) {
        throw MetricsError(MetricsError::Kind::EmptyDenominator,
                           "no fleet for " + scenario.str() + " " + std::to_string(year) + " in "
                               + region.name);
    }
    return ev / total;
}

FuelMix fuel_mix(const ScenarioTable& table, const ScenarioId& scenario, int year,
                 const RegionFilter& region)
{
    FuelMix mix;
    for (const auto& r : table.energy) {
        if (selected(r, scenario, year, region)) {
            mix[r.fuel] += r.energy_ej;
        }
    }
    return mix;
}

FuelMix fuel_mix_per_capita(const ScenarioTable& table, const ScenarioId& scenario, int year,
                            const StateCode& state)
{
    const ingest::PopulationRecord* population = nullptr;
    for (const auto& p : table.population) {
        if (p.state == state && p.year == year) {
            population = &p;
            break;
        }
    }
    if (population == nullptr || !(population->persons > 0.0)) {
        throw MetricsError(MetricsError::Kind::MissingPopulation,
                           "no population for " + state.str() + " " + std::to_string(year));
    }
    const RegionFilter region{state.str(), {state},
                              {kAllVehicleClasses.begin(), kAllVehicleClasses.end()}};
    auto mix = fuel_mix(table, scenario, year, region);
    const double scale = kPerCapitaBase / population->persons;
    for (auto& v : mix.values) {
        v *= scale;
    }
    return mix;
}

double scenario_delta(double a, double b)
{
    if (a == 0.0) {
        throw MetricsError(MetricsError::Kind::ZeroBaseline, "relative change from a zero baseline");
    }
    return (b - a) / a;
}

MetricsReport compute_report(const ScenarioTable& table, const ScenarioId& scenario, int year,
                             const RegionFilter& region)
{
    MetricsReport report{scenario, year, region, std::nullopt, std::nullopt, {}};
    std::set<VehicleClass> road;
    for (auto c : region.vclasses) {
        if (is_road(c)) {
            road.insert(c);
        }
    }
    if (!road.empty()) {
        const auto road_region = region.with_classes(road);
        try {
            report.ev_energy_fraction = ev_energy_fraction(table, scenario, year, road_region);
        } catch (const MetricsError& e) {
            if (e.kind() != MetricsError::Kind::EmptyDenominator) {
                throw;
            }
        }
        try {
            report.ev_fleet_fraction = ev_fleet_fraction(table, scenario, year, road_region);
        } catch (const MetricsError& e) {
            if (e.kind() != MetricsError::Kind::EmptyDenominator) {
                throw;
            }
        }
    }
    report.fuel_mix = fuel_mix(table, scenario, year, region);
    return report;
}

} // namespace voltpath::metrics
