#pragma once

#include "voltpath/scenario_ingest.h"
#include "voltpath/types.h"

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace voltpath::metrics {

/// Selects records by state and vehicle class. An empty state set selects
/// every state; the class set must not be empty.
struct RegionFilter {
    std::string name = "all";
    std::set<StateCode> states;
    std::set<VehicleClass> vclasses;

    bool contains(const StateCode& state) const { return states.empty() || states.contains(state); }
    bool contains(VehicleClass c) const { return vclasses.contains(c); }

    /// Same states, restricted to the given classes.
    RegionFilter with_classes(std::set<VehicleClass> classes) const;
    RegionFilter single_state(const StateCode& state) const;
};

RegionFilter road_filter(std::string name, std::set<StateCode> states = {});

class MetricsError : public std::runtime_error {
public:
    enum class Kind { EmptyDenominator, UnsupportedClass, MissingPopulation, ZeroBaseline, InvalidRegion };

    MetricsError(Kind kind, const std::string& message)
        : std::runtime_error(message)
        , kind_(kind)
    {
    }

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

std::string_view to_token(MetricsError::Kind kind);

/// EJ (or EJ per 10 million persons) by fuel.
struct FuelMix {
    std::array<double, 3> values{};

    double& operator[](Fuel f) { return values[static_cast<std::size_t>(f)]; }
    double operator[](Fuel f) const { return values[static_cast<std::size_t>(f)]; }
    double total() const { return values[0] + values[1] + values[2]; }
};

/// Electric share of energy over the filtered records.
double ev_energy_fraction(const ingest::ScenarioTable& table, const ScenarioId& scenario, int year,
                          const RegionFilter& region);

/// EV share of vehicle counts. Only road classes carry fleet data.
double ev_fleet_fraction(const ingest::ScenarioTable& table, const ScenarioId& scenario, int year,
                         const RegionFilter& region);

FuelMix fuel_mix(const ingest::ScenarioTable& table, const ScenarioId& scenario, int year,
                 const RegionFilter& region);

inline constexpr double kPerCapitaBase = 10'000'000.0;

/// Fuel mix of one state, all vehicle classes, per 10 million persons.
FuelMix fuel_mix_per_capita(const ingest::ScenarioTable& table, const ScenarioId& scenario,
                            int year, const StateCode& state);

/// Signed relative change (b - a) / a.
double scenario_delta(double a, double b);

struct MetricsReport {
    ScenarioId scenario;
    int year = 0;
    RegionFilter region;
    std::optional<double> ev_energy_fraction;
    std::optional<double> ev_fleet_fraction;
    FuelMix fuel_mix;
};

/// Fractions use the road classes of the region; a fraction whose
/// denominator is empty is left unset.
MetricsReport compute_report(const ingest::ScenarioTable& table, const ScenarioId& scenario,
                             int year, const RegionFilter& region);

} // namespace voltpath::metrics
