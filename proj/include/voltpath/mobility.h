#pragma once

#include "voltpath/rng.h"
#include "voltpath/types.h"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace voltpath::sim {

class SessionError : public std::runtime_error {
public:
    enum class Kind {
        BadConfig,
        InfeasibleSession,
        ZeroDwell,
        NoFeasibleWindow,
        SegmentOutOfRange,
        UnsupportedClass,
    };

    SessionError(Kind kind, const std::string& message)
        : std::runtime_error(message)
        , kind_(kind)
    {
    }

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

enum class Strategy { Immediate, MinPower, Delayed };

inline constexpr std::array<Strategy, 3> kAllStrategies = {Strategy::Immediate, Strategy::MinPower,
                                                           Strategy::Delayed};

std::string_view to_token(Strategy s);
/// Accepts "immediate", "min_power", "delayed" and the aliases "min_delay"
/// (immediate) and "load_level" (min_power).
std::optional<Strategy> parse_strategy(std::string_view token);

/// Normal distribution truncated to [lower, upper] by rejection.
struct TruncatedNormal {
    double mean = 0.0;
    double stddev = 1.0;
    double lower = 0.0;
    double upper = 1.0;

    double sample(SeededRng& rng) const;
    void validate(const std::string& name) const;
};

/// Discrete distribution over charger power levels (kW).
struct PowerMixture {
    std::vector<double> levels_kw;
    std::vector<double> weights;

    double sample(SeededRng& rng) const;
    double max_level() const;
    void validate(const std::string& name) const;
};

inline constexpr std::array<double, 8> kChargerLevelsKw = {3.7, 7.4, 11.0, 22.0,
                                                           50.0, 150.0, 350.0, 500.0};
inline constexpr double kMinChargerKw = 3.7;
inline constexpr double kMaxChargerKw = 500.0;

struct StrategyMix {
    std::array<double, 3> weights{1.0, 0.0, 0.0}; ///< indexed by Strategy

    double operator[](Strategy s) const { return weights[static_cast<std::size_t>(s)]; }
    Strategy sample(SeededRng& rng) const;
    void validate(const std::string& name) const;
};

/// Behaviour of one road vehicle class. Arrival is a local hour of day.
struct ClassMobility {
    TruncatedNormal arrival_hour;
    TruncatedNormal dwell_minutes;
    TruncatedNormal energy_kwh;
    PowerMixture charger;
    double sessions_per_day = 30.0; ///< sample size; months get round(rate x days)
};

struct EnrouteConfig {
    bool enabled = true;
    double depot_share = 0.87;
    double start_buffer_min = 30.0;
    double end_buffer_min = 30.0;
    TruncatedNormal route_minutes;

    double enroute_share() const { return 1.0 - depot_share; }
};

struct MobilityConfig {
    std::map<VehicleClass, ClassMobility> classes;
    /// Anchor years; other years interpolate linearly and clamp at the ends.
    std::map<int, StrategyMix> strategy_by_year;
    /// Scenario-specific anchors take precedence over strategy_by_year.
    std::map<std::pair<std::string, int>, StrategyMix> strategy_by_scenario_year;
    EnrouteConfig enroute;
    std::map<std::string, int> utc_offset_hours; ///< keyed by state code
    int default_utc_offset_hours = -8;
    std::optional<std::array<double, 12>> ldv_monthly_factors;

    StrategyMix strategy_mix(const std::string& scenario, int year) const;
    int utc_offset(const StateCode& state) const;
    const ClassMobility& mobility(VehicleClass c) const;

    /// Throws SessionError::BadConfig on unnormalized or out-of-range values.
    void validate() const;

    static MobilityConfig defaults();
};

} // namespace voltpath::sim
