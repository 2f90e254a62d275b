#pragma once

#include "voltpath/mobility.h"
#include "voltpath/rng.h"
#include "voltpath/types.h"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace voltpath::sim {

/// One charging opportunity. Times are minutes since the start of the month,
/// local time of the state.
struct ChargingSession {
    VehicleClass vclass = VehicleClass::LDV;
    StateCode state;
    double arrival_min = 0.0;
    double departure_min = 0.0;
    double energy_kwh = 0.0;
    double charger_kw = 0.0;
    Strategy strategy = Strategy::Immediate;

    double dwell_min() const { return departure_min - arrival_min; }
    double dwell_hours() const { return dwell_min() / 60.0; }

    bool operator==(const ChargingSession&) const = default;
};

/// Relative slack allowed on energy <= power x dwell.
inline constexpr double kFeasibilityTolerance = 1e-12;

/// True when the session satisfies every structural invariant.
bool is_valid(const ChargingSession& s);

/// Constant-power interval. Stored as start plus duration so the delivered
/// energy does not depend on the absolute position in the month.
struct LoadSegment {
    double start_min = 0.0;
    double duration_min = 0.0;
    double power_kw = 0.0;

    double end_min() const { return start_min + duration_min; }
    double energy_kwh() const { return power_kw * duration_min / 60.0; }
};

/// Charge at full power from arrival.
std::vector<LoadSegment> profile_immediate(const ChargingSession& s);
/// Spread the energy evenly over the whole dwell.
std::vector<LoadSegment> profile_min_power(const ChargingSession& s);
/// Charge at full power so that charging ends at departure.
std::vector<LoadSegment> profile_delayed(const ChargingSession& s);
/// Dispatch on s.strategy.
std::vector<LoadSegment> profile(const ChargingSession& s);

struct FleetSpec {
    StateCode state;
    VehicleClass vclass = VehicleClass::LDV;
    int session_count = 0;
};

struct SampleResult {
    std::vector<ChargingSession> sessions;
    int clipped = 0; ///< sessions whose energy was clipped after exhausting redraws
};

inline constexpr int kMaxRedraws = 10;

/// Draw sessions for one (state, road class, month). Sessions crossing the end
/// of the month are truncated there and their energy scaled by the kept share
/// of the dwell.
SampleResult sample_sessions(const MobilityConfig& cfg, const FleetSpec& fleet, int month,
                             const StrategyMix& mix, SeededRng& rng);

struct RouteSpec {
    double depot_departure_min = 0.0;
    double depot_arrival_min = 0.0;
    double start_buffer_min = 0.0;
    double end_buffer_min = 0.0;
    double enroute_energy_share = 0.0;
};

struct Window {
    std::int64_t start_min = 0;
    std::int64_t end_min = 0;

    bool operator==(const Window&) const = default;
};

/// Integer-minute window uniformly distributed over all ordered pairs
/// start < end inside [departure + start_buffer, arrival - end_buffer] with
/// end - start >= min_length_min.
Window enroute_window(const RouteSpec& route, SeededRng& rng, std::int64_t min_length_min = 1);

struct SplitResult {
    ChargingSession depot;
    std::optional<ChargingSession> enroute;
};

/// Moves route.enroute_energy_share of the energy into an en-route session at
/// the same charger power, charging immediately inside a randomized window.
/// depot.energy + enroute.energy equals the parent energy exactly; with a
/// share of 1 the depot part carries zero energy.
SplitResult split_enroute(const ChargingSession& s, const RouteSpec& route, SeededRng& rng);

/// Hour-bin average power (kW) over the month; each segment's energy is split
/// by overlap.
std::vector<double> aggregate_segments(std::span<const LoadSegment> segments, int month);

struct MonthProfile {
    std::vector<double> kw; ///< local-time hourly average power
    int sessions = 0;
    int clipped = 0;
    int enroute_split = 0;
    int enroute_infeasible = 0;
    double max_charger_kw = 0.0;
};

/// Full unit pipeline: sample, optionally split MHDV sessions en route,
/// profile and aggregate. Sessions are drawn before any route draws, so the
/// depot sessions do not depend on whether en-route charging is enabled.
MonthProfile simulate_month(const MobilityConfig& cfg, const FleetSpec& fleet, int month,
                            const StrategyMix& mix, SeededRng& rng,
                            std::vector<ChargingSession>* dump = nullptr);

/// `state,vclass,month,arrival_min,departure_min,energy_kwh,power_kw,strategy`
void write_session_dump_header(std::ostream& out);
void write_session_dump(std::ostream& out, std::span<const ChargingSession> sessions, int month);

} // namespace voltpath::sim
