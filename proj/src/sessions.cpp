#include "voltpath/sessions.h"

#include "voltpath/calendar.h"
#include "voltpath/csv.h"

#include <algorithm>
#include <cmath>

namespace voltpath::sim {

namespace {

using Kind = SessionError::Kind;

/// Minutes of slack tolerated at month edges when aggregating.
constexpr double kEdgeSlackMin = 1e-9;

double charge_minutes(const ChargingSession& s)
{
    if (!(s.charger_kw > 0.0)) {
        throw SessionError(Kind::InfeasibleSession, "charger power must be positive");
    }
    const double needed = 60.0 * s.energy_kwh / s.charger_kw;
    const double dwell = s.dwell_min();
    if (!(needed <= dwell * (1.0 + kFeasibilityTolerance))) {
        throw SessionError(Kind::InfeasibleSession,
                           "energy " + std::to_string(s.energy_kwh) + " kWh does not fit the dwell at "
                               + std::to_string(s.charger_kw) + " kW");
    }
    return std::min(needed, dwell);
}

} // namespace

bool is_valid(const ChargingSession& s)
{
    return std::isfinite(s.arrival_min) && std::isfinite(s.departure_min)
        && s.departure_min > s.arrival_min && s.energy_kwh > 0.0 && s.charger_kw >= kMinChargerKw
        && s.charger_kw <= kMaxChargerKw
        && s.energy_kwh <= s.charger_kw * s.dwell_hours() * (1.0 + kFeasibilityTolerance);
}

std::vector<LoadSegment> profile_immediate(const ChargingSession& s)
{
    return {LoadSegment{s.arrival_min, charge_minutes(s), s.charger_kw}};
}

std::vector<LoadSegment> profile_delayed(const ChargingSession& s)
{
    const double minutes = charge_minutes(s);
    return {LoadSegment{s.departure_min - minutes, minutes, s.charger_kw}};
}

std::vector<LoadSegment> profile_min_power(const ChargingSession& s)
{
    const double dwell = s.dwell_min();
    if (!(dwell > 0.0)) {
        throw SessionError(Kind::ZeroDwell, "min-power charging needs a positive dwell");
    }
    return {LoadSegment{s.arrival_min, dwell, s.energy_kwh / (dwell / 60.0)}};
}

std::vector<LoadSegment> profile(const ChargingSession& s)
{
    switch (s.strategy) {
    case Strategy::Immediate: return profile_immediate(s);
    case Strategy::MinPower: return profile_min_power(s);
    case Strategy::Delayed: return profile_delayed(s);
    }
    return {};
}

SampleResult sample_sessions(const MobilityConfig& cfg, const FleetSpec& fleet, int month,
                             const StrategyMix& mix, SeededRng& rng)
{
    if (!is_road(fleet.vclass)) {
        throw SessionError(Kind::UnsupportedClass,
                           "sessions are simulated for road classes only, not "
                               + std::string(voltpath::to_token(fleet.vclass)));
    }
    if (fleet.session_count < 0) {
        throw SessionError(Kind::BadConfig, "negative session count");
    }
    const auto& m = cfg.mobility(fleet.vclass);
    const std::string name(voltpath::to_token(fleet.vclass));
    m.arrival_hour.validate(name + ".arrival_hour");
    m.dwell_minutes.validate(name + ".dwell_minutes");
    m.energy_kwh.validate(name + ".energy_kwh");
    m.charger.validate(name + ".charger");
    mix.validate("strategy mix");

    const double month_minutes = calendar::minutes_in_month(month);
    const auto days = static_cast<std::uint64_t>(calendar::days_in_month(month));

    SampleResult result;
    result.sessions.reserve(static_cast<std::size_t>(fleet.session_count));
    for (int i = 0; i < fleet.session_count; ++i) {
        ChargingSession s;
        s.vclass = fleet.vclass;
        s.state = fleet.state;
        bool feasible = false;
        for (int attempt = 0; attempt <= kMaxRedraws && !feasible; ++attempt) {
            s.arrival_min = static_cast<int>(rng.uniform_index(days)) * double(calendar::kMinutesPerDay)
                + 60.0 * m.arrival_hour.sample(rng);
            const double dwell = m.dwell_minutes.sample(rng);
            s.energy_kwh = m.energy_kwh.sample(rng);
            s.charger_kw = m.charger.sample(rng);
            s.departure_min = s.arrival_min + dwell;
            if (s.departure_min > month_minutes) {
                s.energy_kwh *= (month_minutes - s.arrival_min) / dwell;
                s.departure_min = month_minutes;
            }
            feasible = s.energy_kwh <= s.charger_kw * s.dwell_hours();
        }
        if (!feasible) {
            s.energy_kwh = s.charger_kw * s.dwell_hours();
            ++result.clipped;
        }
        s.strategy = mix.sample(rng);
        result.sessions.push_back(s);
    }
    return result;
}

Window enroute_window(const RouteSpec& route, SeededRng& rng, std::int64_t min_length_min)
{
    min_length_min = std::max<std::int64_t>(min_length_min, 1);
    const double earliest = route.depot_departure_min + route.start_buffer_min;
    const double latest = route.depot_arrival_min - route.end_buffer_min;
    if (!std::isfinite(earliest) || !std::isfinite(latest)) {
        throw SessionError(Kind::NoFeasibleWindow, "route times must be finite");
    }
    const auto lo = static_cast<std::int64_t>(std::ceil(earliest));
    const auto hi = static_cast<std::int64_t>(std::floor(latest));
    if (hi - lo < min_length_min) {
        throw SessionError(Kind::NoFeasibleWindow,
                           "no en-route window of " + std::to_string(min_length_min)
                               + " min between the buffers");
    }
    // Pairs (a, b), a < b, over [lo, hi - m + 1] map one-to-one onto windows
    // (a, b + m - 1) of length >= m, so two distinct uniform picks are uniform
    // over all feasible windows.
    const std::int64_t values = hi - min_length_min + 2 - lo;
    auto a = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(values)));
    auto b = static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(values - 1)));
    if (b >= a) {
        ++b;
    }
    if (a > b) {
        std::swap(a, b);
    }
    return Window{lo + a, lo + b + min_length_min - 1};
}

SplitResult split_enroute(const ChargingSession& s, const RouteSpec& route, SeededRng& rng)
{
    if (s.vclass != VehicleClass::MDV && s.vclass != VehicleClass::HDV) {
        throw SessionError(Kind::UnsupportedClass, "en-route charging applies to MDV and HDV only");
    }
    const double share = route.enroute_energy_share;
    if (!(share >= 0.0 && share <= 1.0)) {
        throw SessionError(Kind::BadConfig, "en-route energy share outside [0, 1]");
    }
    if (share == 0.0) {
        return {s, std::nullopt};
    }

    // Recompute the smaller part from the larger one; the difference is then
    // exact (Sterbenz) and the two parts add back to the parent bit for bit.
    const double total = s.energy_kwh;
    double depot_kwh = 0.0;
    double enroute_kwh = 0.0;
    if (share <= 0.5) {
        depot_kwh = total - total * share;
        enroute_kwh = total - depot_kwh;
    } else {
        enroute_kwh = total - total * (1.0 - share);
        depot_kwh = total - enroute_kwh;
    }

    const auto min_minutes = static_cast<std::int64_t>(std::ceil(60.0 * enroute_kwh / s.charger_kw));
    const Window window = enroute_window(route, rng, min_minutes);

    SplitResult out{s, std::nullopt};
    out.depot.energy_kwh = depot_kwh;
    ChargingSession enroute = s;
    enroute.arrival_min = double(window.start_min);
    enroute.departure_min = double(window.end_min);
    enroute.energy_kwh = enroute_kwh;
    enroute.strategy = Strategy::Immediate;
    out.enroute = enroute;
    return out;
}

std::vector<double> aggregate_segments(std::span<const LoadSegment> segments, int month)
{
    const int hours = calendar::hours_in_month(month);
    const double month_minutes = calendar::minutes_in_month(month);
    std::vector<double> bins(static_cast<std::size_t>(hours), 0.0);

    for (const auto& seg : segments) {
        if (!(seg.duration_min >= 0.0) || !(seg.power_kw >= 0.0) || seg.start_min < -kEdgeSlackMin
            || seg.end_min() > month_minutes + kEdgeSlackMin) {
            throw SessionError(Kind::SegmentOutOfRange,
                               "segment [" + std::to_string(seg.start_min) + ", "
                                   + std::to_string(seg.end_min()) + "] min outside month "
                                   + std::to_string(month));
        }
        double remaining = seg.duration_min;
        double cursor = std::max(seg.start_min, 0.0);
        int h = std::min(static_cast<int>(cursor / 60.0), hours - 1);
        // The last piece takes whatever is left so the binned energy matches
        // power x duration even when start + duration rounds.
        while (remaining > 0.0) {
            const double bin_end = 60.0 * (h + 1);
            double piece = h == hours - 1 ? remaining : std::min(remaining, bin_end - cursor);
            piece = std::max(piece, 0.0);
            bins[static_cast<std::size_t>(h)] += seg.power_kw * piece / 60.0;
            remaining -= piece;
            cursor = bin_end;
            if (++h >= hours) {
                break;
            }
        }
    }
    return bins;
}

MonthProfile simulate_month(const MobilityConfig& cfg, const FleetSpec& fleet, int month,
                            const StrategyMix& mix, SeededRng& rng,
                            std::vector<ChargingSession>* dump)
{
    auto sampled = sample_sessions(cfg, fleet, month, mix, rng);

    MonthProfile out;
    out.sessions = static_cast<int>(sampled.sessions.size());
    out.clipped = sampled.clipped;
    out.max_charger_kw = cfg.mobility(fleet.vclass).charger.max_level();

    std::vector<ChargingSession> sessions;
    const bool mhdv = fleet.vclass == VehicleClass::MDV || fleet.vclass == VehicleClass::HDV;
    const double share = cfg.enroute.enroute_share();
    if (mhdv && cfg.enroute.enabled && share > 0.0) {
        sessions.reserve(sampled.sessions.size() * 2);
        for (const auto& s : sampled.sessions) {
            const double route_len = cfg.enroute.route_minutes.sample(rng);
            const RouteSpec route{std::max(0.0, s.arrival_min - route_len), s.arrival_min,
                                  cfg.enroute.start_buffer_min, cfg.enroute.end_buffer_min, share};
            try {
                auto split = split_enroute(s, route, rng);
                if (split.depot.energy_kwh > 0.0) {
                    sessions.push_back(split.depot);
                }
                if (split.enroute) {
                    sessions.push_back(*split.enroute);
                }
                ++out.enroute_split;
            } catch (const SessionError& e) {
                if (e.kind() != Kind::NoFeasibleWindow) {
                    throw;
                }
                sessions.push_back(s);
                ++out.enroute_infeasible;
            }
        }
    } else {
        sessions = std::move(sampled.sessions);
    }

    std::vector<LoadSegment> segments;
    segments.reserve(sessions.size());
    for (const auto& s : sessions) {
        for (const auto& seg : profile(s)) {
            segments.push_back(seg);
        }
    }
    out.kw = aggregate_segments(segments, month);
    if (dump != nullptr) {
        dump->insert(dump->end(), sessions.begin(), sessions.end());
    }
    return out;
}

void write_session_dump_header(std::ostream& out)
{
    out << "state,vclass,month,arrival_min,departure_min,energy_kwh,power_kw,strategy\n";
}

void write_session_dump(std::ostream& out, std::span<const ChargingSession> sessions, int month)
{
    for (const auto& s : sessions) {
        out << s.state.str() << ',' << voltpath::to_token(s.vclass) << ',' << month << ','
            << csv::format_double(s.arrival_min) << ',' << csv::format_double(s.departure_min) << ','
            << csv::format_double(s.energy_kwh) << ',' << csv::format_double(s.charger_kw) << ','
            << to_token(s.strategy) << '\n';
    }
}

} // namespace voltpath::sim
