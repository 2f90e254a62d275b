#pragma once

#include "voltpath/calendar.h"
#include "voltpath/scenario_ingest.h"
#include "voltpath/types.h"

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace voltpath::downscale {

/// 1 EJ = 1e18 J / 3.6e9 J per MWh. The only EJ->MWh conversion in the code.
inline constexpr double kMwhPerEj = 1.0e18 / 3.6e9;

constexpr double ej_to_mwh(double ej) { return ej * kMwhPerEj; }

class DownscaleError : public std::runtime_error {
public:
    enum class Kind { MissingMonth, EmptyShape, UnmappedState, BadSeries, BadInput };

    DownscaleError(Kind kind, const std::string& message)
        : std::runtime_error(message)
        , kind_(kind)
    {
    }

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// 8760 hourly MW values, UTC aligned.
struct HourlyLoadSeries {
    std::string entity; ///< state code or ba_id
    std::string scenario;
    int year = 0;
    std::vector<double> mw;
};

inline constexpr const char* kRegionTotalId = "WECC_TOTAL";

/// Concatenate twelve local-time monthly shapes, weight month m by
/// factors[m-1] if given, rotate to UTC, and rescale so the year integrates
/// to annual_ej. Shapes must have hours_in_month(m) entries each.
std::vector<double> build_state_series(double annual_ej,
                                       std::span<const std::vector<double>> monthly_shapes,
                                       const std::optional<std::array<double, 12>>& factors = std::nullopt,
                                       int utc_offset_hours = 0);

/// Constant profile carrying annual_ej.
std::vector<double> flat_series(double annual_ej);

struct StateGroupSeries {
    StateCode state;
    VClassGroup group = VClassGroup::Road;
    std::vector<double> mw;
};

/// Split each state/group series over its BAs; BA series are sums of
/// weight x state series. Accumulation follows input order.
std::map<std::string, std::vector<double>> allocate_to_bas(std::span<const StateGroupSeries> series,
                                                          const ingest::BAAllocationMap& map);

/// Pointwise sum of all series in key order.
std::vector<double> total_of(const std::map<std::string, std::vector<double>>& series);

struct SeasonalProfile {
    calendar::Season season = calendar::Season::Winter;
    std::array<double, 24> mw{};
};

/// Mean per UTC hour-of-day over the hours of each meteorological season.
std::array<SeasonalProfile, 4> seasonal_average(std::span<const double> series);

/// Mean per hour-of-day over the whole year.
std::array<double, 24> daily_average(std::span<const double> series);

struct LoadStats {
    double peak = 0.0;
    double valley = 0.0;
    double spread = 0.0;
    int peak_hour = 0; ///< first hour index attaining the peak
};

LoadStats load_stats(std::span<const double> series);

/// Summer maximum minus winter maximum.
double seasonal_peak_gap(const std::array<SeasonalProfile, 4>& profiles);

/// Hour of the largest value in [0, 12) and in [12, 24).
std::pair<int, int> half_day_peak_hours(const std::array<double, 24>& profile);

/// Distance between two hours of day on the 24 h circle.
int circular_hour_distance(int a, int b);

/// `timestamp_utc,ba_id,load_MW`, 8760 rows per entity, entities in key order.
void write_load_csv(std::ostream& out, int year, const std::map<std::string, std::vector<double>>& series);

struct LoadTable {
    int year = 0;
    std::map<std::string, std::vector<double>> series;
};

/// Reads a file written by write_load_csv (rows may come in any order).
LoadTable read_load_csv(std::istream& in);

/// Hour index of a timestamp like 2035-07-01T13:00:00Z; nullopt for Feb 29
/// or malformed input.
std::optional<std::pair<int, int>> parse_timestamp(std::string_view ts);

} // namespace voltpath::downscale
