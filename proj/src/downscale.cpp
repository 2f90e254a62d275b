#include "voltpath/downscale.h"

#include "voltpath/csv.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace voltpath::downscale {

namespace {

using Kind = DownscaleError::Kind;
constexpr auto kHours = static_cast<std::size_t>(calendar::kHoursPerYear);

void require_year_length(std::span<const double> series)
{
    if (series.size() != kHours) {
        throw DownscaleError(Kind::BadSeries, "series has " + std::to_string(series.size())
                                                  + " values, expected 8760");
    }
}

} // namespace

std::vector<double> build_state_series(double annual_ej,
                                       std::span<const std::vector<double>> monthly_shapes,
                                       const std::optional<std::array<double, 12>>& factors,
                                       int utc_offset_hours)
{
    if (!(annual_ej >= 0.0)) {
        throw DownscaleError(Kind::BadInput, "annual energy must be non-negative");
    }
    if (monthly_shapes.size() != 12) {
        throw DownscaleError(Kind::MissingMonth, "expected 12 monthly shapes, got "
                                                     + std::to_string(monthly_shapes.size()));
    }
    std::vector<double> local;
    local.reserve(kHours);
    for (int month = 1; month <= 12; ++month) {
        const auto& shape = monthly_shapes[static_cast<std::size_t>(month - 1)];
        if (shape.size() != static_cast<std::size_t>(calendar::hours_in_month(month))) {
            throw DownscaleError(Kind::MissingMonth,
                                 "shape for month " + std::to_string(month) + " has "
                                     + std::to_string(shape.size()) + " hours");
        }
        const double weight = factors ? (*factors)[static_cast<std::size_t>(month - 1)] : 1.0;
        for (double v : shape) {
            if (!(v >= 0.0)) {
                throw DownscaleError(Kind::BadInput, "negative or non-finite shape value");
            }
            local.push_back(v * weight);
        }
    }

    std::vector<double> utc(kHours, 0.0);
    if (annual_ej == 0.0) {
        return utc;
    }
    double shape_total = 0.0;
    for (double v : local) {
        shape_total += v;
    }
    if (!(shape_total > 0.0)) {
        throw DownscaleError(Kind::EmptyShape, "all-zero shape cannot carry non-zero energy");
    }
    // Local clock = UTC + offset.
    const int n = calendar::kHoursPerYear;
    const int shift = ((utc_offset_hours % n) + n) % n;
    const double scale = ej_to_mwh(annual_ej) / shape_total;
    for (int h = 0; h < n; ++h) {
        utc[static_cast<std::size_t>(h)] = local[static_cast<std::size_t>((h + shift) % n)] * scale;
    }
    return utc;
}

std::vector<double> flat_series(double annual_ej)
{
    if (!(annual_ej >= 0.0)) {
        throw DownscaleError(Kind::BadInput, "annual energy must be non-negative");
    }
    return std::vector<double>(kHours, ej_to_mwh(annual_ej) / double(calendar::kHoursPerYear));
}

std::map<std::string, std::vector<double>> allocate_to_bas(std::span<const StateGroupSeries> series,
                                                          const ingest::BAAllocationMap& map)
{
    // Resolve everything first so an unmapped state leaves no partial output.
    for (const auto& s : series) {
        require_year_length(s.mw);
        if (map.find(s.state, s.group) == nullptr) {
            throw DownscaleError(Kind::UnmappedState, "no BA allocation for " + s.state.str() + ","
                                                          + std::string(to_token(s.group)));
        }
    }
    std::map<std::string, std::vector<double>> out;
    for (const auto& s : series) {
        for (const auto& share : *map.find(s.state, s.group)) {
            auto& ba = out[share.ba_id];
            if (ba.empty()) {
                ba.assign(kHours, 0.0);
            }
            for (std::size_t h = 0; h < kHours; ++h) {
                ba[h] += share.weight * s.mw[h];
            }
        }
    }
    return out;
}

std::vector<double> total_of(const std::map<std::string, std::vector<double>>& series)
{
    std::vector<double> total(kHours, 0.0);
    for (const auto& [id, values] : series) {
        require_year_length(values);
        for (std::size_t h = 0; h < kHours; ++h) {
            total[h] += values[h];
        }
    }
    return total;
}

std::array<SeasonalProfile, 4> seasonal_average(std::span<const double> series)
{
    require_year_length(series);
    std::array<SeasonalProfile, 4> profiles;
    std::array<std::array<int, 24>, 4> counts{};
    for (std::size_t i = 0; i < 4; ++i) {
        profiles[i].season = calendar::kSeasons[i];
    }
    for (int h = 0; h < calendar::kHoursPerYear; ++h) {
        const auto season = static_cast<std::size_t>(calendar::season_of_month(calendar::month_of_hour(h)));
        const auto hod = static_cast<std::size_t>(h % 24);
        profiles[season].mw[hod] += series[static_cast<std::size_t>(h)];
        ++counts[season][hod];
    }
    for (std::size_t s = 0; s < 4; ++s) {
        for (std::size_t hod = 0; hod < 24; ++hod) {
            profiles[s].mw[hod] /= counts[s][hod];
        }
    }
    return profiles;
}

std::array<double, 24> daily_average(std::span<const double> series)
{
    require_year_length(series);
    std::array<double, 24> out{};
    for (std::size_t h = 0; h < kHours; ++h) {
        out[h % 24] += series[h];
    }
    for (auto& v : out) {
        v /= 365.0;
    }
    return out;
}

LoadStats load_stats(std::span<const double> series)
{
    require_year_length(series);
    const auto peak_it = std::max_element(series.begin(), series.end());
    const auto valley_it = std::min_element(series.begin(), series.end());
    LoadStats stats;
    stats.peak = *peak_it;
    stats.valley = *valley_it;
    stats.spread = stats.peak - stats.valley;
    stats.peak_hour = static_cast<int>(peak_it - series.begin());
    return stats;
}

double seasonal_peak_gap(const std::array<SeasonalProfile, 4>& profiles)
{
    auto peak_of = [&](calendar::Season season) {
        for (const auto& p : profiles) {
            if (p.season == season) {
                return *std::max_element(p.mw.begin(), p.mw.end());
            }
        }
        throw DownscaleError(Kind::BadSeries, "missing seasonal profile");
    };
    return peak_of(calendar::Season::Summer) - peak_of(calendar::Season::Winter);
}

std::pair<int, int> half_day_peak_hours(const std::array<double, 24>& profile)
{
    const auto morning = std::max_element(profile.begin(), profile.begin() + 12);
    const auto afternoon = std::max_element(profile.begin() + 12, profile.end());
    return {static_cast<int>(morning - profile.begin()), static_cast<int>(afternoon - profile.begin())};
}

int circular_hour_distance(int a, int b)
{
    const int d = std::abs(((a - b) % 24 + 24) % 24);
    return std::min(d, 24 - d);
}

void write_load_csv(std::ostream& out, int year, const std::map<std::string, std::vector<double>>& series)
{
    std::vector<std::string> timestamps;
    timestamps.reserve(kHours);
    for (int h = 0; h < calendar::kHoursPerYear; ++h) {
        timestamps.push_back(calendar::iso_timestamp(year, h));
    }
    out << "timestamp_utc,ba_id,load_MW\n";
    fmt::memory_buffer buf;
    for (const auto& [id, values] : series) {
        require_year_length(values);
        const auto field = csv::escape_field(id);
        for (std::size_t h = 0; h < kHours; ++h) {
            buf.clear();
            fmt::format_to(std::back_inserter(buf), "{},{},{:.6f}\n", timestamps[h], field, values[h]);
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        }
    }
}

std::optional<std::pair<int, int>> parse_timestamp(std::string_view ts)
{
    // YYYY-MM-DDTHH:00:00Z
    if (ts.size() != 20 || ts[4] != '-' || ts[7] != '-' || ts[10] != 'T' || ts[13] != ':'
        || ts[16] != ':' || ts.substr(14, 2) != "00" || ts.substr(17) != "00Z") {
        return std::nullopt;
    }
    const auto year = csv::parse_int(ts.substr(0, 4));
    const auto month = csv::parse_int(ts.substr(5, 2));
    const auto day = csv::parse_int(ts.substr(8, 2));
    const auto hour = csv::parse_int(ts.substr(11, 2));
    if (!year || !month || !day || !hour || *month < 1 || *month > 12 || *hour < 0 || *hour > 23) {
        return std::nullopt;
    }
    if (*day < 1 || *day > calendar::days_in_month(static_cast<int>(*month))) {
        return std::nullopt;
    }
    const int index = calendar::month_start_hour(static_cast<int>(*month))
        + static_cast<int>((*day - 1) * 24 + *hour);
    return std::pair<int, int>{static_cast<int>(*year), index};
}

LoadTable read_load_csv(std::istream& in)
{
    csv::RecordReader reader(in);
    const auto header = reader.next();
    if (!header || *header != std::vector<std::string>{"timestamp_utc", "ba_id", "load_MW"}) {
        throw DownscaleError(Kind::BadInput, "expected header 'timestamp_utc,ba_id,load_MW'");
    }
    LoadTable table;
    std::map<std::string, std::vector<bool>> seen;
    bool have_year = false;
    while (auto fields = reader.next()) {
        const auto line = std::to_string(reader.line_number());
        if (fields->size() != 3) {
            throw DownscaleError(Kind::BadInput, "line " + line + ": expected 3 fields");
        }
        const auto ts = parse_timestamp((*fields)[0]);
        const auto value = csv::parse_double((*fields)[2]);
        if (!ts || !value) {
            throw DownscaleError(Kind::BadInput, "line " + line + ": bad timestamp or load value");
        }
        if (!have_year) {
            table.year = ts->first;
            have_year = true;
        } else if (ts->first != table.year) {
            throw DownscaleError(Kind::BadInput, "line " + line + ": mixed years");
        }
        auto& values = table.series[(*fields)[1]];
        auto& mask = seen[(*fields)[1]];
        if (values.empty()) {
            values.assign(kHours, 0.0);
            mask.assign(kHours, false);
        }
        const auto h = static_cast<std::size_t>(ts->second);
        if (mask[h]) {
            throw DownscaleError(Kind::BadInput, "line " + line + ": duplicate hour");
        }
        mask[h] = true;
        values[h] = *value;
    }
    for (const auto& [id, mask] : seen) {
        if (std::find(mask.begin(), mask.end(), false) != mask.end()) {
            throw DownscaleError(Kind::BadSeries, "series '" + id + "' does not cover all 8760 hours");
        }
    }
    return table;
}

} // namespace voltpath::downscale
