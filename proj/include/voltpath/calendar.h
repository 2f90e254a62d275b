#pragma once

#include <array>
#include <string>
#include <string_view>

// Fixed 365-day year: February 29 is never modelled.
namespace voltpath::calendar {

inline constexpr int kHoursPerYear = 8760;
inline constexpr int kMinutesPerDay = 1440;
inline constexpr std::array<int, 12> kDaysInMonth = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

/// month is 1-based.
constexpr int days_in_month(int month) { return kDaysInMonth.at(month - 1); }
constexpr int hours_in_month(int month) { return days_in_month(month) * 24; }
constexpr double minutes_in_month(int month) { return days_in_month(month) * double(kMinutesPerDay); }

constexpr int month_start_hour(int month)
{
    int hours = 0;
    for (int m = 1; m < month; ++m) {
        hours += hours_in_month(m);
    }
    return hours;
}

/// 1-based month of an hour index in [0, 8760).
constexpr int month_of_hour(int hour_of_year)
{
    int month = 1;
    while (month < 12 && hour_of_year >= month_start_hour(month + 1)) {
        ++month;
    }
    return month;
}

enum class Season { Winter, Spring, Summer, Autumn };

inline constexpr std::array<Season, 4> kSeasons = {Season::Winter, Season::Spring, Season::Summer,
                                                   Season::Autumn};

/// Meteorological seasons: DJF, MAM, JJA, SON.
constexpr Season season_of_month(int month)
{
    switch (month) {
    case 12:
    case 1:
    case 2: return Season::Winter;
    case 3:
    case 4:
    case 5: return Season::Spring;
    case 6:
    case 7:
    case 8: return Season::Summer;
    default: return Season::Autumn;
    }
}

std::string_view to_token(Season season);

/// ISO-8601 UTC timestamp of an hour index, e.g. "2035-03-01T00:00:00Z".
std::string iso_timestamp(int year, int hour_of_year);

} // namespace voltpath::calendar
