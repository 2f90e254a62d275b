#include "voltpath/calendar.h"

#include <fmt/format.h>

namespace voltpath::calendar {

std::string_view to_token(Season season)
{
    switch (season) {
    case Season::Winter: return "winter";
    case Season::Spring: return "spring";
    case Season::Summer: return "summer";
    case Season::Autumn: return "autumn";
    }
    return "?";
}

std::string iso_timestamp(int year, int hour_of_year)
{
    const int month = month_of_hour(hour_of_year);
    const int within = hour_of_year - month_start_hour(month);
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:00:00Z", year, month, within / 24 + 1, within % 24);
}

} // namespace voltpath::calendar
