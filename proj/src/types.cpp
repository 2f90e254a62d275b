#include "voltpath/types.h"

#include <algorithm>
#include <set>

namespace voltpath {

ScenarioId::ScenarioId(std::string name)
    : name_(std::move(name))
{
    if (!is_valid(name_)) {
        throw std::invalid_argument("invalid scenario id '" + name_ + "'");
    }
}

bool ScenarioId::is_valid(std::string_view name)
{
    return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    });
}

StateCode::StateCode(std::string_view code)
    : code_(code)
{
    if (!is_well_formed(code_)) {
        throw std::invalid_argument("invalid state code '" + code_ + "'");
    }
}

bool StateCode::is_well_formed(std::string_view code)
{
    return code.size() == 2 && std::all_of(code.begin(), code.end(), [](char c) {
        return c >= 'A' && c <= 'Z';
    });
}

bool is_us_state(const StateCode& state)
{
    static const std::set<std::string, std::less<>> states = {
        "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "DC", "FL", "GA", "HI", "ID",
        "IL", "IN", "IA", "KS", "KY", "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO",
        "MT", "NE", "NV", "NH", "NJ", "NM", "NY", "NC", "ND", "OH", "OK", "OR", "PA",
        "RI", "SC", "SD", "TN", "TX", "UT", "VT", "VA", "WA", "WV", "WI", "WY"};
    return states.contains(state.str());
}

namespace {

template <typename Enum, std::size_t N>
struct TokenTable {
    std::array<std::pair<Enum, std::string_view>, N> entries;

    std::string_view name(Enum e) const
    {
        for (const auto& [value, token] : entries) {
            if (value == e) {
                return token;
            }
        }
        return "?";
    }

    std::optional<Enum> parse(std::string_view token) const
    {
        for (const auto& [value, name] : entries) {
            if (name == token) {
                return value;
            }
        }
        return std::nullopt;
    }
};

constexpr TokenTable<VehicleClass, 6> kVehicleClassTokens{{{
    {VehicleClass::LDV, "ldv"},
    {VehicleClass::MDV, "mdv"},
    {VehicleClass::HDV, "hdv"},
    {VehicleClass::Rail, "rail"},
    {VehicleClass::Aviation, "aviation"},
    {VehicleClass::Ship, "ship"},
}}};

constexpr TokenTable<Fuel, 3> kFuelTokens{{{
    {Fuel::Electricity, "electricity"},
    {Fuel::RefinedLiquids, "refined_liquids"},
    {Fuel::Hydrogen, "hydrogen"},
}}};

constexpr TokenTable<Powertrain, 2> kPowertrainTokens{{{
    {Powertrain::EV, "ev"},
    {Powertrain::NonEV, "non_ev"},
}}};

constexpr TokenTable<VClassGroup, 4> kGroupTokens{{{
    {VClassGroup::Road, "road"},
    {VClassGroup::Rail, "rail"},
    {VClassGroup::Aviation, "aviation"},
    {VClassGroup::Ship, "ship"},
}}};

} // namespace

std::string_view to_token(VehicleClass c) { return kVehicleClassTokens.name(c); }
std::string_view to_token(Fuel f) { return kFuelTokens.name(f); }
std::string_view to_token(Powertrain p) { return kPowertrainTokens.name(p); }
std::string_view to_token(VClassGroup g) { return kGroupTokens.name(g); }

std::optional<VehicleClass> parse_vehicle_class(std::string_view token)
{
    return kVehicleClassTokens.parse(token);
}
std::optional<Fuel> parse_fuel(std::string_view token) { return kFuelTokens.parse(token); }
std::optional<Powertrain> parse_powertrain(std::string_view token)
{
    return kPowertrainTokens.parse(token);
}
std::optional<VClassGroup> parse_vclass_group(std::string_view token)
{
    return kGroupTokens.parse(token);
}

} // namespace voltpath
