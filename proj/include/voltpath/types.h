#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace voltpath {

/// Scenario identifier, e.g. "nz_climate". Lowercase alphanumerics and '_' only.
class ScenarioId {
public:
    ScenarioId() = default;
    explicit ScenarioId(std::string name);

    static bool is_valid(std::string_view name);

    const std::string& str() const { return name_; }
    auto operator<=>(const ScenarioId&) const = default;

private:
    std::string name_;
};

/// Two-letter upper-case postal code. Membership in the list of U.S. states
/// is checked separately (see is_us_state) since ingestion accepts any
/// well-formed code.
class StateCode {
public:
    StateCode() = default;
    explicit StateCode(std::string_view code);

    static bool is_well_formed(std::string_view code);

    const std::string& str() const { return code_; }
    auto operator<=>(const StateCode&) const = default;

private:
    std::string code_;
};

/// 50 states plus DC.
bool is_us_state(const StateCode& state);

enum class VehicleClass { LDV, MDV, HDV, Rail, Aviation, Ship };
enum class Fuel { Electricity, RefinedLiquids, Hydrogen };
enum class Powertrain { EV, NonEV };
/// Spatial allocation groups: all road classes share one BA split.
enum class VClassGroup { Road, Rail, Aviation, Ship };

inline constexpr std::array<VehicleClass, 6> kAllVehicleClasses = {
    VehicleClass::LDV, VehicleClass::MDV, VehicleClass::HDV,
    VehicleClass::Rail, VehicleClass::Aviation, VehicleClass::Ship};
inline constexpr std::array<VehicleClass, 3> kRoadClasses = {
    VehicleClass::LDV, VehicleClass::MDV, VehicleClass::HDV};
inline constexpr std::array<Fuel, 3> kAllFuels = {
    Fuel::Electricity, Fuel::RefinedLiquids, Fuel::Hydrogen};
inline constexpr std::array<VClassGroup, 4> kAllGroups = {
    VClassGroup::Road, VClassGroup::Rail, VClassGroup::Aviation, VClassGroup::Ship};

constexpr bool is_road(VehicleClass c)
{
    return c == VehicleClass::LDV || c == VehicleClass::MDV || c == VehicleClass::HDV;
}

/// Rail, aviation and ship get a flat hourly profile.
constexpr bool is_flat_profile(VehicleClass c) { return !is_road(c); }

constexpr VClassGroup group_of(VehicleClass c)
{
    switch (c) {
    case VehicleClass::Rail: return VClassGroup::Rail;
    case VehicleClass::Aviation: return VClassGroup::Aviation;
    case VehicleClass::Ship: return VClassGroup::Ship;
    default: return VClassGroup::Road;
    }
}

std::string_view to_token(VehicleClass c);
std::string_view to_token(Fuel f);
std::string_view to_token(Powertrain p);
std::string_view to_token(VClassGroup g);

std::optional<VehicleClass> parse_vehicle_class(std::string_view token);
std::optional<Fuel> parse_fuel(std::string_view token);
std::optional<Powertrain> parse_powertrain(std::string_view token);
std::optional<VClassGroup> parse_vclass_group(std::string_view token);

} // namespace voltpath
