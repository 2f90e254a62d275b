#pragma once

#include "voltpath/metrics.h"
#include "voltpath/mobility.h"
#include "voltpath/types.h"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace voltpath::report {

/// Unreadable or inconsistent configuration. Maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::filesystem::path energy;
    std::filesystem::path fleet;
    std::filesystem::path population;
    std::filesystem::path ba_map;
    std::vector<ScenarioId> scenarios;
    std::vector<int> years;
    metrics::RegionFilter region;
    std::uint64_t seed = 0;
    sim::MobilityConfig mobility = sim::MobilityConfig::defaults();
    std::filesystem::path out = "out";
    bool session_dump = false;

    /// Throws ConfigError when years are not 5-year steps, no scenario is
    /// given, or the mobility parameters are invalid.
    void validate() const;
};

/// Parses the flat `key = value` format. Relative paths resolve against
/// base_dir. Unknown and repeated keys are errors.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir);

/// Decimal unsigned 64-bit integer, whole string consumed.
std::optional<std::uint64_t> parse_seed(std::string_view text);

RunConfig load_run_config(const std::filesystem::path& path);

/// Stable text form of every field that influences results. The output
/// directory is excluded so relocating a run does not change its digest.
std::string canonical_text(const RunConfig& cfg);

} // namespace voltpath::report
