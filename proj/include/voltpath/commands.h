#pragma once

#include "voltpath/pipeline.h"
#include "voltpath/run_config.h"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace voltpath::report {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitEnvironment = 2;

/// Command-line overrides on top of the config file.
struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    std::vector<std::string> scenarios;
    std::vector<int> years;
    std::optional<unsigned> threads; ///< defaults to thread_budget()
};

/// Loads the config and applies overrides. Throws ConfigError.
RunConfig resolve_config(const CommandOptions& options);

/// Writes through a temporary file in the same directory and renames it into
/// place, so the target is either complete or untouched.
void write_atomic(const std::filesystem::path& target, const std::function<void(std::ostream&)>& body);

struct MetricRow {
    std::string scenario;
    int year = 0;
    std::string region;
    std::string metric;
    std::string fuel_or_class;
    std::optional<double> value;
    std::string status = "ok";
};

/// Region rows (combined road and per-class fractions, fuel mix) followed by
/// per-state rows, for every configured scenario and year.
std::vector<MetricRow> metric_rows(const RunConfig& cfg, const ingest::ScenarioTable& table);

void write_metrics_csv(std::ostream& out, const std::vector<MetricRow>& rows);

struct ComparisonRow {
    int year = 0;
    std::string scenario_a;
    std::string scenario_b;
    std::string metric;
    std::optional<double> value_a;
    std::optional<double> value_b;
    std::optional<double> delta; ///< (b - a) / a as a fraction
    std::string unit;
};

/// Per-year peak, valley, spread, seasonal peak gap and electrification
/// fractions of scenario b against scenario a. loads must contain both
/// scenarios for every configured year.
std::vector<ComparisonRow> comparison_rows(const RunConfig& cfg, const ingest::ScenarioTable& table,
                                           const std::vector<ScenarioYearLoads>& loads,
                                           const ScenarioId& a, const ScenarioId& b);

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

int cmd_validate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_metrics(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_downscale(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const CommandOptions& options, std::ostream& out, std::ostream& err);
int cmd_all(const CommandOptions& options, std::ostream& out, std::ostream& err);

} // namespace voltpath::report
