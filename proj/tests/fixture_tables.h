#pragma once

#include "voltpath/metrics.h"
#include "voltpath/pipeline.h"
#include "voltpath/run_config.h"
#include "voltpath/scenario_ingest.h"

#include "test_support.h"

#include <fstream>
#include <stdexcept>

namespace voltpath::test_util {

inline ingest::ScenarioTable load_fixture_table(const std::string& dir)
{
    ingest::ScenarioTable t;
    const std::pair<const char*, ingest::TableKind> files[] = {{"energy.csv", ingest::TableKind::Energy},
                                                               {"fleet.csv", ingest::TableKind::Fleet},
                                                               {"population.csv", ingest::TableKind::Population}};
    for (const auto& [name, kind] : files) {
        std::ifstream in(fixture_dir() / dir / name);
        if (!in) {
            throw std::runtime_error("missing fixture " + dir + "/" + name);
        }
        t.merge(ingest::parse_scenario_csv(in, kind));
    }
    return t;
}

inline metrics::RegionFilter wecc_region(std::set<VehicleClass> classes)
{
    metrics::RegionFilter r;
    r.name = "WECC";
    for (const auto* s : {"AZ", "CA", "CO", "ID", "MT", "NM", "NV", "OR", "UT", "WA", "WY"}) {
        r.states.insert(StateCode(s));
    }
    r.vclasses = std::move(classes);
    return r;
}

inline std::set<VehicleClass> road_classes() { return {VehicleClass::LDV, VehicleClass::MDV, VehicleClass::HDV}; }

inline std::set<VehicleClass> all_classes() { return {kAllVehicleClasses.begin(), kAllVehicleClasses.end()}; }

struct PipelineInputs {
    report::RunConfig cfg;
    ingest::ScenarioTable table;
    ingest::BAAllocationMap map;
};

/// Config, tables and BA map of a fixture, read the same way the CLI does.
inline PipelineInputs load_pipeline_inputs(const std::filesystem::path& config)
{
    PipelineInputs in{report::load_run_config(config), {}, {}};
    const std::pair<const std::filesystem::path*, ingest::TableKind> files[] = {
        {&in.cfg.energy, ingest::TableKind::Energy},
        {&in.cfg.fleet, ingest::TableKind::Fleet},
        {&in.cfg.population, ingest::TableKind::Population}};
    for (const auto& [path, kind] : files) {
        std::ifstream f(*path);
        if (!f) {
            throw std::runtime_error("cannot open " + path->string());
        }
        in.table.merge(ingest::parse_scenario_csv(f, kind));
    }
    if (!in.cfg.ba_map.empty()) {
        std::ifstream map(in.cfg.ba_map);
        in.map = ingest::load_ba_map(map);
    }
    return in;
}

} // namespace voltpath::test_util
