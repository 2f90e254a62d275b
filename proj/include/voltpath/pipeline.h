#pragma once

#include "voltpath/downscale.h"
#include "voltpath/run_config.h"
#include "voltpath/scenario_ingest.h"
#include "voltpath/sessions.h"

#include <map>
#include <string>
#include <vector>

namespace voltpath::report {

/// Hourly UTC series of one (state, vehicle class) before spatial allocation.
struct StateClassSeries {
    StateCode state;
    VehicleClass vclass = VehicleClass::LDV;
    double annual_ej = 0.0;
    std::vector<double> mw;
};

struct SimulationCounts {
    long long sessions = 0;
    long long clipped = 0;
    long long enroute_split = 0;
    long long enroute_infeasible = 0;
};

struct ScenarioYearLoads {
    ScenarioId scenario;
    int year = 0;
    std::vector<StateClassSeries> state_class; ///< sorted by (state, vclass)
    std::map<std::string, std::vector<double>> ba;
    std::vector<double> total;
    SimulationCounts counts;
    /// Simulated sessions by month, only filled when requested.
    std::vector<std::vector<sim::ChargingSession>> sessions_by_month;

    /// BA series plus the region total under kRegionTotalId.
    std::map<std::string, std::vector<double>> output_series() const;
};

/// VOLTPATH_THREADS if set to a positive integer, else hardware concurrency.
unsigned thread_budget();

struct PipelineOptions {
    unsigned threads = 1;
    bool keep_sessions = false;
};

/// Downscales every (scenario, year) of the config. Work units are
/// (scenario, year, state, vclass, month) with their own random stream and
/// results are reduced in a fixed order, so the output does not depend on
/// the thread count. Throws DownscaleError::UnmappedState before returning
/// anything if a state/group lacks BA coverage.
std::vector<ScenarioYearLoads> run_downscale(const RunConfig& cfg, const ingest::ScenarioTable& table,
                                             const ingest::BAAllocationMap& map,
                                             const PipelineOptions& options);

} // namespace voltpath::report
