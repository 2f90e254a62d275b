#include "voltpath/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

namespace voltpath::report {

namespace {

using StateClassKey = std::pair<StateCode, VehicleClass>;

struct UnitPlan {
    ScenarioId scenario;
    int year = 0;
    std::map<StateClassKey, double> electricity_ej; ///< every (state, class) with any record
    sim::StrategyMix mix;
};

struct MonthTask {
    std::size_t plan = 0;
    StateClassKey key;
    int month = 1;
};

struct MonthResult {
    sim::MonthProfile profile;
    std::vector<sim::ChargingSession> sessions;
    std::exception_ptr error;
};

std::vector<UnitPlan> make_plans(const RunConfig& cfg, const ingest::ScenarioTable& table)
{
    std::vector<UnitPlan> plans;
    for (const auto& scenario : cfg.scenarios) {
        for (int year : cfg.years) {
            UnitPlan plan{scenario, year, {}, cfg.mobility.strategy_mix(scenario.str(), year)};
            for (const auto& r : table.energy) {
                if (r.scenario != scenario || r.year != year || !cfg.region.contains(r.state)) {
                    continue;
                }
                auto& ej = plan.electricity_ej[{r.state, r.vclass}];
                if (r.fuel == Fuel::Electricity) {
                    ej += r.energy_ej;
                }
            }
            plans.push_back(std::move(plan));
        }
    }
    return plans;
}

void check_coverage(const std::vector<UnitPlan>& plans, const ingest::BAAllocationMap& map)
{
    for (const auto& plan : plans) {
        for (const auto& [key, ej] : plan.electricity_ej) {
            if (map.find(key.first, group_of(key.second)) == nullptr) {
                throw downscale::DownscaleError(downscale::DownscaleError::Kind::UnmappedState,
                                                "no BA allocation for " + key.first.str() + ","
                                                    + std::string(to_token(group_of(key.second))));
            }
        }
    }
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    const auto workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                fn(i);
            }
        });
    }
}

} // namespace

std::map<std::string, std::vector<double>> ScenarioYearLoads::output_series() const
{
    if (ba.contains(downscale::kRegionTotalId)) {
        throw downscale::DownscaleError(downscale::DownscaleError::Kind::BadInput,
                                        std::string("ba_id ") + downscale::kRegionTotalId
                                            + " is reserved for the region total");
    }
    auto out = ba;
    out.emplace(downscale::kRegionTotalId, total);
    return out;
}

unsigned thread_budget()
{
    if (const char* env = std::getenv("VOLTPATH_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ScenarioYearLoads> run_downscale(const RunConfig& cfg, const ingest::ScenarioTable& table,
                                             const ingest::BAAllocationMap& map,
                                             const PipelineOptions& options)
{
    const auto plans = make_plans(cfg, table);
    check_coverage(plans, map);

    std::vector<MonthTask> tasks;
    for (std::size_t p = 0; p < plans.size(); ++p) {
        for (const auto& [key, ej] : plans[p].electricity_ej) {
            if (!is_road(key.second) || !(ej > 0.0)) {
                continue;
            }
            for (int month = 1; month <= 12; ++month) {
                tasks.push_back({p, key, month});
            }
        }
    }

    std::vector<MonthResult> results(tasks.size());
    parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
        const auto& task = tasks[i];
        const auto& plan = plans[task.plan];
        try {
            const auto& mobility = cfg.mobility.mobility(task.key.second);
            const auto count = std::llround(mobility.sessions_per_day * calendar::days_in_month(task.month));
            const sim::FleetSpec fleet{task.key.first, task.key.second, static_cast<int>(count)};
            sim::SeededRng rng(cfg.seed, sim::StreamPath{plan.scenario.str(), plan.year, task.key.first.str(),
                                                         task.key.second, task.month});
            results[i].profile = sim::simulate_month(cfg.mobility, fleet, task.month, plan.mix, rng,
                                                     options.keep_sessions ? &results[i].sessions : nullptr);
        } catch (...) {
            results[i].error = std::current_exception();
        }
    });
    for (const auto& r : results) {
        if (r.error) {
            std::rethrow_exception(r.error);
        }
    }

    std::vector<ScenarioYearLoads> out;
    out.reserve(plans.size());
    std::size_t next_task = 0;
    for (std::size_t p = 0; p < plans.size(); ++p) {
        const auto& plan = plans[p];
        ScenarioYearLoads loads;
        loads.scenario = plan.scenario;
        loads.year = plan.year;
        if (options.keep_sessions) {
            loads.sessions_by_month.resize(12);
        }

        std::map<std::pair<StateCode, VClassGroup>, std::vector<double>> grouped;
        for (const auto& [key, ej] : plan.electricity_ej) {
            const auto& [state, vclass] = key;
            StateClassSeries series{state, vclass, ej, {}};
            if (is_flat_profile(vclass)) {
                series.mw = downscale::flat_series(ej);
            } else if (!(ej > 0.0)) {
                series.mw.assign(calendar::kHoursPerYear, 0.0);
            } else {
                std::vector<std::vector<double>> shapes;
                shapes.reserve(12);
                for (int month = 1; month <= 12; ++month, ++next_task) {
                    auto& r = results[next_task];
                    shapes.push_back(std::move(r.profile.kw));
                    loads.counts.sessions += r.profile.sessions;
                    loads.counts.clipped += r.profile.clipped;
                    loads.counts.enroute_split += r.profile.enroute_split;
                    loads.counts.enroute_infeasible += r.profile.enroute_infeasible;
                    if (options.keep_sessions) {
                        auto& bucket = loads.sessions_by_month[static_cast<std::size_t>(month - 1)];
                        bucket.insert(bucket.end(), r.sessions.begin(), r.sessions.end());
                    }
                }
                const auto factors = vclass == VehicleClass::LDV ? cfg.mobility.ldv_monthly_factors
                                                                 : std::nullopt;
                series.mw = downscale::build_state_series(ej, shapes, factors, cfg.mobility.utc_offset(state));
            }
            auto& group = grouped[{state, group_of(vclass)}];
            if (group.empty()) {
                group.assign(calendar::kHoursPerYear, 0.0);
            }
            for (std::size_t h = 0; h < group.size(); ++h) {
                group[h] += series.mw[h];
            }
            loads.state_class.push_back(std::move(series));
        }

        std::vector<downscale::StateGroupSeries> state_groups;
        state_groups.reserve(grouped.size());
        for (auto& [key, mw] : grouped) {
            state_groups.push_back({key.first, key.second, std::move(mw)});
        }
        loads.ba = downscale::allocate_to_bas(state_groups, map);
        loads.total = downscale::total_of(loads.ba);
        out.push_back(std::move(loads));
    }
    return out;
}

} // namespace voltpath::report
