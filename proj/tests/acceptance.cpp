// One PASS/FAIL/SKIP line per acceptance criterion. Exit status is nonzero
// only when a criterion fails.

#include "voltpath/downscale.h"
#include "voltpath/metrics.h"
#include "voltpath/pipeline.h"
#include "voltpath/sessions.h"

#include "fixture_tables.h"

#include <fmt/format.h>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>

using namespace voltpath;
namespace fs = std::filesystem;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
    Outcome outcome = Outcome::Pass;
    std::string detail;
};

Verdict pass(std::string detail) { return {Outcome::Pass, std::move(detail)}; }
Verdict fail(std::string detail) { return {Outcome::Fail, std::move(detail)}; }
Verdict skip(std::string detail) { return {Outcome::Skip, std::move(detail)}; }

/// Collects failures so a criterion reports every broken check at once.
struct Checks {
    std::vector<std::string> failures;
    int count = 0;

    void expect(bool ok, const std::string& what)
    {
        ++count;
        if (!ok) {
            failures.push_back(what);
        }
    }

    Verdict verdict(const std::string& summary) const
    {
        if (failures.empty()) {
            return pass(fmt::format("{} ({} checks)", summary, count));
        }
        std::string msg = fmt::format("{} of {} checks failed:", failures.size(), count);
        for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 8); ++i) {
            msg += " [" + failures[i] + "]";
        }
        return fail(msg);
    }
};

unsigned many_threads() { return std::max(2u, report::thread_budget()); }

Verdict energy_conservation()
{
    const auto start = std::chrono::steady_clock::now();
    auto in = test_util::load_pipeline_inputs(test_util::fixture_dir() / "mini/config.txt");
    std::set<ScenarioId> scenarios;
    std::set<int> years;
    for (const auto& r : in.table.energy) {
        scenarios.insert(r.scenario);
        years.insert(r.year);
    }
    in.cfg.scenarios.assign(scenarios.begin(), scenarios.end());
    in.cfg.years.assign(years.begin(), years.end());
    const auto loads = report::run_downscale(in.cfg, in.table, in.map, {many_threads(), false});

    Checks checks;
    double worst = 0.0;
    for (const auto& l : loads) {
        for (const auto& s : l.state_class) {
            const double mwh = std::accumulate(s.mw.begin(), s.mw.end(), 0.0);
            const double expected = downscale::ej_to_mwh(s.annual_ej);
            const double err = expected > 0.0 ? std::abs(mwh - expected) / expected : std::abs(mwh);
            worst = std::max(worst, err);
            checks.expect(err <= 1e-6, fmt::format("{} {} {} {}: rel err {:.3g}", l.scenario.str(), l.year,
                                                   s.state.str(), to_token(s.vclass), err));
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    checks.expect(seconds < 60.0, fmt::format("runtime {:.1f} s", seconds));
    return checks.verdict(fmt::format("max relative error {:.2e}, {:.2f} s", worst, seconds));
}

Verdict metric_fixtures()
{
    using namespace metrics;
    const auto table = test_util::load_fixture_table("wecc_reference");
    const ScenarioId climate("nz_climate");
    const ScenarioId ccs("nz_ccs_climate");
    const ScenarioId ira("nz_ira_ccs_climate");
    const auto road = test_util::wecc_region(test_util::road_classes());
    const auto all = test_util::wecc_region(test_util::all_classes());

    Checks checks;
    auto exact = [&](const std::string& what, double got, double want) {
        checks.expect(std::abs(got - want) <= 1e-12, fmt::format("{} = {} (want {})", what, got, want));
    };
    auto near = [&](const std::string& what, double got, double want) {
        checks.expect(std::abs(got - want) <= 0.005 * want, fmt::format("{} = {} (want {} +-0.5%)", what, got, want));
    };
    exact("2025 ira energy", ev_energy_fraction(table, ira, 2025, road), 0.049);
    exact("2025 ira fleet", ev_fleet_fraction(table, ira, 2025, road), 0.075);
    exact("2025 ccs energy", ev_energy_fraction(table, ccs, 2025, road), 0.0196);
    exact("2025 ccs fleet", ev_fleet_fraction(table, ccs, 2025, road), 0.0286);
    exact("2050 ccs fleet", ev_fleet_fraction(table, ccs, 2050, road), 0.58);
    exact("2050 climate fleet", ev_fleet_fraction(table, climate, 2050, road), 0.70);

    const auto ccs2030 = fuel_mix(table, ccs, 2030, all);
    const auto ira2030 = fuel_mix(table, ira, 2030, all);
    const auto ccs2050 = fuel_mix(table, ccs, 2050, all);
    const auto climate2050 = fuel_mix(table, climate, 2050, all);
    near("2030 ccs refined", ccs2030[Fuel::RefinedLiquids], 4.70);
    near("2030 ira refined", ira2030[Fuel::RefinedLiquids], 4.53);
    near("2030 ccs electricity", ccs2030[Fuel::Electricity], 0.26);
    near("2030 ira electricity", ira2030[Fuel::Electricity], 0.40);
    near("2030 ccs hydrogen", ccs2030[Fuel::Hydrogen], 0.037);
    near("2030 ira hydrogen", ira2030[Fuel::Hydrogen], 0.063);
    near("2050 ccs refined", ccs2050[Fuel::RefinedLiquids], 2.7);
    near("2050 climate refined", climate2050[Fuel::RefinedLiquids], 1.5);
    near("2050 ccs electricity", ccs2050[Fuel::Electricity], 0.94);
    near("2050 climate electricity", climate2050[Fuel::Electricity], 1.27);
    return checks.verdict("fractions exact, fuel mix within 0.5%");
}

Verdict strategy_suite()
{
    using namespace sim;
    Checks checks;
    ChargingSession s;
    s.state = StateCode("CA");
    s.arrival_min = 0.0;
    s.departure_min = 300.0;
    s.energy_kwh = 10.0;
    s.charger_kw = 7.4;
    const auto mp = profile_min_power(s);
    checks.expect(mp.size() == 1 && std::abs(mp[0].power_kw - 2.0) < 1e-12 && mp[0].duration_min == 300.0,
                  "min-power 10 kWh over 5 h is 2 kW for 5 h");

    SeededRng rng(20240501);
    int reflect_bad = 0;
    int integral_bad = 0;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        ChargingSession t;
        t.state = StateCode("CA");
        t.arrival_min = rng.uniform01() * 40000.0;
        t.departure_min = t.arrival_min + 1.0 + rng.uniform01() * 1400.0;
        t.charger_kw = kChargerLevelsKw[rng.uniform_index(kChargerLevelsKw.size())];
        t.energy_kwh = std::max(1e-3, rng.uniform01() * t.charger_kw * t.dwell_hours());
        const auto imm = profile_immediate(t)[0];
        const auto del = profile_delayed(t)[0];
        if (std::abs((t.arrival_min + t.departure_min - del.end_min()) - imm.start_min) > 1e-9
            || del.duration_min != imm.duration_min || del.power_kw != imm.power_kw) {
            ++reflect_bad;
        }
        for (auto st : kAllStrategies) {
            t.strategy = st;
            double e = 0.0;
            for (const auto& seg : profile(t)) {
                e += seg.energy_kwh();
            }
            const double rel = std::abs(e - t.energy_kwh) / t.energy_kwh;
            worst = std::max(worst, rel);
            if (rel > 1e-9) {
                ++integral_bad;
            }
        }
    }
    checks.expect(reflect_bad == 0, fmt::format("{} delayed profiles are not reflected immediate ones", reflect_bad));
    checks.expect(integral_bad == 0, fmt::format("{} profile integrals off by more than 1e-9", integral_bad));
    return checks.verdict(fmt::format("10000 sessions, max integral error {:.2e}", worst));
}

Verdict enroute_regression()
{
    Checks checks;
    auto in = test_util::load_pipeline_inputs(test_util::fixture_dir() / "mhdv_reference/config.txt");
    checks.expect(std::abs(in.cfg.mobility.enroute.depot_share - 0.87) < 1e-15, "fixture depot share is 0.87");
    const auto with = report::run_downscale(in.cfg, in.table, in.map, {many_threads(), false});
    auto depot_only = in.cfg;
    depot_only.mobility.enroute.enabled = false;
    const auto without = report::run_downscale(depot_only, in.table, in.map, {many_threads(), false});

    std::string summary;
    for (std::size_t i = 0; i < with.size(); ++i) {
        const double peak_with = downscale::load_stats(with[i].total).peak;
        const double peak_without = downscale::load_stats(without[i].total).peak;
        checks.expect(with[i].counts.enroute_split > 0, "some sessions were split");
        checks.expect(peak_with <= peak_without,
                      fmt::format("{} {}: en-route peak {:.3f} MW > depot-only {:.3f} MW",
                                  with[i].scenario.str(), with[i].year, peak_with, peak_without));
        summary += fmt::format("peak {:.1f} vs {:.1f} MW; ", peak_with, peak_without);
    }

    sim::SeededRng rng(87);
    const auto& route_len = in.cfg.mobility.enroute.route_minutes;
    const double start_buffer = in.cfg.mobility.enroute.start_buffer_min;
    const double end_buffer = in.cfg.mobility.enroute.end_buffer_min;
    int violations = 0;
    int infeasible = 0;
    for (int i = 0; i < 10000; ++i) {
        const double arrival = rng.uniform01() * 40000.0;
        const sim::RouteSpec route{std::max(0.0, arrival - route_len.sample(rng)), arrival, start_buffer,
                                   end_buffer, in.cfg.mobility.enroute.enroute_share()};
        sim::ChargingSession s;
        s.vclass = i % 2 == 0 ? VehicleClass::MDV : VehicleClass::HDV;
        s.state = StateCode("WA");
        s.arrival_min = arrival;
        s.departure_min = arrival + 600.0;
        s.charger_kw = s.vclass == VehicleClass::MDV ? 50.0 : 150.0;
        s.energy_kwh = 10.0 + rng.uniform01() * 400.0;
        try {
            const auto split = sim::split_enroute(s, route, rng);
            const auto& e = *split.enroute;
            for (const auto& seg : sim::profile(e)) {
                if (seg.start_min < route.depot_departure_min + start_buffer
                    || seg.end_min() > route.depot_arrival_min - end_buffer + 1e-9) {
                    ++violations;
                }
            }
        } catch (const sim::SessionError& e) {
            if (e.kind() != sim::SessionError::Kind::NoFeasibleWindow) {
                throw;
            }
            ++infeasible;
        }
    }
    checks.expect(violations == 0, fmt::format("{} en-route segments outside the buffered window", violations));
    return checks.verdict(summary + fmt::format("10000 draws, 0 violations, {} without a window", infeasible));
}

int run_cli_with_threads(unsigned threads, const fs::path& out)
{
    const std::string cmd = fmt::format("VOLTPATH_THREADS={} {} downscale --config {} --out {} >/dev/null 2>&1",
                                        threads, VOLTPATH_CLI,
                                        (test_util::fixture_dir() / "mini/config.txt").string(), out.string());
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Verdict determinism()
{
    Checks checks;
    const unsigned n = many_threads();
    const auto one = test_util::scratch_dir("acceptance_det_1");
    const auto many = test_util::scratch_dir("acceptance_det_n");
    const auto again = test_util::scratch_dir("acceptance_det_n_again");
    checks.expect(run_cli_with_threads(1, one) == 0, "1-thread run exits 0");
    checks.expect(run_cli_with_threads(n, many) == 0, "N-thread run exits 0");
    checks.expect(run_cli_with_threads(n, again) == 0, "repeated N-thread run exits 0");
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(one)) {
        const auto name = entry.path().filename();
        const auto ref = test_util::read_file(entry.path());
        checks.expect(ref == test_util::read_file(many / name), name.string() + " differs at " + std::to_string(n) + " threads");
        checks.expect(ref == test_util::read_file(again / name), name.string() + " differs between repeated runs");
        ++files;
    }
    checks.expect(files == 5, fmt::format("{} output files", files));
    return checks.verdict(fmt::format("{} files byte-identical at 1 and {} threads", files, n));
}

/// WECC-wide hourly series of one published scenario-year, or nullopt if
/// the file is absent.
std::optional<std::vector<double>> dataset_total(const fs::path& dir, const std::string& scenario, int year)
{
    const auto path = dir / fmt::format("load_{}_{}.csv", scenario, year);
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    const auto table = downscale::read_load_csv(in);
    if (const auto it = table.series.find(downscale::kRegionTotalId); it != table.series.end()) {
        return it->second;
    }
    std::map<std::string, std::vector<double>> bas = table.series;
    return downscale::total_of(bas);
}

Verdict dataset_checks()
{
    const char* env = std::getenv("VOLTPATH_DATASET_DIR");
    if (env == nullptr || *env == '\0') {
        return skip("VOLTPATH_DATASET_DIR is not set; no published load tables available");
    }
    const fs::path dir(env);
    const char* needed[][2] = {{"nz_ccs_climate", "2035"}, {"nz_ira_ccs_climate", "2035"},
                               {"nz_ccs_climate", "2050"}, {"nz_climate", "2050"}};
    std::map<std::pair<std::string, int>, std::vector<double>> totals;
    for (const auto& [scenario, year] : needed) {
        auto series = dataset_total(dir, scenario, std::stoi(year));
        if (!series) {
            return skip(fmt::format("{} lacks load_{}_{}.csv", dir.string(), scenario, year));
        }
        totals[{scenario, std::stoi(year)}] = std::move(*series);
    }

    Checks checks;
    auto stats = [&](const char* s, int y) { return downscale::load_stats(totals.at({s, y})); };
    auto gap = [&](const char* s, int y) {
        return downscale::seasonal_peak_gap(downscale::seasonal_average(totals.at({s, y})));
    };
    auto within = [&](const std::string& what, double got_mw, double want_gw, double rel) {
        const double got = got_mw / 1000.0;
        checks.expect(std::abs(got - want_gw) <= rel * want_gw,
                      fmt::format("{} {:.2f} GW (want {} GW +-{:.0f}%)", what, got, want_gw, rel * 100.0));
    };
    within("2035 ira spread", stats("nz_ira_ccs_climate", 2035).spread, 21.0, 0.05);
    within("2035 ccs spread", stats("nz_ccs_climate", 2035).spread, 16.0, 0.05);
    within("2050 climate spread", stats("nz_climate", 2050).spread, 26.0, 0.05);
    within("2050 ccs spread", stats("nz_ccs_climate", 2050).spread, 20.0, 0.05);

    auto delta = [&](const std::string& what, double a, double b, double want) {
        const double d = metrics::scenario_delta(a, b);
        checks.expect(std::abs(d - want) <= 0.05, fmt::format("{} {:+.1f}% (want {:+.0f}% +-5 pp)", what, 100.0 * d, 100.0 * want));
    };
    delta("2035 peak ira vs ccs", stats("nz_ccs_climate", 2035).peak, stats("nz_ira_ccs_climate", 2035).peak, 0.25);
    delta("2050 peak climate vs ccs", stats("nz_ccs_climate", 2050).peak, stats("nz_climate", 2050).peak, 0.33);

    within("2035 ira seasonal gap", gap("nz_ira_ccs_climate", 2035), 3.5, 0.15);
    within("2035 ccs seasonal gap", gap("nz_ccs_climate", 2035), 2.7, 0.15);
    within("2050 ccs seasonal gap", gap("nz_ccs_climate", 2050), 4.0, 0.15);
    within("2050 climate seasonal gap", gap("nz_climate", 2050), 6.0, 0.15);

    for (const auto& [key, series] : totals) {
        const auto [morning, afternoon] = downscale::half_day_peak_hours(downscale::daily_average(series));
        const int want_morning = key.second == 2035 ? 5 : 4;
        checks.expect(downscale::circular_hour_distance(morning, want_morning) <= 1
                          && downscale::circular_hour_distance(afternoon, 15) <= 1,
                      fmt::format("{} {} peaks at {}h/{}h UTC (want {}h/15h +-1)", key.first, key.second, morning,
                                  afternoon, want_morning));
    }
    return checks.verdict("published WECC totals");
}

Verdict partition_property()
{
    sim::SeededRng rng(1000);
    const char* states[] = {"AZ", "CA", "NV", "OR", "WA"};
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        ingest::BAAllocationMap map;
        std::vector<downscale::StateGroupSeries> in;
        for (const auto* st : states) {
            for (auto group : kAllGroups) {
                if (rng.uniform01() < 0.3) {
                    continue;
                }
                const auto k = 1 + rng.uniform_index(5);
                std::vector<double> w(k);
                for (auto& x : w) {
                    x = rng.uniform01() + 1e-6;
                }
                const double sum = std::accumulate(w.begin(), w.end(), 0.0);
                std::vector<ingest::BaShare> shares;
                std::set<std::string> used;
                for (std::size_t i = 0; i < k; ++i) {
                    std::string id;
                    do {
                        id = fmt::format("BA{}", rng.uniform_index(12));
                    } while (!used.insert(id).second);
                    shares.push_back({id, w[i] / sum});
                }
                map.set(StateCode(st), group, shares);
                std::vector<double> mw(calendar::kHoursPerYear);
                for (auto& v : mw) {
                    v = rng.uniform01() * 20000.0;
                }
                in.push_back({StateCode(st), group, std::move(mw)});
            }
        }
        const auto bas = downscale::allocate_to_bas(in, map);
        for (std::size_t h = 0; h < calendar::kHoursPerYear; ++h) {
            double states_sum = 0.0;
            for (const auto& s : in) {
                states_sum += s.mw[h];
            }
            double ba_sum = 0.0;
            for (const auto& [id, mw] : bas) {
                ba_sum += mw[h];
            }
            worst = std::max(worst, std::abs(ba_sum - states_sum));
        }
    }
    if (worst > 1e-9) {
        return fail(fmt::format("max |BA sum - state sum| {:.3e} MW exceeds 1e-9", worst));
    }
    return pass(fmt::format("1000 random maps, max |BA sum - state sum| {:.3e} MW", worst));
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"energy_conservation", energy_conservation},
        {"metric_fixture_reproduction", metric_fixtures},
        {"strategy_unit_suite", strategy_suite},
        {"enroute_regression", enroute_regression},
        {"determinism", determinism},
        {"dataset_checks", dataset_checks},
        {"partition_property", partition_property},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = fail(std::string("exception: ") + e.what());
        }
        const char* label = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIP";
        std::cout << label << ' ' << name << ": " << v.detail << '\n';
        failures += v.outcome == Outcome::Fail ? 1 : 0;
    }
    return failures == 0 ? 0 : 1;
}
