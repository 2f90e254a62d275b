#pragma once

#include "voltpath/types.h"

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace voltpath::ingest {

struct EnergyRecord {
    ScenarioId scenario;
    int year = 0;
    StateCode state;
    VehicleClass vclass = VehicleClass::LDV;
    Fuel fuel = Fuel::Electricity;
    double energy_ej = 0.0; ///< EJ per year

    bool operator==(const EnergyRecord&) const = default;
};

struct FleetRecord {
    ScenarioId scenario;
    int year = 0;
    StateCode state;
    VehicleClass vclass = VehicleClass::LDV; ///< road classes only
    Powertrain powertrain = Powertrain::EV;
    double count = 0.0;

    bool operator==(const FleetRecord&) const = default;
};

struct PopulationRecord {
    StateCode state;
    int year = 0;
    double persons = 0.0;

    bool operator==(const PopulationRecord&) const = default;
};

struct ScenarioTable {
    std::vector<EnergyRecord> energy;
    std::vector<FleetRecord> fleet;
    std::vector<PopulationRecord> population;

    void merge(ScenarioTable other);
    bool operator==(const ScenarioTable&) const = default;
};

enum class TableKind { Energy, Fleet, Population };

/// Strict parsing rejects out-of-range values and duplicate keys. Lenient
/// parsing only rejects rows it cannot type (bad numbers, unknown tokens) and
/// leaves invariant checks to validate_table.
enum class ParseMode { Strict, Lenient };

class IngestError : public std::runtime_error {
public:
    enum class Kind { MalformedHeader, BadValue, DuplicateKey, WeightSumError, UnknownState };

    IngestError(Kind kind, const std::string& message, std::size_t row = 0);

    Kind kind() const { return kind_; }
    /// 1-based line number in the source, 0 if not row specific.
    std::size_t row() const { return row_; }

private:
    Kind kind_;
    std::size_t row_;
};

std::string_view header_for(TableKind kind);

ScenarioTable parse_scenario_csv(std::istream& source, TableKind kind,
                                 ParseMode mode = ParseMode::Strict);

/// Writes the records of one kind with the canonical header, in stored order.
void write_scenario_csv(std::ostream& out, const ScenarioTable& table, TableKind kind);

constexpr int kFirstYear = 2015;
constexpr int kLastYear = 2100;
constexpr int kYearStep = 5;

constexpr bool is_model_year(int year)
{
    return year >= kFirstYear && year <= kLastYear && year % kYearStep == 0;
}

struct Violation {
    std::string code; ///< e.g. "negative_energy", "orphan_fleet"
    std::string key;  ///< record key, comma separated
    std::string detail;
};

using ValidationReport = std::vector<Violation>;

/// Every invariant violation in the table. Empty means valid.
ValidationReport validate_table(const ScenarioTable& table);

struct BaShare {
    std::string ba_id;
    double weight = 0.0;

    bool operator==(const BaShare&) const = default;
};

class BAAllocationMap {
public:
    using Key = std::pair<StateCode, VClassGroup>;

    /// Shares for a (state, group), or nullptr when unmapped.
    const std::vector<BaShare>* find(const StateCode& state, VClassGroup group) const;

    const std::map<Key, std::vector<BaShare>>& entries() const { return entries_; }
    std::set<std::string> ba_ids() const;
    std::set<StateCode> states() const;

    /// Adds shares for a key; weights must already sum to one.
    void set(const StateCode& state, VClassGroup group, std::vector<BaShare> shares);

private:
    std::map<Key, std::vector<BaShare>> entries_;
};

inline constexpr double kWeightSumTolerance = 1e-6;

/// Reads `state,vclass_group,ba_id,weight`. Per-key weight sums within
/// kWeightSumTolerance of one are renormalized; larger deviations throw.
BAAllocationMap load_ba_map(std::istream& source);

} // namespace voltpath::ingest
