#include "voltpath/scenario_ingest.h"

#include "voltpath/csv.h"

#include <cmath>
#include <sstream>
#include <tuple>

namespace voltpath::ingest {

IngestError::IngestError(Kind kind, const std::string& message, std::size_t row)
    : std::runtime_error(row > 0 ? "line " + std::to_string(row) + ": " + message : message)
    , kind_(kind)
    , row_(row)
{
}

void ScenarioTable::merge(ScenarioTable other)
{
    energy.insert(energy.end(), other.energy.begin(), other.energy.end());
    fleet.insert(fleet.end(), other.fleet.begin(), other.fleet.end());
    population.insert(population.end(), other.population.begin(), other.population.end());
}

std::string_view header_for(TableKind kind)
{
    switch (kind) {
    case TableKind::Energy: return "scenario,year,state,vclass,fuel,energy_EJ";
    case TableKind::Fleet: return "scenario,year,state,vclass,powertrain,count";
    case TableKind::Population: return "state,year,persons";
    }
    return "";
}

namespace {

using Kind = IngestError::Kind;

class RowParser {
public:
    RowParser(const std::vector<std::string>& fields, std::size_t row)
        : fields_(fields)
        , row_(row)
    {
    }

    ScenarioId scenario(std::size_t i) const
    {
        if (!ScenarioId::is_valid(fields_[i])) {
            fail("invalid scenario id '" + fields_[i] + "'");
        }
        return ScenarioId(fields_[i]);
    }

    StateCode state(std::size_t i) const
    {
        if (!StateCode::is_well_formed(fields_[i])) {
            fail("invalid state code '" + fields_[i] + "'");
        }
        return StateCode(fields_[i]);
    }

    int year(std::size_t i) const
    {
        const auto value = csv::parse_int(fields_[i]);
        if (!value) {
            fail("non-integer year '" + fields_[i] + "'");
        }
        return static_cast<int>(*value);
    }

    double number(std::size_t i) const
    {
        const auto value = csv::parse_double(fields_[i]);
        if (!value) {
            fail("non-numeric value '" + fields_[i] + "'");
        }
        return *value;
    }

    template <typename Parse>
    auto token(std::size_t i, Parse parse, const char* what) const
    {
        const auto value = parse(fields_[i]);
        if (!value) {
            fail(std::string("unknown ") + what + " token '" + fields_[i] + "'");
        }
        return *value;
    }

    [[noreturn]] void fail(const std::string& message) const
    {
        throw IngestError(Kind::BadValue, message, row_);
    }

private:
    const std::vector<std::string>& fields_;
    std::size_t row_;
};

std::vector<std::string> expected_columns(TableKind kind)
{
    return csv::split_record(header_for(kind));
}

} // namespace

ScenarioTable parse_scenario_csv(std::istream& source, TableKind kind, ParseMode mode)
{
    csv::RecordReader reader(source);
    const auto columns = expected_columns(kind);

    std::optional<std::vector<std::string>> header;
    try {
        header = reader.next();
    } catch (const std::invalid_argument& e) {
        throw IngestError(Kind::MalformedHeader, e.what(), reader.line_number());
    }
    if (!header || *header != columns) {
        throw IngestError(Kind::MalformedHeader,
                          "expected header '" + std::string(header_for(kind)) + "'",
                          reader.line_number());
    }

    const bool strict = mode == ParseMode::Strict;
    ScenarioTable table;
    std::set<std::string> keys;

    while (true) {
        std::optional<std::vector<std::string>> fields;
        try {
            fields = reader.next();
        } catch (const std::invalid_argument& e) {
            throw IngestError(Kind::BadValue, e.what(), reader.line_number());
        }
        if (!fields) {
            break;
        }
        const auto row = reader.line_number();
        if (fields->size() != columns.size()) {
            throw IngestError(Kind::BadValue,
                              "expected " + std::to_string(columns.size()) + " fields, got "
                                  + std::to_string(fields->size()),
                              row);
        }
        const RowParser p(*fields, row);

        std::string key;
        switch (kind) {
        case TableKind::Energy: {
            EnergyRecord r{p.scenario(0), p.year(1), p.state(2),
                           p.token(3, parse_vehicle_class, "vclass"),
                           p.token(4, parse_fuel, "fuel"), p.number(5)};
            if (strict && !is_model_year(r.year)) {
                p.fail("year " + std::to_string(r.year) + " is not a model year");
            }
            if (strict && r.energy_ej < 0.0) {
                p.fail("negative energy");
            }
            key = (*fields)[0] + ',' + (*fields)[1] + ',' + (*fields)[2] + ',' + (*fields)[3]
                + ',' + (*fields)[4];
            table.energy.push_back(std::move(r));
            break;
        }
        case TableKind::Fleet: {
            FleetRecord r{p.scenario(0), p.year(1), p.state(2),
                          p.token(3, parse_vehicle_class, "vclass"),
                          p.token(4, parse_powertrain, "powertrain"), p.number(5)};
            if (strict && !is_model_year(r.year)) {
                p.fail("year " + std::to_string(r.year) + " is not a model year");
            }
            if (strict && !is_road(r.vclass)) {
                p.fail("fleet records are limited to ldv, mdv and hdv");
            }
            if (strict && r.count < 0.0) {
                p.fail("negative count");
            }
            key = (*fields)[0] + ',' + (*fields)[1] + ',' + (*fields)[2] + ',' + (*fields)[3]
                + ',' + (*fields)[4];
            table.fleet.push_back(std::move(r));
            break;
        }
        case TableKind::Population: {
            PopulationRecord r{p.state(0), p.year(1), p.number(2)};
            if (strict && r.persons <= 0.0) {
                p.fail("population must be positive");
            }
            key = (*fields)[0] + ',' + (*fields)[1];
            table.population.push_back(std::move(r));
            break;
        }
        }
        if (strict && !keys.insert(key).second) {
            throw IngestError(Kind::DuplicateKey, "duplicate key " + key, row);
        }
    }
    return table;
}

void write_scenario_csv(std::ostream& out, const ScenarioTable& table, TableKind kind)
{
    out << header_for(kind) << '\n';
    switch (kind) {
    case TableKind::Energy:
        for (const auto& r : table.energy) {
            out << r.scenario.str() << ',' << r.year << ',' << r.state.str() << ','
                << to_token(r.vclass) << ',' << to_token(r.fuel) << ','
                << csv::format_double(r.energy_ej) << '\n';
        }
        break;
    case TableKind::Fleet:
        for (const auto& r : table.fleet) {
            out << r.scenario.str() << ',' << r.year << ',' << r.state.str() << ','
                << to_token(r.vclass) << ',' << to_token(r.powertrain) << ','
                << csv::format_double(r.count) << '\n';
        }
        break;
    case TableKind::Population:
        for (const auto& r : table.population) {
            out << r.state.str() << ',' << r.year << ',' << csv::format_double(r.persons) << '\n';
        }
        break;
    }
}

ValidationReport validate_table(const ScenarioTable& table)
{
    ValidationReport report;
    auto add = [&report](std::string code, std::string key, std::string detail) {
        report.push_back({std::move(code), std::move(key), std::move(detail)});
    };
    auto check_state = [&](const StateCode& state, const std::string& key) {
        if (!is_us_state(state)) {
            add("unknown_state", key, "'" + state.str() + "' is not a U.S. state code");
        }
    };
    auto check_year = [&](int year, const std::string& key) {
        if (!is_model_year(year)) {
            add("bad_year", key, "year " + std::to_string(year) + " is not a model year");
        }
    };

    using ScenarioYearState = std::tuple<ScenarioId, int, StateCode>;
    std::set<ScenarioYearState> with_energy;
    std::set<std::string> seen;

    for (const auto& r : table.energy) {
        const auto key = r.scenario.str() + ',' + std::to_string(r.year) + ',' + r.state.str()
            + ',' + std::string(to_token(r.vclass)) + ',' + std::string(to_token(r.fuel));
        if (!seen.insert("e:" + key).second) {
            add("duplicate_key", key, "duplicate energy record");
        }
        if (!(r.energy_ej >= 0.0)) {
            add("negative_energy", key, "energy " + csv::format_double(r.energy_ej) + " EJ");
        }
        check_year(r.year, key);
        check_state(r.state, key);
        with_energy.emplace(r.scenario, r.year, r.state);
    }

    std::set<ScenarioYearState> orphans_reported;
    for (const auto& r : table.fleet) {
        const auto key = r.scenario.str() + ',' + std::to_string(r.year) + ',' + r.state.str()
            + ',' + std::string(to_token(r.vclass)) + ',' + std::string(to_token(r.powertrain));
        if (!seen.insert("f:" + key).second) {
            add("duplicate_key", key, "duplicate fleet record");
        }
        if (!(r.count >= 0.0)) {
            add("negative_count", key, "count " + csv::format_double(r.count));
        }
        if (!is_road(r.vclass)) {
            add("fleet_class", key, "fleet records are limited to ldv, mdv and hdv");
        }
        check_year(r.year, key);
        check_state(r.state, key);
        const ScenarioYearState sys{r.scenario, r.year, r.state};
        if (!with_energy.contains(sys) && orphans_reported.insert(sys).second) {
            add("orphan_fleet", r.scenario.str() + ',' + std::to_string(r.year) + ',' + r.state.str(),
                "fleet records without any energy record");
        }
    }

    for (const auto& r : table.population) {
        const auto key = r.state.str() + ',' + std::to_string(r.year);
        if (!seen.insert("p:" + key).second) {
            add("duplicate_key", key, "duplicate population record");
        }
        if (!(r.persons > 0.0)) {
            add("nonpositive_population", key, "persons " + csv::format_double(r.persons));
        }
        check_state(r.state, key);
    }
    return report;
}

const std::vector<BaShare>* BAAllocationMap::find(const StateCode& state, VClassGroup group) const
{
    const auto it = entries_.find({state, group});
    return it == entries_.end() ? nullptr : &it->second;
}

std::set<std::string> BAAllocationMap::ba_ids() const
{
    std::set<std::string> ids;
    for (const auto& [key, shares] : entries_) {
        for (const auto& s : shares) {
            ids.insert(s.ba_id);
        }
    }
    return ids;
}

std::set<StateCode> BAAllocationMap::states() const
{
    std::set<StateCode> out;
    for (const auto& [key, shares] : entries_) {
        out.insert(key.first);
    }
    return out;
}

void BAAllocationMap::set(const StateCode& state, VClassGroup group, std::vector<BaShare> shares)
{
    entries_[{state, group}] = std::move(shares);
}

BAAllocationMap load_ba_map(std::istream& source)
{
    csv::RecordReader reader(source);
    const auto columns = csv::split_record("state,vclass_group,ba_id,weight");
    std::optional<std::vector<std::string>> header;
    try {
        header = reader.next();
    } catch (const std::invalid_argument& e) {
        throw IngestError(Kind::MalformedHeader, e.what(), reader.line_number());
    }
    if (!header || *header != columns) {
        throw IngestError(Kind::MalformedHeader, "expected header 'state,vclass_group,ba_id,weight'",
                          reader.line_number());
    }

    std::map<BAAllocationMap::Key, std::vector<BaShare>> raw;
    std::map<BAAllocationMap::Key, std::size_t> first_row;
    while (true) {
        std::optional<std::vector<std::string>> fields;
        try {
            fields = reader.next();
        } catch (const std::invalid_argument& e) {
            throw IngestError(Kind::BadValue, e.what(), reader.line_number());
        }
        if (!fields) {
            break;
        }
        const auto row = reader.line_number();
        if (fields->size() != columns.size()) {
            throw IngestError(Kind::BadValue, "expected 4 fields", row);
        }
        const auto& f = *fields;
        if (!StateCode::is_well_formed(f[0]) || !is_us_state(StateCode(f[0]))) {
            throw IngestError(Kind::UnknownState, "unknown state '" + f[0] + "'", row);
        }
        const auto group = parse_vclass_group(f[1]);
        if (!group) {
            throw IngestError(Kind::BadValue, "unknown vclass_group token '" + f[1] + "'", row);
        }
        if (f[2].empty()) {
            throw IngestError(Kind::BadValue, "empty ba_id", row);
        }
        const auto weight = csv::parse_double(f[3]);
        if (!weight || *weight < 0.0 || *weight > 1.0) {
            throw IngestError(Kind::BadValue, "weight '" + f[3] + "' outside [0,1]", row);
        }
        const BAAllocationMap::Key key{StateCode(f[0]), *group};
        auto& shares = raw[key];
        for (const auto& s : shares) {
            if (s.ba_id == f[2]) {
                throw IngestError(Kind::DuplicateKey, "duplicate ba_id " + f[2] + " for " + f[0] + ","
                                      + f[1],
                                  row);
            }
        }
        shares.push_back({f[2], *weight});
        first_row.try_emplace(key, row);
    }

    BAAllocationMap map;
    for (auto& [key, shares] : raw) {
        double sum = 0.0;
        for (const auto& s : shares) {
            sum += s.weight;
        }
        if (!(std::abs(sum - 1.0) <= kWeightSumTolerance)) {
            std::ostringstream msg;
            msg << "weights for " << key.first.str() << ',' << to_token(key.second) << " sum to "
                << csv::format_double(sum);
            throw IngestError(Kind::WeightSumError, msg.str(), first_row[key]);
        }
        for (auto& s : shares) {
            s.weight /= sum;
        }
        map.set(key.first, key.second, std::move(shares));
    }
    return map;
}

} // namespace voltpath::ingest
