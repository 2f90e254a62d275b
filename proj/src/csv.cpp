#include "voltpath/csv.h"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace voltpath::csv {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s)
{
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

std::vector<std::string> split_record(std::string_view line)
{
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
        while (pos < line.size() && is_space(line[pos])) {
            ++pos;
        }
        std::string field;
        if (pos < line.size() && line[pos] == '"') {
            ++pos;
            bool closed = false;
            while (pos < line.size()) {
                if (line[pos] == '"') {
                    if (pos + 1 < line.size() && line[pos + 1] == '"') {
                        field.push_back('"');
                        pos += 2;
                        continue;
                    }
                    ++pos;
                    closed = true;
                    break;
                }
                field.push_back(line[pos++]);
            }
            if (!closed) {
                throw std::invalid_argument("unterminated quoted field");
            }
            while (pos < line.size() && is_space(line[pos])) {
                ++pos;
            }
            if (pos < line.size() && line[pos] != ',') {
                throw std::invalid_argument("unexpected character after quoted field");
            }
        } else {
            const auto comma = line.find(',', pos);
            const auto end = comma == std::string_view::npos ? line.size() : comma;
            field = std::string(trim(line.substr(pos, end - pos)));
            pos = end;
        }
        fields.push_back(std::move(field));
        if (pos >= line.size()) {
            break;
        }
        ++pos; // skip ','
    }
    return fields;
}

std::optional<std::vector<std::string>> RecordReader::next()
{
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trim(line).empty()) {
            continue;
        }
        return split_record(line);
    }
    return std::nullopt;
}

std::string escape_field(std::string_view field)
{
    const bool needs_quotes = field.find_first_of(",\"\n") != std::string_view::npos
        || (!field.empty() && (is_space(field.front()) || is_space(field.back())));
    if (!needs_quotes) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_double(double value) { return fmt::format("{}", value); }

std::optional<double> parse_double(std::string_view field)
{
    field = trim(field);
    if (field.empty()) {
        return std::nullopt;
    }
    if (field.front() == '+') {
        field.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<long long> parse_int(std::string_view field)
{
    field = trim(field);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        return std::nullopt;
    }
    return value;
}

} // namespace voltpath::csv
