#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voltpath::csv {

/// Split one comma-delimited record. Double-quoted fields may contain commas
/// and doubled quotes (""). Whitespace around unquoted fields and after a
/// closing quote is dropped. Throws std::invalid_argument on an unterminated
/// quote.
std::vector<std::string> split_record(std::string_view line);

/// Line reader that strips a trailing '\r', skips blank lines and tracks the
/// 1-based physical line number of the last record returned.
class RecordReader {
public:
    explicit RecordReader(std::istream& in)
        : in_(in)
    {
    }

    std::optional<std::vector<std::string>> next();
    std::size_t line_number() const { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

/// Quote a field if it contains a delimiter, quote or whitespace at an edge.
std::string escape_field(std::string_view field);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Strict number parsing: the whole field must be consumed.
std::optional<double> parse_double(std::string_view field);
std::optional<long long> parse_int(std::string_view field);

} // namespace voltpath::csv
