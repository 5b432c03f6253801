#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "iwasawa/growth.hpp"

// Rendering of growth reports. Big integers are written as bare JSON numbers
// and read back without going through floating point.

namespace iwasawa::report {

enum class Format { Table, Json, Csv };

Format format_from_string(std::string_view name);
std::string to_string(Format format);

/// Column names in output order.
const std::vector<std::string>& column_names();

std::string render(const growth::GrowthReport& report, Format format);
std::string render_table(const growth::GrowthReport& report);
std::string render_json(const growth::GrowthReport& report);
std::string render_csv(const growth::GrowthReport& report);

/// Inverse of render_json. Throws ParseError.
growth::GrowthReport parse_json(std::string_view text);

/// Shortest decimal string that reads back as the same double.
std::string format_double(double value);

}  // namespace iwasawa::report
