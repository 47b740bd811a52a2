#pragma once

#include <istream>
#include <string>
#include <vector>

namespace coval::csv {

struct Table {
    std::vector<std::string> header; // empty when the file had no header row
    std::vector<std::vector<std::string>> rows;
};

/// Parse comma-delimited text. Supports double-quoted fields with embedded
/// commas and "" escapes. Ragged rows raise std::runtime_error naming the
/// offending line; an input with no data rows raises as well.
Table parse(std::istream& in, bool has_header, const std::string& source_name);

Table read_file(const std::string& path, bool has_header);

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

} // namespace coval::csv
