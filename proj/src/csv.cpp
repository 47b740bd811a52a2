#include "coval/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coval::csv {

namespace {

std::vector<std::string> split_line(const std::string& line, size_t line_no,
                                    const std::string& source_name) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) {
        throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                 ": unterminated quote");
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace

Table parse(std::istream& in, bool has_header, const std::string& source_name) {
    Table table;
    std::string line;
    size_t line_no = 0;
    size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line, line_no, source_name);
        if (has_header && table.header.empty() && table.rows.empty()) {
            table.header = std::move(fields);
            width = table.header.size();
            continue;
        }
        if (width == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(width) + " fields, got " +
                                     std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.rows.empty()) {
        throw std::runtime_error(source_name + ": no data rows");
    }
    return table;
}

Table read_file(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse(in, has_header, path);
}

void write_file(const std::string& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    auto emit = [&out](const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out << ',';
            const std::string& f = fields[i];
            if (f.find_first_of(",\"\n") != std::string::npos) {
                out << '"';
                for (char c : f) {
                    if (c == '"') out << "\"\"";
                    else out << c;
                }
                out << '"';
            } else {
                out << f;
            }
        }
        out << '\n';
    };
    if (!header.empty()) emit(header);
    for (const auto& row : rows) emit(row);
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace coval::csv
