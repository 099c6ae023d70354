#include "aspectra/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aspectra/error.hpp"

namespace aspectra {
namespace {

using Record = std::vector<std::string>;

// Splits RFC-4180-style text into records. Quoted fields may contain commas,
// doubled quotes and newlines.
std::vector<Record> split_records(const std::string& text) {
    std::vector<Record> records;
    Record current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        current.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = current.size() == 1 && current[0].find_first_not_of(" \t") == std::string::npos;
        if (!blank) records.push_back(std::move(current));
        current.clear();
    };

    std::size_t i = 0;
    if (text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;  // UTF-8 BOM
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && field.find_first_not_of(" \t") != std::string::npos) {
                    throw Error(Errc::MalformedInput, "stray quote inside unquoted field");
                }
                field.clear();
                in_quotes = true;
                field_started = true;
                break;
            case ',': end_field(); break;
            case '\r': break;
            case '\n': end_record(); break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (in_quotes) throw Error(Errc::MalformedInput, "unterminated quoted field");
    if (field_started || !field.empty() || !current.empty()) end_record();
    return records;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool parse_real(std::string_view cell, double& out) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    if (cell.empty()) return false;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace

LoadedTable parse_table(const std::string& text, const std::optional<std::string>& target) {
    const auto records = split_records(text);
    if (records.empty()) throw Error(Errc::EmptyTable, "no header row");
    if (records.size() < 2) throw Error(Errc::EmptyTable, "header present but no data rows");

    std::vector<std::string> header;
    header.reserve(records[0].size());
    for (const auto& h : records[0]) header.emplace_back(trim(h));

    std::size_t target_col = header.size();
    if (target) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (header[j] == *target) target_col = j;
        }
        if (target_col == header.size()) throw Error(Errc::MissingTarget, *target);
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != target_col) names.push_back(header[j]);
    }
    if (names.empty()) throw Error(Errc::EmptyTable, "no feature columns");

    const std::size_t n = records.size() - 1;
    std::vector<double> values;
    values.reserve(n * names.size());
    std::vector<double> y;
    if (target) y.reserve(n);

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size()) {
            throw Error(Errc::MalformedInput, "row " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                                                  " fields, header has " + std::to_string(header.size()));
        }
        for (std::size_t j = 0; j < rec.size(); ++j) {
            double v = 0.0;
            if (!parse_real(rec[j], v)) {
                throw Error(Errc::NonNumericCell, "row " + std::to_string(r) + ", column '" + header[j] +
                                                      "': '" + rec[j] + "'");
            }
            if (j == target_col) {
                y.push_back(v);
            } else {
                values.push_back(v);
            }
        }
    }

    LoadedTable out{NumericTable(std::move(names), std::move(values)), std::nullopt};
    if (target) out.target = std::move(y);
    return out;
}

LoadedTable load_table(const std::filesystem::path& path, const std::optional<std::string>& target) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_table(buf.str(), target);
}

std::string format_double17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

std::string format_table(const NumericTable& table) {
    std::string out;
    for (std::size_t j = 0; j < table.cols(); ++j) {
        if (j) out.push_back(',');
        out += quote_if_needed(table.column_name(j));
    }
    out.push_back('\n');
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < table.cols(); ++j) {
            if (j) out.push_back(',');
            out += format_double17(table.at(i, j));
        }
        out.push_back('\n');
    }
    return out;
}

void save_table(const std::filesystem::path& path, const NumericTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path.string() + "'");
    out << format_table(table);
}

}  // namespace aspectra
