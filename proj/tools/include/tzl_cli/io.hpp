#pragma once

// Tabular artifacts: CSV with 17 significant digits and LF endings, or JSON
// arrays of row objects. Every file is re-read and checked after writing.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tzl::cli {

/// One table cell. Values known only through their logarithm keep full
/// range: below 1e-300 they are printed from the log.
class Cell {
public:
    Cell(double v) : kind_(Kind::real), v_(v) {}
    Cell(int v) : kind_(Kind::integer), i_(v) {}
    Cell(long v) : kind_(Kind::integer), i_(v) {}
    Cell(long long v) : kind_(Kind::integer), i_(v) {}
    Cell(unsigned long v) : kind_(Kind::integer), i_(static_cast<long long>(v)) {}
    Cell(unsigned long long v) : kind_(Kind::integer), i_(static_cast<long long>(v)) {}
    Cell(bool v) : kind_(Kind::integer), i_(v ? 1 : 0) {}
    Cell(std::string s) : kind_(Kind::text), s_(std::move(s)) {}
    Cell(const char* s) : kind_(Kind::text), s_(s) {}
    static Cell from_log(double log_value);

    std::string csv() const;
    nlohmann::ordered_json json() const;
    bool numeric() const noexcept { return kind_ != Kind::text; }

private:
    enum class Kind { real, log_real, integer, text };
    Kind kind_;
    double v_ = 0.0;
    long long i_ = 0;
    std::string s_;
};

struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

/// %.17g; inf/nan spelled inf, -inf, nan.
std::string format_double(double x);
/// Decimal rendering of exp(log_value) that survives underflow.
std::string format_from_log(double log_value);

/// Writes <dir>/<name>.csv or .json and validates it; returns the file name.
std::string write_table(const std::filesystem::path& dir, const Table& t, const std::string& format);

/// Header, field counts, line endings and numeric cells of a CSV file.
void validate_csv(const std::filesystem::path& file, const Table& t);
void validate_json_table(const std::filesystem::path& file, const Table& t);

/// Pretty JSON with a trailing LF, validated by re-parsing.
std::string write_json(const std::filesystem::path& dir, const std::string& name, const nlohmann::ordered_json& j);

std::string read_file(const std::filesystem::path& file);

} // namespace tzl::cli
