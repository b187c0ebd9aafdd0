#include "tzl_cli/io.hpp"

#include "tzl/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tzl::cli {

namespace fs = std::filesystem;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_from_log(double log_value) {
    if (std::isnan(log_value)) return "nan";
    if (log_value == -INFINITY) return "0";
    const double v = std::exp(log_value);
    if (v >= 1e-300 && std::isfinite(v)) return format_double(v);
    const double l10 = log_value / std::log(10.0);
    double e = std::floor(l10);
    double mant = std::pow(10.0, l10 - e);
    if (mant >= 10.0) {
        mant /= 10.0;
        e += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16fe%+.0f", mant, e);
    return buf;
}

Cell Cell::from_log(double log_value) {
    Cell c(0.0);
    c.kind_ = Kind::log_real;
    c.v_ = log_value;
    return c;
}

std::string Cell::csv() const {
    switch (kind_) {
    case Kind::real: return format_double(v_);
    case Kind::log_real: return format_from_log(v_);
    case Kind::integer: return std::to_string(i_);
    case Kind::text: return s_;
    }
    return {};
}

nlohmann::ordered_json Cell::json() const {
    switch (kind_) {
    case Kind::real:
        if (!std::isfinite(v_)) return format_double(v_);
        if (v_ != 0.0 && std::abs(std::log10(std::abs(v_))) > 300) return format_double(v_);
        return v_;
    case Kind::log_real: {
        const double l10 = v_ / std::log(10.0);
        if (std::isfinite(v_) && std::abs(l10) <= 300) return std::exp(v_);
        if (v_ == -INFINITY) return 0.0;
        return format_from_log(v_);
    }
    case Kind::integer: return i_;
    case Kind::text: return s_;
    }
    return nullptr;
}

void Table::add(std::vector<Cell> row) {
    require(row.size() == columns.size(), "table " + name + ": row width does not match the header");
    rows.push_back(std::move(row));
}

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    require(static_cast<bool>(in), "cannot read '" + file.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

bool parses_as_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

void check(bool ok, const fs::path& file, const std::string& what) {
    if (!ok) throw std::runtime_error("schema check failed for " + file.filename().string() + ": " + what);
}

} // namespace

void validate_csv(const fs::path& file, const Table& t) {
    const std::string text = read_file(file);
    check(text.find('\r') == std::string::npos, file, "CR in line endings");
    check(!text.empty() && text.back() == '\n', file, "missing final LF");
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::string header;
    for (std::size_t i = 0; i < t.columns.size(); ++i) header += (i ? "," : "") + t.columns[i];
    check(line == header, file, "header '" + line + "' != '" + header + "'");
    std::size_t n = 0;
    while (std::getline(in, line)) {
        const auto cells = split(line);
        check(cells.size() == t.columns.size(), file, "row " + std::to_string(n) + " has the wrong width");
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (n < t.rows.size() && t.rows[n][c].numeric())
                check(parses_as_number(cells[c]), file,
                      "row " + std::to_string(n) + " column " + t.columns[c] + " is not numeric");
        ++n;
    }
    check(n == t.rows.size(), file, "row count mismatch");
}

void validate_json_table(const fs::path& file, const Table& t) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(file));
    } catch (const nlohmann::json::exception& e) {
        check(false, file, e.what());
    }
    check(j.is_array() && j.size() == t.rows.size(), file, "expected an array with one object per row");
    for (const auto& row : j) {
        check(row.is_object() && row.size() == t.columns.size(), file, "row object has the wrong keys");
        for (const auto& c : t.columns) check(row.contains(c), file, "missing key " + c);
    }
}

std::string write_table(const fs::path& dir, const Table& t, const std::string& format) {
    const std::string fname = t.name + (format == "json" ? ".json" : ".csv");
    const fs::path file = dir / fname;
    {
        std::ofstream out(file, std::ios::binary);
        require(static_cast<bool>(out), "cannot write '" + file.string() + "'");
        if (format == "json") {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& row : t.rows) {
                nlohmann::ordered_json o;
                for (std::size_t c = 0; c < t.columns.size(); ++c) o[t.columns[c]] = row[c].json();
                arr.push_back(std::move(o));
            }
            out << arr.dump(1) << '\n';
        } else {
            for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
            out << '\n';
            std::string line;
            for (const auto& row : t.rows) {
                line.clear();
                for (std::size_t c = 0; c < row.size(); ++c) {
                    if (c) line += ',';
                    line += row[c].csv();
                }
                line += '\n';
                out << line;
            }
        }
    }
    if (format == "json") validate_json_table(file, t);
    else validate_csv(file, t);
    return fname;
}

std::string write_json(const fs::path& dir, const std::string& name, const nlohmann::ordered_json& j) {
    const std::string fname = name + ".json";
    const fs::path file = dir / fname;
    {
        std::ofstream out(file, std::ios::binary);
        require(static_cast<bool>(out), "cannot write '" + file.string() + "'");
        out << j.dump(2) << '\n';
    }
    try {
        const auto back = nlohmann::json::parse(read_file(file));
        check(back.is_object(), file, "expected a JSON object");
    } catch (const nlohmann::json::exception& e) {
        check(false, file, e.what());
    }
    return fname;
}

} // namespace tzl::cli
