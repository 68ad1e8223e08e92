#include "rvfl/csv.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rvfl::csv {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_double(const std::string& field, double& out) {
    const std::string t = trim(field);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = begin + t.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        // from_chars does not accept hex floats or leading '+'; fall back.
        char* tail = nullptr;
        out = std::strtod(t.c_str(), &tail);
        return tail == t.c_str() + t.size();
    }
    return true;
}

}  // namespace

std::vector<std::vector<double>> load_numeric(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        std::vector<double> row;
        row.reserve(fields.size());
        bool ok = true;
        for (const auto& f : fields) {
            double v;
            if (!parse_double(f, v)) {
                ok = false;
                break;
            }
            row.push_back(v);
        }
        if (!ok) {
            if (rows.empty() && lineno == 1) continue;  // header row
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": non-numeric cell in CSV");
        }
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": ragged CSV row (expected " + std::to_string(width) +
                                     " columns, got " + std::to_string(row.size()) + ")");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Eigen::VectorXd> load_points(const std::string& path) {
    const auto rows = load_numeric(path);
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(rows.size());
    for (const auto& r : rows) {
        Eigen::VectorXd p(static_cast<Eigen::Index>(r.size()));
        for (std::size_t i = 0; i < r.size(); ++i) p[static_cast<Eigen::Index>(i)] = r[i];
        pts.push_back(std::move(p));
    }
    return pts;
}

void load_target(const std::string& path, std::vector<Eigen::VectorXd>& points,
                 std::vector<double>& values) {
    const auto rows = load_numeric(path);
    points.clear();
    values.clear();
    for (const auto& r : rows) {
        if (r.size() < 2)
            throw std::runtime_error(path + ": target CSV needs >= 2 columns (points, value)");
        Eigen::VectorXd p(static_cast<Eigen::Index>(r.size() - 1));
        for (std::size_t i = 0; i + 1 < r.size(); ++i) p[static_cast<Eigen::Index>(i)] = r[i];
        points.push_back(std::move(p));
        values.push_back(r.back());
    }
}

std::string format_double(double x) {
    // Shortest representation that parses back exactly.
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string escape_field(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

std::string make_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += escape_field(fields[i]);
    }
    out += '\n';
    return out;
}

}  // namespace rvfl::csv
