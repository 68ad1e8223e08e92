#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace rvfl::csv {

// Numeric table reader: comma-separated, '.' decimal, one optional header
// row (skipped when its first field is not parseable as a number). Ragged
// rows or non-numeric cells raise std::runtime_error with the line number.
std::vector<std::vector<double>> load_numeric(const std::string& path);

// One point per row, m columns.
std::vector<Eigen::VectorXd> load_points(const std::string& path);

// One sample per row, m coordinate columns followed by a value column.
void load_target(const std::string& path, std::vector<Eigen::VectorXd>& points,
                 std::vector<double>& values);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

// RFC-4180 quoting: fields containing comma, quote, or newline are quoted,
// embedded quotes doubled.
std::string escape_field(const std::string& field);

std::string make_row(const std::vector<std::string>& fields);

}  // namespace rvfl::csv
