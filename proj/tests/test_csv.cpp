#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "doctest.h"
#include "rvfl/csv.hpp"
#include "test_support.hpp"

using namespace rvfl;
using testsup::TempDir;

TEST_CASE("format_double round-trips and picks the short form") {
    for (double x : {0.1, 1.0, -2.5, 3.14159265358979, 1e-300, -7.25e17, 0.0}) {
        const std::string s = csv::format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(csv::format_double(0.1) == "0.1");
    CHECK(csv::format_double(1.0) == "1");
    CHECK(csv::format_double(-2.5) == "-2.5");
    // denormal and huge magnitudes still round-trip
    for (double x : {5e-324, std::numeric_limits<double>::max()}) {
        const std::string s = csv::format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("escape_field applies RFC-4180 quoting only when needed") {
    CHECK(csv::escape_field("plain") == "plain");
    CHECK(csv::escape_field("with,comma") == "\"with,comma\"");
    CHECK(csv::escape_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::escape_field("two\nlines") == "\"two\nlines\"");
    CHECK(csv::escape_field("") == "");
}

TEST_CASE("make_row joins fields and terminates the line") {
    CHECK(csv::make_row({"a", "b", "c"}) == "a,b,c\n");
    CHECK(csv::make_row({"1"}) == "1\n");
    CHECK(csv::make_row({"x,y", "z"}) == "\"x,y\",z\n");
}

TEST_CASE("load_numeric reads plain tables and skips one header row") {
    TempDir dir;
    const std::string path = dir.file("t.csv");
    testsup::write_file(path, "x,value\n0.5,1\n-1,2.25\n3,4\n");
    const auto rows = csv::load_numeric(path);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][0] == 0.5);
    CHECK(rows[1][1] == 2.25);
    CHECK(rows[2][0] == 3.0);

    testsup::write_file(path, "1,2\n3,4\n");
    CHECK(csv::load_numeric(path).size() == 2);
}

TEST_CASE("load_numeric rejects ragged rows and garbage cells") {
    TempDir dir;
    const std::string path = dir.file("bad.csv");
    testsup::write_file(path, "1,2\n3\n");
    CHECK_THROWS_AS(csv::load_numeric(path), std::runtime_error);
    testsup::write_file(path, "1,2\n3,zebra\n");
    CHECK_THROWS_WITH_AS(csv::load_numeric(path),
                         doctest::Contains(":2:"), std::runtime_error);
    CHECK_THROWS_AS(csv::load_numeric(dir.file("missing.csv")), std::runtime_error);
}

TEST_CASE("load_points and load_target split coordinates from values") {
    TempDir dir;
    const std::string path = dir.file("pts.csv");
    testsup::write_file(path, "x1,x2\n0,0\n1,2\n-0.5,0.25\n");
    const auto pts = csv::load_points(path);
    REQUIRE(pts.size() == 3);
    CHECK(pts[1].size() == 2);
    CHECK(pts[1][0] == 1.0);
    CHECK(pts[2][1] == 0.25);

    testsup::write_file(path, "x,f\n0,1\n0.5,0.5\n1,0\n");
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> ys;
    csv::load_target(path, xs, ys);
    REQUIRE(xs.size() == 3);
    CHECK(xs[1].size() == 1);
    CHECK(xs[1][0] == 0.5);
    CHECK(ys == std::vector<double>{1.0, 0.5, 0.0});
}
