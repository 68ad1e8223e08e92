#include "rvfl/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace rvfl {

namespace {

using nlohmann::json;

json hex_array(const double* data, Eigen::Index count) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < count; ++i) arr.push_back(double_to_hex(data[i]));
    return arr;
}

void parse_hex_array(const json& arr, double* out, Eigen::Index count, const char* what) {
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != count)
        throw std::invalid_argument(std::string("network json: bad array size for ") + what);
    for (Eigen::Index i = 0; i < count; ++i)
        out[i] = hex_to_double(arr[static_cast<std::size_t>(i)].get<std::string>());
}

}  // namespace

std::string double_to_hex(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double hex_to_double(const std::string& s) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw std::invalid_argument("not a hex-float literal: " + s);
    return v;
}

std::string network_to_json(const RvflNetwork& net) {
    json doc;
    doc["m"] = net.m;
    doc["n"] = net.n;
    doc["sigma"] = double_to_hex(net.sigma);
    doc["R"] = double_to_hex(net.R);
    doc["seed"] = net.seed;
    doc["zeta"] = double_to_hex(net.zeta);
    doc["provenance"] = net.provenance;
    // Row-major so networks diff cleanly row by row.
    std::vector<double> w_flat(static_cast<std::size_t>(net.n) * net.m);
    for (int j = 0; j < net.n; ++j)
        for (int d = 0; d < net.m; ++d)
            w_flat[static_cast<std::size_t>(j) * net.m + d] = net.w(j, d);
    doc["w"] = hex_array(w_flat.data(), static_cast<Eigen::Index>(w_flat.size()));
    doc["b"] = hex_array(net.b.data(), net.b.size());
    doc["a"] = hex_array(net.a.data(), net.a.size());
    return doc.dump(2);
}

RvflNetwork network_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("network json: ") + e.what());
    }
    RvflNetwork net;
    net.m = doc.at("m").get<int>();
    net.n = doc.at("n").get<int>();
    if (net.m < 1 || net.n < 1)
        throw std::invalid_argument("network json: m and n must be positive");
    net.sigma = hex_to_double(doc.at("sigma").get<std::string>());
    net.R = hex_to_double(doc.at("R").get<std::string>());
    net.seed = doc.at("seed").get<std::uint64_t>();
    net.zeta = hex_to_double(doc.at("zeta").get<std::string>());
    net.provenance = doc.at("provenance").get<std::string>();
    if (net.provenance != "constructive" && net.provenance != "least-squares")
        throw std::invalid_argument("network json: unknown provenance " + net.provenance);
    std::vector<double> w_flat(static_cast<std::size_t>(net.n) * net.m);
    parse_hex_array(doc.at("w"), w_flat.data(), static_cast<Eigen::Index>(w_flat.size()), "w");
    net.w.resize(net.n, net.m);
    for (int j = 0; j < net.n; ++j)
        for (int d = 0; d < net.m; ++d)
            net.w(j, d) = w_flat[static_cast<std::size_t>(j) * net.m + d];
    net.b.resize(net.n);
    parse_hex_array(doc.at("b"), net.b.data(), net.n, "b");
    net.a.resize(net.n);
    parse_hex_array(doc.at("a"), net.a.data(), net.n, "a");
    return net;
}

void save_network(const RvflNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << network_to_json(net) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

RvflNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return network_from_json(buf.str());
}

}  // namespace rvfl
