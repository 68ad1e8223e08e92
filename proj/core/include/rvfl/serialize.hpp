#pragma once

#include <string>

#include "rvfl/network.hpp"

namespace rvfl {

// C99 hex-float text for a double; parses back bit-exactly (including
// negative zero, infinities and NaN payload-free forms).
std::string double_to_hex(double x);
double hex_to_double(const std::string& s);

// JSON document {m, n, sigma, R, seed, zeta, provenance, w, b, a} with all
// floating-point payloads as hex-float strings; w is row-major. Round-trips
// are bit-exact.
std::string network_to_json(const RvflNetwork& net);
RvflNetwork network_from_json(const std::string& text);

void save_network(const RvflNetwork& net, const std::string& path);
RvflNetwork load_network(const std::string& path);

}  // namespace rvfl
