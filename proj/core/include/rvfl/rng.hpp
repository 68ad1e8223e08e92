#pragma once

#include <cstdint>

namespace rvfl {

// Deterministic generator (xoshiro256** seeded through splitmix64) with
// counter-derived substreams, so Monte Carlo chunks can be assigned fixed
// streams regardless of how many threads execute them. All outputs are
// platform-independent: uniforms come from the top 53 bits, normals from
// an explicit Box-Muller transform (no libstdc++ distribution objects).
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    // Independent generator for (seed, stream); stream 0 differs from Rng(seed).
    static Rng substream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    double uniform01();                    // in (0, 1)
    double uniform(double a, double b);    // in (a, b)
    double normal();                       // standard normal

  private:
    void seed_state(std::uint64_t key);

    std::uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// splitmix64 finalizer; also used for config hashing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace rvfl
