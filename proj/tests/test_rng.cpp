#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "rvfl/parallel.hpp"
#include "rvfl/rng.hpp"
#include "test_support.hpp"

using namespace rvfl;

TEST_CASE("identical seeds give identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(42), d(43);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += c.next_u64() == d.next_u64();
    CHECK(same == 0);
}

TEST_CASE("substreams differ from each other and from the root stream") {
    Rng root(9001);
    Rng s0 = Rng::substream(9001, 0);
    Rng s1 = Rng::substream(9001, 1);
    std::vector<std::uint64_t> r, v0, v1;
    for (int i = 0; i < 16; ++i) {
        r.push_back(root.next_u64());
        v0.push_back(s0.next_u64());
        v1.push_back(s1.next_u64());
    }
    CHECK(r != v0);
    CHECK(v0 != v1);
    Rng again = Rng::substream(9001, 1);
    for (int i = 0; i < 16; ++i) CHECK(again.next_u64() == v1[i]);
}

TEST_CASE("uniform01 stays inside the open interval and uses 53 bits") {
    Rng rng(5);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.uniform01();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        // every draw is (k + 1/2) * 2^-53, k integer: half-integer lattice
        const double scaled = u * 9007199254740992.0 - 0.5;  // 2^53
        CHECK(scaled == std::floor(scaled));
    }
    CHECK(lo < 0.001);
    CHECK(hi > 0.999);
}

TEST_CASE("uniform(a, b) maps into the requested interval") {
    Rng rng(17);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform(-3.0, 5.0);
        CHECK(u > -3.0);
        CHECK(u < 5.0);
        sum += u;
    }
    // mean 1, sd 8/sqrt(12); stderr ~ 0.0073
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("normal moments match the standard normal") {
    Rng rng(23);
    const int n = 400000;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s1 += x;
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
    }
    CHECK(std::abs(s1 / n) < 0.01);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(s3 / n) < 0.05);
    CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("mix64 is a bijective-style finalizer with no trivial fixed points") {
    CHECK(mix64(0) != 0);
    CHECK(mix64(1) != mix64(2));
    // avalanche: flipping one input bit flips a lot of output bits
    const std::uint64_t base = mix64(0x123456789ULL);
    int total = 0;
    for (int bit = 0; bit < 64; ++bit)
        total += __builtin_popcountll(base ^ mix64(0x123456789ULL ^ (1ULL << bit)));
    CHECK(total > 64 * 20);
    CHECK(total < 64 * 44);
}

TEST_CASE("chunked_map reduces independently of the thread limit") {
    const auto run = [](int threads) {
        set_thread_limit(threads);
        auto parts = chunked_map<double>(1000, 64, [](std::uint64_t c, std::uint64_t lo,
                                                      std::uint64_t hi) {
            Rng rng = Rng::substream(777, c);
            double s = 0.0;
            for (std::uint64_t i = lo; i < hi; ++i) s += rng.uniform01();
            return s;
        });
        double total = 0.0;
        for (double p : parts) total += p;
        return total;
    };
    const double t1 = run(1);
    const double t4 = run(4);
    const double t3 = run(3);
    set_thread_limit(0);
    CHECK(t1 == t4);
    CHECK(t1 == t3);
}

TEST_CASE("chunked_map propagates worker exceptions") {
    CHECK_THROWS_AS(chunked_map<int>(100, 10,
                                     [](std::uint64_t c, std::uint64_t, std::uint64_t) -> int {
                                         if (c == 3) throw std::runtime_error("boom");
                                         return 0;
                                     }),
                    std::runtime_error);
}

TEST_CASE("mc_mean is deterministic and thread-count invariant") {
    auto estimate = [](int threads) {
        set_thread_limit(threads);
        return mc_mean(200000, 31337, [](Rng& rng) {
            const double x = rng.normal();
            return x * x;
        });
    };
    const MonteCarloResult a = estimate(1);
    const MonteCarloResult b = estimate(4);
    set_thread_limit(0);
    CHECK(a.mean == b.mean);          // bit-identical
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.samples == 200000);
    CHECK(a.mean == doctest::Approx(1.0).epsilon(0.02));
    // chi-square(1) has variance 2: stderr ~ sqrt(2/200000)
    CHECK(a.stderr_ == doctest::Approx(std::sqrt(2.0 / 200000.0)).epsilon(0.1));
}

TEST_CASE("mc_mean covers the edge cases") {
    const auto zero = mc_mean(0, 1, [](Rng&) { return 1.0; });
    CHECK(zero.samples == 0);
    CHECK(zero.mean == 0.0);
    const auto one = mc_mean(1, 1, [](Rng&) { return 2.5; });
    CHECK(one.mean == 2.5);
    CHECK(one.stderr_ == 0.0);
    const auto constant = mc_mean(5000, 9, [](Rng&) { return 4.0; });
    CHECK(constant.mean == 4.0);
    CHECK(constant.stderr_ == 0.0);
}
