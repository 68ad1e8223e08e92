#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace rvfl {

// Process-wide cap on worker threads (defaults to hardware concurrency).
// The chunked helpers below produce results independent of this value.
void set_thread_limit(int n);
int thread_limit();

// Splits [0, total) into fixed-size chunks and evaluates
// fn(chunk_index, begin, end) for each, possibly concurrently. Results come
// back indexed by chunk, so reductions done in index order are identical
// for every thread count. Exceptions from workers are rethrown.
template <typename R, typename Fn>
std::vector<R> chunked_map(std::uint64_t total, std::uint64_t chunk_size, Fn&& fn) {
    const std::uint64_t nchunks = total == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
    std::vector<R> results(nchunks);
    if (nchunks == 0) return results;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(thread_limit(), nchunks));
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    auto run = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= nchunks || failed.load()) return;
            const std::uint64_t lo = c * chunk_size;
            const std::uint64_t hi = std::min(total, lo + chunk_size);
            try {
                results[c] = fn(c, lo, hi);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) std::rethrow_exception(error);
    return results;
}

struct MonteCarloResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
};

class Rng;

// Chunked Monte Carlo mean with per-chunk substreams: draw(rng) is invoked
// exactly `samples` times, chunk c drawing from Rng::substream(seed, c).
// Reproducible bit-for-bit for fixed (seed, samples, chunk_size).
template <typename Draw>
MonteCarloResult mc_mean(std::uint64_t samples, std::uint64_t seed, Draw&& draw,
                         std::uint64_t chunk_size = std::uint64_t{1} << 14);

}  // namespace rvfl

#include "rvfl/rng.hpp"

namespace rvfl {

template <typename Draw>
MonteCarloResult mc_mean(std::uint64_t samples, std::uint64_t seed, Draw&& draw,
                         std::uint64_t chunk_size) {
    struct Moments {
        double sum = 0.0, sum_sq = 0.0;
    };
    auto partials = chunked_map<Moments>(
        samples, chunk_size, [&](std::uint64_t chunk, std::uint64_t lo, std::uint64_t hi) {
            Rng rng = Rng::substream(seed, chunk);
            Moments m;
            for (std::uint64_t i = lo; i < hi; ++i) {
                const double x = draw(rng);
                m.sum += x;
                m.sum_sq += x * x;
            }
            return m;
        });
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& m : partials) {
        sum += m.sum;
        sum_sq += m.sum_sq;
    }
    MonteCarloResult out;
    out.samples = samples;
    if (samples == 0) return out;
    out.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
        const double n = static_cast<double>(samples);
        double var = (sum_sq - n * out.mean * out.mean) / (n - 1.0);
        if (var < 0.0) var = 0.0;
        out.stderr_ = std::sqrt(var / n);
    }
    return out;
}

}  // namespace rvfl
