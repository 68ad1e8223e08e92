#include "rvfl/parallel.hpp"

namespace rvfl {
namespace {

std::atomic<int> g_thread_limit{0};  // 0 = use hardware concurrency

}  // namespace

void set_thread_limit(int n) { g_thread_limit.store(n > 0 ? n : 0); }

int thread_limit() {
    const int n = g_thread_limit.load();
    if (n > 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace rvfl
