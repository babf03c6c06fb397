#include "stabex/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stabex {

namespace {
std::atomic<int> g_threads{0};
}

void set_default_threads(int n) { g_threads = std::max(0, n); }

int default_threads()
{
    int n = g_threads.load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads)
{
    if (n == 0) return;
    int nt = threads > 0 ? threads : default_threads();
    nt = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(nt), n));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex err_mu;
    std::size_t err_index = n;
    std::exception_ptr err;

    auto worker = [&] {
        for (;;) {
            if (stop.load(std::memory_order_relaxed)) return;
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
                stop = true;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt - 1));
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace stabex
