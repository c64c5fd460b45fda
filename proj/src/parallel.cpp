#include "nilcorr/parallel.hpp"

#include <atomic>
#include <cstdlib>

namespace nilcorr {

namespace {

int initial_thread_count() {
    if (const char* env = std::getenv("NILCORR_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int>& thread_count_storage() {
    static std::atomic<int> count{initial_thread_count()};
    return count;
}

}  // namespace

int thread_count() { return thread_count_storage().load(); }

void set_thread_count(int n) {
    if (n >= 1) thread_count_storage().store(n);
}

namespace detail {

void run_blocks(i64 nblocks, const std::function<void(i64)>& fn) {
    int workers = std::min<i64>(thread_count(), nblocks);
    if (workers <= 1) {
        for (i64 b = 0; b < nblocks; ++b) fn(b);
        return;
    }
    std::atomic<i64> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                i64 b = next.fetch_add(1);
                if (b >= nblocks || failed.load()) return;
                try {
                    fn(b);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace detail

}  // namespace nilcorr
