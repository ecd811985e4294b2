#include "gradctl/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gradctl {

int worker_count() {
    if (const char* env = std::getenv("GRADCTL_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(long n, const std::function<void(long)>& fn) {
    if (n <= 0)
        return;
    const int workers = static_cast<int>(std::min<long>(worker_count(), n));
    if (workers <= 1) {
        for (long i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto body = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back(body);
    for (auto& t : pool)
        t.join();

    if (error)
        std::rethrow_exception(error);
}

} // namespace gradctl
