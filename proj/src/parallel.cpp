#include "curveml/parallel.hpp"

#include "curveml/error.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace curveml {

unsigned resolve_workers(std::optional<unsigned> requested) {
    if (requested) {
        if (*requested == 0) throw InputError("worker count must be positive");
        return *requested;
    }
    const char* env = std::getenv("CURVEML_WORKERS");
    if (env == nullptr || *env == '\0') return 1;
    const std::string_view v(env);
    unsigned w = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), w);
    if (ec != std::errc{} || ptr != v.data() + v.size() || w == 0)
        throw InputError("CURVEML_WORKERS must be a positive integer, got '" + std::string(v) + "'");
    return w;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t threads = std::min<std::size_t>(workers == 0 ? 1 : workers, n);
    std::vector<std::exception_ptr> errors(n);
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n || failed.load(std::memory_order_relaxed)) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                    failed.store(true, std::memory_order_relaxed);
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(threads - 1);
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
        work();
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace curveml
