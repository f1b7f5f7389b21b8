#include "coalab/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace coalab {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
}

double RandomStream::uniform() {
    constexpr double scale = 0x1.0p-53;
    for (;;) {
        const double u = static_cast<double>(engine_() >> 11) * scale;
        if (u > 0.0) {
            return u;
        }
    }
}

double RandomStream::exponential() { return -std::log(uniform()); }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

EstimateWithError summarize(const std::vector<double>& observations) {
    EstimateWithError est;
    est.reps = observations.size();
    if (observations.empty()) {
        return est;
    }
    double mean = 0.0;
    double m2 = 0.0;
    unsigned long k = 0;
    for (double x : observations) {
        ++k;
        const double delta = x - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (x - mean);
    }
    est.value = mean;
    if (k > 1) {
        est.std_error = std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k));
    }
    return est;
}

void parallel_for(unsigned long count, unsigned threads, const std::function<void(unsigned long)>& body) {
    threads = std::max(1U, threads);
    if (threads == 1 || count < 2) {
        for (unsigned long i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<unsigned long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const unsigned long i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(count);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const auto n_workers = static_cast<unsigned>(std::min<unsigned long>(threads, count));
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace coalab
