#pragma once

// Seeded random streams and Monte Carlo summaries.
//
// Every stream is a std::mt19937_64 whose state is initialised from
// std::seed_seq{seed_lo, seed_hi, id_lo, id_hi}; a (seed, id) pair always
// yields the same sequence, and distinct ids give unrelated streams.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace coalab {

class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t bits() { return engine_(); }
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    /// Standard exponential, -log(uniform()).
    double exponential();

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finaliser; used to derive independent seeds for sub-studies.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(reps)
    unsigned long reps = 0;
};

/// Mean and standard error of the given observations (std_error 0 for a
/// single observation).
EstimateWithError summarize(const std::vector<double>& observations);

/// Runs body(index) for index in [0, count) on `threads` worker threads.
/// Each index must write only its own output slot, which keeps the result
/// independent of scheduling.
void parallel_for(unsigned long count, unsigned threads, const std::function<void(unsigned long)>& body);

} // namespace coalab
