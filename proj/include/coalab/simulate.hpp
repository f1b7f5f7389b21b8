#pragma once

// Exact (Gillespie) simulation of the block counting process N and the
// fixation line L, Monte Carlo estimators built on them, and
// Kolmogorov-Smirnov distances for the scaled-marginal checks.

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "coalab/combinatorics.hpp"
#include "coalab/random.hpp"

namespace coalab {

enum class ProcessKind { block, fixation };

std::string_view to_string(ProcessKind kind);
/// Accepts "block" and "fixation".
ProcessKind parse_process_kind(std::string_view name);

struct PathSample {
    ProcessKind process = ProcessKind::block;
    std::uint64_t n = 1;
    std::vector<double> jump_times;      // increasing
    std::vector<std::uint64_t> states;   // states[0] = n, one more than jump_times
    bool exceeded_cap = false;           // fixation only: stopped above the state cap
};

struct SimConfig {
    std::uint64_t seed = 1;
    unsigned long reps = 1;
    unsigned threads = 1;
};

/// Exact law of the block decrement from state i >= 2:
/// P(d = m) = i / ((i - 1) m (m + 1)), m = 1..i-1.
ExactRational block_decrement_pmf(unsigned i, unsigned m);

/// Draws the block decrement as floor(1/V), V uniform on (1/i, 1).
std::uint64_t sample_block_decrement(std::uint64_t i, RandomStream& rng);
/// Draws the fixation increment floor(1/U), P(eta = m) = 1/(m(m+1)).
std::uint64_t sample_fixation_increment(RandomStream& rng);

/// Path of N started at n, recorded up to the horizon or absorption in 1.
PathSample simulate_block(std::uint64_t n, double horizon, RandomStream& rng);
/// N_t started at n without storing the path.
std::uint64_t block_state_at(std::uint64_t n, double t, RandomStream& rng);

/// Path of L started at n up to the horizon. Stops early, with
/// exceeded_cap set, as soon as the state exceeds state_cap.
PathSample simulate_fixation(std::uint64_t n, double horizon, std::uint64_t state_cap, RandomStream& rng);

/// Fraction of jump-chain walks started at i that visit j. Replicate r uses
/// stream (seed, r).
EstimateWithError estimate_hitting(std::uint64_t i, std::uint64_t j, const SimConfig& config);

/// Fraction of block paths from n with N_t <= i, i.e. an estimate of
/// P(tau_{n,i} <= t).
EstimateWithError estimate_absorption(std::uint64_t n, std::uint64_t i, double t, const SimConfig& config);

/// One draw of L_t started at 1: P(L_t >= j) = prod_{k<j} (1 - alpha/k).
double sample_fixation_marginal(double alpha, RandomStream& rng);

/// How fixation draws for L_t^{(n)} are produced.
///   path: Gillespie simulation with the state cap doubled and the replicate
///         rerun from scratch on every overflow.
///   branching: sum of n independent copies of L_t started at 1 (the fixation
///         line is a branching process).
enum class FixationRoute { path, branching };

std::string_view to_string(FixationRoute route);
FixationRoute parse_fixation_route(std::string_view name);

struct SampleDiagnostics {
    unsigned long cap_doublings = 0;
    unsigned long rejected_draws = 0;
};

struct ScaledSample {
    std::vector<double> values;
    SampleDiagnostics diagnostics;
};

/// reps draws of N_t^{(n)} / n^{exp(-t)} (block) or L_t^{(n)} / n^{exp(t)}
/// (fixation). Replicate r uses stream (seed, r). For the path route the
/// initial cap is n^{exp(t)} * 1000.
ScaledSample scaled_marginal_sample(ProcessKind process, std::uint64_t n, double t, const SimConfig& config,
                                    FixationRoute route = FixationRoute::branching);

/// Draws from the limit law (Mittag-Leffler for block, positive stable for
/// fixation) in substreams of 4096 draws.
std::vector<double> limit_reference_sample(ProcessKind process, double t, const SimConfig& config);

/// sup_x |F_n(x) - cdf(x)| for the empirical distribution of the samples.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Two-sample Kolmogorov-Smirnov statistic.
double ks_distance(std::vector<double> a, std::vector<double> b);

struct ConvergenceRow {
    std::uint64_t n = 0;
    double t = 0.0;
    double ks = 0.0;
    unsigned long reps = 0;
    std::uint64_t seed = 0;
    SampleDiagnostics diagnostics;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    unsigned long reference_reps = 0;
};

/// KS distance between reps scaled draws and a reference sample of the limit
/// law, for every n in ns. The reference and each n use seeds derived from
/// config.seed with mix_seed.
ConvergenceStudy convergence_study(ProcessKind process, const std::vector<std::uint64_t>& ns, double t,
                                   const SimConfig& config, unsigned long reference_reps,
                                   FixationRoute route = FixationRoute::branching);

} // namespace coalab
