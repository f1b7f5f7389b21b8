#include "coalab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "coalab/limits.hpp"
#include "coalab/special_functions.hpp"

namespace coalab {

std::string_view to_string(ProcessKind kind) { return kind == ProcessKind::block ? "block" : "fixation"; }

ProcessKind parse_process_kind(std::string_view name) {
    if (name == "block") {
        return ProcessKind::block;
    }
    if (name == "fixation") {
        return ProcessKind::fixation;
    }
    throw std::invalid_argument("unknown process '" + std::string(name) + "'");
}

std::string_view to_string(FixationRoute route) { return route == FixationRoute::path ? "path" : "branching"; }

FixationRoute parse_fixation_route(std::string_view name) {
    if (name == "path") {
        return FixationRoute::path;
    }
    if (name == "branching") {
        return FixationRoute::branching;
    }
    throw std::invalid_argument("unknown fixation route '" + std::string(name) + "'");
}

ExactRational block_decrement_pmf(unsigned i, unsigned m) {
    if (i < 2) {
        throw std::domain_error("state 1 is absorbing");
    }
    if (m < 1 || m >= i) {
        return 0;
    }
    return make_rational(static_cast<long>(i), static_cast<long>(i - 1) * m * (m + 1));
}

std::uint64_t sample_block_decrement(std::uint64_t i, RandomStream& rng) {
    if (i < 2) {
        throw std::domain_error("state 1 is absorbing");
    }
    // floor(1/U) conditioned on U > 1/i.
    const double v = 1.0 - rng.uniform() * (1.0 - 1.0 / static_cast<double>(i));
    const double d = std::floor(1.0 / v);
    return std::clamp<std::uint64_t>(static_cast<std::uint64_t>(d), 1, i - 1);
}

std::uint64_t sample_fixation_increment(RandomStream& rng) {
    return static_cast<std::uint64_t>(std::floor(1.0 / rng.uniform()));
}

PathSample simulate_block(std::uint64_t n, double horizon, RandomStream& rng) {
    if (n < 1) {
        throw std::domain_error("initial state must be positive");
    }
    PathSample path;
    path.process = ProcessKind::block;
    path.n = n;
    path.states.push_back(n);
    double time = 0.0;
    std::uint64_t state = n;
    while (state > 1) {
        time += rng.exponential() / static_cast<double>(state - 1);
        if (time > horizon) {
            break;
        }
        state -= sample_block_decrement(state, rng);
        path.jump_times.push_back(time);
        path.states.push_back(state);
    }
    return path;
}

std::uint64_t block_state_at(std::uint64_t n, double t, RandomStream& rng) {
    if (n < 1) {
        throw std::domain_error("initial state must be positive");
    }
    double time = 0.0;
    std::uint64_t state = n;
    while (state > 1) {
        time += rng.exponential() / static_cast<double>(state - 1);
        if (time > t) {
            break;
        }
        state -= sample_block_decrement(state, rng);
    }
    return state;
}

PathSample simulate_fixation(std::uint64_t n, double horizon, std::uint64_t state_cap, RandomStream& rng) {
    if (n < 1) {
        throw std::domain_error("initial state must be positive");
    }
    if (state_cap <= n) {
        throw std::domain_error("state cap must exceed the initial state");
    }
    PathSample path;
    path.process = ProcessKind::fixation;
    path.n = n;
    path.states.push_back(n);
    double time = 0.0;
    std::uint64_t state = n;
    for (;;) {
        time += rng.exponential() / static_cast<double>(state);
        if (time > horizon) {
            break;
        }
        const std::uint64_t step = sample_fixation_increment(rng);
        state = step > state_cap - state ? state_cap + 1 : state + step;
        path.jump_times.push_back(time);
        path.states.push_back(state);
        if (state > state_cap) {
            path.exceeded_cap = true;
            break;
        }
    }
    return path;
}

namespace {

struct FixationEnd {
    std::uint64_t state;
    bool exceeded;
};

FixationEnd fixation_state_at(std::uint64_t n, double t, std::uint64_t cap, RandomStream& rng) {
    double time = 0.0;
    std::uint64_t state = n;
    for (;;) {
        time += rng.exponential() / static_cast<double>(state);
        if (time > t) {
            return {state, false};
        }
        const std::uint64_t step = sample_fixation_increment(rng);
        if (step > cap - state) {
            return {state, true};
        }
        state += step;
    }
}

} // namespace

EstimateWithError estimate_hitting(std::uint64_t i, std::uint64_t j, const SimConfig& config) {
    if (i < 1 || j < i) {
        throw std::domain_error("estimate_hitting requires 1 <= i <= j");
    }
    if (config.reps < 1) {
        throw std::domain_error("need at least one replicate");
    }
    const std::uint64_t target = j - i;
    std::vector<double> hits(config.reps);
    parallel_for(config.reps, config.threads, [&](unsigned long r) {
        RandomStream rng(config.seed, r);
        std::uint64_t pos = 0;
        while (pos < target) {
            pos += sample_fixation_increment(rng);
        }
        hits[r] = pos == target ? 1.0 : 0.0;
    });
    return summarize(hits);
}

EstimateWithError estimate_absorption(std::uint64_t n, std::uint64_t i, double t, const SimConfig& config) {
    if (i < 1 || i > n) {
        throw std::domain_error("estimate_absorption requires 1 <= i <= n");
    }
    if (config.reps < 1) {
        throw std::domain_error("need at least one replicate");
    }
    std::vector<double> hits(config.reps);
    parallel_for(config.reps, config.threads, [&](unsigned long r) {
        RandomStream rng(config.seed, r);
        hits[r] = block_state_at(n, t, rng) <= i ? 1.0 : 0.0;
    });
    return summarize(hits);
}

double sample_fixation_marginal(double alpha, RandomStream& rng) {
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw std::domain_error("alpha must lie in (0, 1]");
    }
    if (alpha == 1.0) {
        return 1.0;
    }
    // Inverse transform: smallest m with P(L > m) <= U.
    const double u = rng.uniform();
    double tail = 1.0 - alpha;  // P(L > 1)
    double m = 1.0;
    constexpr double linear_limit = 32.0;
    while (tail > u) {
        if (m >= linear_limit) {
            break;
        }
        m += 1.0;
        tail *= 1.0 - alpha / m;
    }
    if (tail <= u) {
        return m;
    }
    // log P(L > m) = log Gamma(m + 1 - alpha) - log Gamma(m + 1) - log Gamma(1 - alpha).
    const double log_u = std::log(u);
    const double log_norm = boost::math::lgamma(1.0 - alpha);
    auto log_tail = [&](double k) { return log_gamma_diff(k + 1.0 - alpha, k + 1.0) - log_norm; };
    double lo = m;  // log_tail(lo) > log_u
    // P(L > k) ~ k^{-alpha} / Gamma(1 - alpha); beyond 2^50 the relative error
    // of this inverse is below the spacing of the integers as doubles.
    const double guess = std::exp(-(log_u + log_norm) / alpha);
    constexpr double asymptotic_limit = 0x1p50;
    if (guess >= asymptotic_limit) {
        return std::floor(std::min(guess, std::numeric_limits<double>::max()));
    }
    double hi = std::max(2.0 * lo, 2.0 * guess);
    while (log_tail(hi) > log_u && hi < 4.0 * asymptotic_limit) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1.0 && hi > lo * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
        const double mid = std::floor(lo + (hi - lo) / 2.0);
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (log_tail(mid) > log_u) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

namespace {

double scaled_block(std::uint64_t n, double t, RandomStream& rng) {
    const double scale = std::pow(static_cast<double>(n), std::exp(-t));
    return static_cast<double>(block_state_at(n, t, rng)) / scale;
}

double scaled_fixation_branching(std::uint64_t n, double t, RandomStream& rng) {
    const double alpha = std::exp(-t);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        sum += sample_fixation_marginal(alpha, rng);
    }
    return sum / std::pow(static_cast<double>(n), std::exp(t));
}

} // namespace

ScaledSample scaled_marginal_sample(ProcessKind process, std::uint64_t n, double t, const SimConfig& config,
                                    FixationRoute route) {
    if (n < 2) {
        throw std::domain_error("scaled samples need n >= 2");
    }
    if (!(t >= 0.0)) {
        throw std::domain_error("time must be nonnegative");
    }
    ScaledSample out;
    out.values.assign(config.reps, 0.0);
    if (process == ProcessKind::block) {
        parallel_for(config.reps, config.threads, [&](unsigned long r) {
            RandomStream rng(config.seed, r);
            out.values[r] = scaled_block(n, t, rng);
        });
        return out;
    }
    if (route == FixationRoute::branching) {
        parallel_for(config.reps, config.threads, [&](unsigned long r) {
            RandomStream rng(config.seed, r);
            out.values[r] = scaled_fixation_branching(n, t, rng);
        });
        return out;
    }
    const double scale = std::pow(static_cast<double>(n), std::exp(t));
    const double initial_cap = std::max(scale * 1000.0, 2.0 * static_cast<double>(n));
    constexpr double max_cap = 0x1.0p62;
    std::vector<SampleDiagnostics> per_rep(config.reps);
    parallel_for(config.reps, config.threads, [&](unsigned long r) {
        double cap = std::min(initial_cap, max_cap);
        for (;;) {
            RandomStream rng(config.seed, r);
            const auto end = fixation_state_at(n, t, static_cast<std::uint64_t>(cap), rng);
            if (!end.exceeded) {
                out.values[r] = static_cast<double>(end.state) / scale;
                return;
            }
            ++per_rep[r].rejected_draws;
            if (cap >= max_cap) {
                throw std::runtime_error("fixation path exceeded the largest supported state cap");
            }
            cap = std::min(cap * 2.0, max_cap);
            ++per_rep[r].cap_doublings;
        }
    });
    for (const auto& d : per_rep) {
        out.diagnostics.cap_doublings += d.cap_doublings;
        out.diagnostics.rejected_draws += d.rejected_draws;
    }
    return out;
}

std::vector<double> limit_reference_sample(ProcessKind process, double t, const SimConfig& config) {
    constexpr unsigned long chunk = 4096;
    const TimePoint tp = TimePoint::from_time(t);
    std::vector<double> out(config.reps);
    const unsigned long chunks = (config.reps + chunk - 1) / chunk;
    parallel_for(chunks, config.threads, [&](unsigned long c) {
        RandomStream rng(config.seed, c);
        const unsigned long end = std::min(config.reps, (c + 1) * chunk);
        for (unsigned long r = c * chunk; r < end; ++r) {
            out[r] = process == ProcessKind::block ? sample_mittag_leffler(tp, rng) : sample_neveu(tp, rng);
        }
    });
    return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) {
        throw std::domain_error("ks_distance needs at least one sample");
    }
    std::sort(samples.begin(), samples.end());
    const double total = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t k = 0;
    while (k < samples.size()) {
        const double v = samples[k];
        const double below = static_cast<double>(k) / total;
        while (k < samples.size() && samples[k] == v) {
            ++k;
        }
        const double at = static_cast<double>(k) / total;
        const double left = cdf(std::nextafter(v, -std::numeric_limits<double>::infinity()));
        d = std::max({d, std::abs(at - cdf(v)), std::abs(below - left)});
    }
    return d;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw std::domain_error("ks_distance needs two nonempty samples");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
            v = a[i];
        } else {
            v = b[j];
        }
        while (i < a.size() && a[i] == v) {
            ++i;
        }
        while (j < b.size() && b[j] == v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

ConvergenceStudy convergence_study(ProcessKind process, const std::vector<std::uint64_t>& ns, double t,
                                   const SimConfig& config, unsigned long reference_reps, FixationRoute route) {
    constexpr std::uint64_t reference_tag = 0x5eedULL;
    ConvergenceStudy study;
    study.reference_reps = reference_reps;
    const SimConfig ref_config{mix_seed(config.seed, reference_tag), reference_reps, config.threads};
    const auto reference = limit_reference_sample(process, t, ref_config);
    for (const auto n : ns) {
        const SimConfig run{mix_seed(config.seed, n), config.reps, config.threads};
        auto sample = scaled_marginal_sample(process, n, t, run, route);
        ConvergenceRow row;
        row.n = n;
        row.t = t;
        row.reps = config.reps;
        row.seed = config.seed;
        row.diagnostics = sample.diagnostics;
        row.ks = ks_distance(std::move(sample.values), reference);
        study.rows.push_back(row);
    }
    return study;
}

} // namespace coalab
