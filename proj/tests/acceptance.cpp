// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "coalab/analytics.hpp"
#include "coalab/limits.hpp"
#include "coalab/simulate.hpp"
#include "coalab/special_functions.hpp"
#include "coalab/spectral.hpp"

using namespace coalab;

namespace {

constexpr std::uint64_t seed = 1;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

unsigned worker_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

constexpr GeneratorKind kinds[] = {GeneratorKind::bs_fixation, GeneratorKind::bs_block,
                                   GeneratorKind::kingman_fixation};

Outcome spectral_exactness() {
    Outcome o;
    for (auto kind : kinds) {
        const auto start = std::chrono::steady_clock::now();
        const auto report = verify_decomposition(closed_form_decomposition(kind, 30));
        const double secs = seconds_since(start);
        const std::string name(to_string(kind));
        o.require(report.right_left_identity, name + " RL != I");
        o.require(report.reconstructs_generator, name + " RDL != G");
        o.require(report.eigen_matches_diagonal, name + " D != diag");
        o.require(secs < 5.0, name + fmt(" took %.2fs", secs));
        o.note(name + fmt(" %.2fs", secs));
    }
    return o;
}

Outcome recursion_equivalence() {
    Outcome o;
    for (auto kind : kinds) {
        const auto closed = closed_form_decomposition(kind, 30);
        const auto rec = recursive_decomposition(build_generator(kind, 30), kind);
        const std::string name(to_string(kind));
        o.require(rec.right == closed.right, name + " R differs");
        o.require(rec.left == closed.left, name + " L differs");
        o.require(rec.eigen == closed.eigen, name + " D differs");
    }
    return o;
}

Outcome hitting_values() {
    Outcome o;
    const char* expected[] = {"1", "1/2", "5/12", "3/8", "251/720", "95/288", "19087/60480"};
    double worst = 0.0;
    for (unsigned j = 1; j <= 7; ++j) {
        const auto want = parse_rational(expected[j - 1]);
        const auto conv = hitting_exact(1, j, HittingMethod::convolution);
        const auto shift = hitting_exact(1, j, HittingMethod::stirling_shift);
        o.require(conv == want, "convolution h(1," + std::to_string(j) + ") = " + to_string(conv));
        o.require(shift == want, "Stirling h(1," + std::to_string(j) + ") = " + to_string(shift));
        worst = std::max(worst, std::abs(hitting_integral(j - 1) - want.get_d()));
    }
    o.require(worst <= 1e-9, fmt("quadrature error %.3g", worst));
    o.note(fmt("max quadrature error %.3g", worst));
    return o;
}

Outcome hitting_asymptotics() {
    Outcome o;
    const double j = 1e6;
    const double h = hitting_integral(static_cast<unsigned long>(j) - 1);
    // Independent cross-check of the quadrature at a size the double
    // renewal recursion can still reach.
    const auto renewal = hitting_renewal_table(10000);
    const double cross = std::abs(hitting_integral(10000) - renewal[10000]);
    o.require(cross < 1e-11, fmt("quadrature vs renewal at 1e4: %.3g", cross));
    const double l = std::log(j);
    const double scaled = std::abs(h - hitting_asymptotic(j)) * l * l * l;
    o.require(scaled <= 10.0, fmt("scaled error %.4f", scaled));
    o.note(fmt("h(1,1e6) = %.12f, |h - asym| log^3 j = %.4f", h, scaled));
    return o;
}

Outcome transition_formulas() {
    Outcome o;
    const std::vector<double> grid = {0.1, 0.5, 1.0, 3.0};
    const unsigned n = 30;
    double worst_forms = 0.0;
    std::map<double, std::vector<std::vector<double>>> cache;
    auto matrix = [&](double t) -> const std::vector<std::vector<double>>& {
        auto it = cache.find(t);
        if (it != cache.end()) {
            return it->second;
        }
        const auto tp = TimePoint::from_time(t);
        std::vector<std::vector<double>> p(n + 1, std::vector<double>(n + 1, 0.0));
        for (unsigned i = 1; i <= n; ++i) {
            for (unsigned j = i; j <= n; ++j) {
                p[i][j] = fixation_transition(i, j, tp);
            }
        }
        return cache.emplace(t, std::move(p)).first->second;
    };
    for (double t : grid) {
        const auto tp = TimePoint::from_time(t);
        const auto& p = matrix(t);
        for (unsigned i = 1; i <= n; ++i) {
            for (unsigned j = i; j <= n; ++j) {
                const double b = fixation_transition(i, j, tp, TransitionFormula::binomial);
                worst_forms = std::max(worst_forms, std::abs(b - p[i][j]));
            }
        }
    }
    o.require(worst_forms <= 1e-10, fmt("forms differ by %.3g", worst_forms));

    double worst_pgf = 0.0;
    for (double t : grid) {
        const auto tp = TimePoint::from_time(t);
        for (unsigned i : {1U, 2U, 5U, 10U, 20U, 30U}) {
            double sum = 0.0;
            for (unsigned j = i; j <= 120; ++j) {
                sum += fixation_transition(i, j, tp) * std::pow(0.5, j);
            }
            worst_pgf = std::max(worst_pgf, std::abs(sum - fixation_pgf(i, tp, 0.5)));
        }
    }
    o.require(worst_pgf <= 1e-8, fmt("pgf partial sums off by %.3g", worst_pgf));

    double worst_ck = 0.0;
    for (double s : grid) {
        for (double u : grid) {
            const auto& ps = matrix(s);
            const auto& pu = matrix(u);
            const auto& psu = matrix(s + u);
            for (unsigned i = 1; i <= n; ++i) {
                for (unsigned j = i; j <= n; ++j) {
                    double sum = 0.0;
                    for (unsigned k = i; k <= j; ++k) {
                        sum += ps[i][k] * pu[k][j];
                    }
                    worst_ck = std::max(worst_ck, std::abs(sum - psu[i][j]));
                }
            }
        }
    }
    o.require(worst_ck <= 1e-8, fmt("Chapman-Kolmogorov off by %.3g", worst_ck));
    o.note(fmt("forms %.3g, pgf %.3g", worst_forms, worst_pgf) + fmt(", CK %.3g", worst_ck));
    return o;
}

Outcome absorption_law() {
    Outcome o;
    double worst = 0.0;
    for (double t : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        worst = std::max(worst, std::abs(absorption_cdf(2, 1, t) - (-std::expm1(-t))));
    }
    o.require(worst <= 1e-12, fmt("(2,1) error %.3g", worst));
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t tag = 0;
    for (double t : {0.5, 1.0, 2.0}) {
        const auto e = estimate_absorption(50, 1, t, SimConfig{mix_seed(seed, tag++), 100000, worker_threads()});
        const double exact = absorption_cdf(50, 1, t);
        const double z = (e.value - exact) / e.std_error;
        o.require(std::abs(z) <= 3.0, fmt("t=%.1f z=%.2f", t, z));
        o.note(fmt("t=%.1f z=%.2f", t, z));
    }
    const double secs = seconds_since(start);
    o.require(secs < 60.0, fmt("Monte Carlo took %.1fs", secs));
    o.note(fmt("%.1fs", secs));
    return o;
}

Outcome gumbel_limit() {
    Outcome o;
    const unsigned long n = 1000000;
    const double shift = std::log(std::log(static_cast<double>(n)));
    double worst = 0.0;
    unsigned long worst_i = 0;
    double worst_x = 0.0;
    double worst_first_order = 0.0;
    for (unsigned long i : {1UL, 2UL, 3UL}) {
        for (double x : {-1.0, 0.0, 1.0, 2.0}) {
            const double dev = std::abs(absorption_cdf(n, i, x + shift) - gumbel_limit_cdf(i, x));
            if (dev > worst) {
                const double g = gumbel_cdf(x);
                const double density = static_cast<double>(i) * std::pow(1.0 - g, static_cast<double>(i - 1)) * g * std::exp(-x);
                worst = dev;
                worst_i = i;
                worst_x = x;
                worst_first_order = euler_gamma * density / std::log(static_cast<double>(n));
            }
        }
    }
    o.require(worst <= 0.02, fmt("max deviation %.4f", worst));
    o.note(fmt("at i = %lu, x = %g; gamma F_i'(x) / log n = %.4f", worst_i, worst_x, worst_first_order));
    return o;
}

Outcome edgeworth() {
    Outcome o;
    const auto c = edgeworth_c(3);
    const double want[] = {-0.577216, -0.655878, 0.042003};
    for (unsigned k = 1; k <= 3; ++k) {
        o.require(std::abs(c.c[k] - want[k - 1]) <= 1e-5, "c_" + std::to_string(k) + fmt(" = %.8f", c.c[k]));
    }
    const unsigned long n = 10000;
    const double shift = std::log(std::log(static_cast<double>(n)));
    for (double x : {-1.0, 0.0, 1.0}) {
        const double exact = absorption_cdf(n, 1, x + shift);
        const double e0 = std::abs(edgeworth_cdf(n, 1, x, 0) - exact);
        const double e1 = std::abs(edgeworth_cdf(n, 1, x, 1) - exact);
        const double e2 = std::abs(edgeworth_cdf(n, 1, x, 2) - exact);
        o.require(e1 < e0 && e2 < e1, fmt("x=%.0f errors not decreasing", x));
        o.note(fmt("x=%.0f: %.2e", x, e0) + fmt(" > %.2e > ", e1) + fmt("%.2e", e2));
    }
    return o;
}

Outcome limit_samplers() {
    Outcome o;
    double worst = 0.0;
    std::uint64_t stream = 0;
    for (double alpha : {0.3, 0.5, 0.8}) {
        const auto tp = TimePoint::from_alpha(alpha);
        RandomStream rng(seed, stream++);
        std::vector<std::vector<double>> powers(3, std::vector<double>(100000));
        for (std::size_t k = 0; k < 100000; ++k) {
            const double x = sample_mittag_leffler(tp, rng);
            powers[0][k] = x;
            powers[1][k] = x * x;
            powers[2][k] = x * x * x;
        }
        for (unsigned m = 1; m <= 3; ++m) {
            const auto e = summarize(powers[m - 1]);
            const double z = (e.value - ml_moment(tp, m)) / e.std_error;
            worst = std::max(worst, std::abs(z));
            o.require(std::abs(z) <= 4.0, fmt("ML alpha=%.1f m=", alpha) + std::to_string(m) + fmt(" z=%.2f", z));
        }
        for (double lambda : {0.5, 1.0, 2.0}) {
            RandomStream lrng(seed, stream++);
            std::vector<double> v(100000);
            for (auto& x : v) {
                x = std::exp(-lambda * sample_neveu(tp, lrng));
            }
            const auto e = summarize(v);
            const double z = (e.value - neveu_laplace(tp, lambda)) / e.std_error;
            worst = std::max(worst, std::abs(z));
            o.require(std::abs(z) <= 4.0, fmt("stable alpha=%.1f lambda=%.1f", alpha, lambda) + fmt(" z=%.2f", z));
        }
    }
    o.note(fmt("max |z| = %.2f", worst));
    return o;
}

Outcome scaled_convergence() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::uint64_t> ns = {100, 1000, 10000};
    const SimConfig config{seed, 10000, worker_threads()};
    for (auto [process, t] : {std::pair{ProcessKind::block, 1.0}, std::pair{ProcessKind::fixation, 0.5}}) {
        const auto study = convergence_study(process, ns, t, config, 1000000, FixationRoute::branching);
        std::string line = std::string(to_string(process)) + " KS";
        for (const auto& row : study.rows) {
            line += fmt(" %.4f", row.ks);
        }
        o.note(line);
        for (std::size_t k = 1; k < study.rows.size(); ++k) {
            o.require(study.rows[k].ks < study.rows[k - 1].ks,
                      std::string(to_string(process)) + " KS not decreasing at n=" + std::to_string(study.rows[k].n));
        }
    }
    const double secs = seconds_since(start);
    o.require(secs < 600.0, fmt("took %.0fs", secs));
    o.note(fmt("%.0fs", secs));
    return o;
}

Outcome siegmund_duality() {
    Outcome o;
    double worst = 0.0;
    for (double t : {0.1, 0.5, 1.0, 3.0}) {
        const auto tp = TimePoint::from_time(t);
        double below = 0.0;
        for (unsigned j = 3; j < 10; ++j) {
            below += fixation_transition(3, j, tp);
        }
        worst = std::max(worst, std::abs(block_tail_via_duality(10, 3, tp) - (1.0 - below)));
    }
    o.require(worst <= 1e-8, fmt("finite-n duality off by %.3g", worst));
    RandomStream rng(seed, 0);
    const auto gap = siegmund_duality_gap(1.0, 1.0, 1.0, 100000, rng);
    const double z = gap.gap / gap.std_error;
    o.require(std::abs(z) <= 3.0, fmt("gap %.4f, z=%.2f", gap.gap, z));
    o.note(fmt("finite-n %.3g", worst) + fmt(", gap %.4f (z=%.2f)", gap.gap, z));
    return o;
}

Outcome pow_inequality() {
    Outcome o;
    unsigned violations = 0;
    for (int a = 0; a <= 100; ++a) {
        for (int k = 0; k <= 1000; ++k) {
            violations += check_pow_inequality(k * 0.01, a * 0.01) ? 0 : 1;
        }
    }
    o.require(violations == 0, std::to_string(violations) + " violations");
    o.note("101 x 1001 grid, " + std::to_string(violations) + " violations");
    return o;
}

Outcome reproducibility() {
    Outcome o;
    const std::vector<std::vector<std::string>> commands = {
        {"simulate", "--mode", "path", "--process", "block", "--n", "40", "--t", "2", "--reps", "30", "--seed", "7"},
        {"simulate", "--mode", "path", "--process", "fixation", "--n", "4", "--t", "1", "--reps", "30", "--seed",
         "7"},
        {"simulate", "--mode", "scaled", "--process", "block", "--n", "500", "--t", "1", "--reps", "500", "--seed",
         "8"},
        {"simulate", "--mode", "scaled", "--process", "fixation", "--route", "path", "--n", "20", "--t", "0.5",
         "--reps", "200", "--seed", "8"},
        {"simulate", "--mode", "hitting", "--i", "1", "--j", "5", "--reps", "2000", "--seed", "9"},
        {"simulate", "--mode", "absorption", "--n", "50", "--t", "1", "--reps", "2000", "--seed", "9",
         "--format", "json"},
        {"converge", "--process", "block", "--ns", "50,200", "--t", "1", "--reps", "300", "--ref-reps", "20000",
         "--seed", "10"},
        {"converge", "--process", "fixation", "--ns", "50,200", "--t", "0.5", "--reps", "300", "--ref-reps",
         "20000", "--seed", "10", "--format", "json"},
    };
    for (const auto& cmd : commands) {
        std::ostringstream out1, out2, err;
        const int c1 = cli::run(cmd, out1, err);
        auto threaded = cmd;
        threaded.insert(threaded.end(), {"--threads", "2"});
        const int c2 = cli::run(threaded, out2, err);
        const std::string label = cmd[0] + " " + cmd[2] + " " + cmd[4];
        o.require(c1 == 0 && c2 == 0, label + " failed: " + err.str());
        o.require(!out1.str().empty() && out1.str() == out2.str(), label + " output differs");
    }
    o.note(std::to_string(commands.size()) + " invocations repeated");
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"spectral exactness, n = 30", spectral_exactness},
        {"recursions equal closed forms, n = 30", recursion_equivalence},
        {"hitting probabilities j = 1..7", hitting_values},
        {"hitting asymptotics at j = 1e6", hitting_asymptotics},
        {"transition formulas, pgf, Chapman-Kolmogorov", transition_formulas},
        {"absorption CDF, analytic and Monte Carlo", absorption_law},
        {"Gumbel limit at n = 1e6", gumbel_limit},
        {"Edgeworth coefficients and error ordering", edgeworth},
        {"limit samplers", limit_samplers},
        {"scaled marginals approach the limit laws", scaled_convergence},
        {"Siegmund duality, finite n and limit", siegmund_duality},
        {"power inequality grid", pow_inequality},
        {"CLI reproducibility", reproducibility},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[k].second();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.note(std::string("exception: ") + e.what());
        }
        const double secs = seconds_since(start);
        failures += outcome.pass ? 0 : 1;
        std::printf("%s %2zu  %s: %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    outcome.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
