#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coalab/analytics.hpp"
#include "coalab/limits.hpp"
#include "coalab/simulate.hpp"
#include "coalab/spectral.hpp"

namespace coalab::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string format_real(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string csv_cell(const Json& v) {
    switch (v.type()) {
    case Json::value_t::string: {
        const auto& s = v.get_ref<const std::string&>();
        if (s.find_first_of(",\"\n") == std::string::npos) {
            return s;
        }
        std::string quoted = "\"";
        for (char c : s) {
            quoted += c;
            if (c == '"') {
                quoted += '"';
            }
        }
        return quoted + "\"";
    }
    case Json::value_t::number_float:
        return format_real(v.get<double>());
    case Json::value_t::boolean:
        return v.get<bool>() ? "true" : "false";
    case Json::value_t::null:
        return "";
    default:
        return v.dump();
    }
}

// Rows share the keys of the first row. One row prints as a JSON object,
// several as an array.
void emit(const std::vector<Json>& rows, const std::string& format, std::ostream& out) {
    if (format == "json") {
        if (rows.size() == 1) {
            out << rows.front().dump() << '\n';
        } else {
            out << Json(rows).dump() << '\n';
        }
        return;
    }
    if (rows.empty()) {
        return;
    }
    bool first = true;
    for (const auto& item : rows.front().items()) {
        out << (first ? "" : ",") << item.key();
        first = false;
    }
    out << '\n';
    for (const auto& row : rows) {
        first = true;
        for (const auto& item : rows.front().items()) {
            out << (first ? "" : ",") << csv_cell(row.contains(item.key()) ? row.at(item.key()) : Json());
            first = false;
        }
        out << '\n';
    }
}

void write_sidecar(const std::string& path, const Json& content) {
    if (path.empty()) {
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw UsageError("cannot write diagnostics file '" + path + "'");
    }
    file << content.dump(2) << '\n';
}

Json estimate_json(const EstimateWithError& e) {
    return Json{{"estimate", e.value}, {"std_error", e.std_error}, {"reps", e.reps}};
}

struct Options {
    std::string format = "csv";
    std::uint64_t seed = 1;
    unsigned long reps = 10000;
    unsigned threads = 1;

    std::string kind;
    std::string method;
    std::string mode;
    std::string process = "block";
    std::string route = "branching";
    std::string which = "y";
    std::string diagnostics;
    bool verify = false;

    unsigned long n = 0;
    unsigned long i = 1;
    unsigned long j = 0;
    unsigned long trunc = 0;
    unsigned K = 2;
    unsigned long cap = 0;
    unsigned long ref_reps = 1000000;
    double t = 1.0;
    double x = 0.0;
    double y = 1.0;
    double m = 1.0;
    double alpha = 0.5;
    double tol = -1.0;
    std::vector<double> ts;
    std::vector<double> lambdas;
    std::vector<std::uint64_t> ns;
};

void add_format(CLI::App* sub, Options& o) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void add_mc(CLI::App* sub, Options& o) {
    sub->add_option("--reps", o.reps, "Monte Carlo replicates")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "64-bit seed; replicate r uses substream (seed, r)");
    sub->add_option("--threads", o.threads, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);
}

// --- subcommands ---------------------------------------------------------

std::vector<Json> run_spectral(const Options& o) {
    if (o.n < 1) {
        throw UsageError("--n must be at least 1");
    }
    const auto kind = parse_generator_kind(o.kind);
    const auto n = static_cast<unsigned>(o.n);
    SpectralDecomposition dec = o.method == "recursive"
                                    ? recursive_decomposition(build_generator(kind, n), kind)
                                    : closed_form_decomposition(kind, n);
    if (o.verify) {
        const auto report = verify_decomposition(dec);
        const std::string generator = kind == GeneratorKind::bs_block ? "Q" : "Gamma";
        return {Json{{"kind", std::string(to_string(kind))},
                     {"n", o.n},
                     {"method", o.method},
                     {"RL=I", report.right_left_identity},
                     {"RDL=" + generator, report.reconstructs_generator},
                     {"D=diag", report.eigen_matches_diagonal}}};
    }
    if (o.format == "json") {
        Json right = Json::array();
        Json left = Json::array();
        Json eigen = Json::array();
        for (unsigned i = 1; i <= n; ++i) {
            Json r_row = Json::array();
            Json l_row = Json::array();
            for (unsigned j = 1; j <= n; ++j) {
                r_row.push_back(to_string(dec.right.at(i, j)));
                l_row.push_back(to_string(dec.left.at(i, j)));
            }
            right.push_back(std::move(r_row));
            left.push_back(std::move(l_row));
            eigen.push_back(to_string(dec.eigen[i - 1]));
        }
        return {Json{{"kind", std::string(to_string(kind))},
                     {"n", o.n},
                     {"method", o.method},
                     {"eigen", eigen},
                     {"right", right},
                     {"left", left}}};
    }
    std::vector<Json> rows;
    for (unsigned i = 1; i <= n; ++i) {
        rows.push_back(Json{{"matrix", "D"}, {"i", i}, {"j", i}, {"value", to_string(dec.eigen[i - 1])}});
    }
    for (const auto& [name, mat] : {std::pair{"R", &dec.right}, std::pair{"L", &dec.left}}) {
        for (unsigned i = 1; i <= n; ++i) {
            for (unsigned j = 1; j <= n; ++j) {
                if (mat->at(i, j) != 0) {
                    rows.push_back(Json{{"matrix", name}, {"i", i}, {"j", j}, {"value", to_string(mat->at(i, j))}});
                }
            }
        }
    }
    return rows;
}

std::vector<Json> run_transition(const Options& o) {
    const auto tp = TimePoint::from_time(o.t);
    const auto formula = o.method == "binomial" ? TransitionFormula::binomial : TransitionFormula::stirling;
    const auto i = static_cast<unsigned>(o.i);
    unsigned j_lo = static_cast<unsigned>(o.j);
    unsigned j_hi = j_lo;
    if (o.j == 0) {
        j_lo = i;
        j_hi = static_cast<unsigned>(o.trunc > 0 ? o.trunc : o.i + 20);
    }
    std::vector<Json> rows;
    for (unsigned j = j_lo; j <= j_hi; ++j) {
        Json row{{"i", i}, {"j", j}, {"t", o.t}, {"method", o.method}, {"value", fixation_transition(i, j, tp, formula)}};
        if (o.tol >= 0.0) {
            const double a = fixation_transition(i, j, tp, TransitionFormula::stirling);
            const double b = fixation_transition(i, j, tp, TransitionFormula::binomial);
            row["forms_agree"] = std::abs(a - b) <= o.tol;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Json> run_hitting(const Options& o) {
    const auto method = parse_hitting_method(o.method);
    const auto i = static_cast<unsigned>(o.i);
    const auto j = static_cast<unsigned>(o.j);
    if (method == HittingMethod::integral) {
        const double v = j < i ? 0.0 : hitting_integral(o.j - o.i);
        return {Json{{"i", o.i}, {"j", o.j}, {"method", o.method}, {"value", v}}};
    }
    const auto h = hitting_probability(i, j, method);
    Json row{{"i", o.i}, {"j", o.j}, {"method", o.method}};
    if (h.exact) {
        row["value"] = to_string(*h.exact);
        row["approx"] = h.value;
    } else {
        row["value"] = h.value;
    }
    return {row};
}

std::vector<Json> run_absorption(const Options& o) {
    Json row{{"n", o.n}, {"i", o.i}, {"t", o.t}, {"method", o.method}};
    if (o.method == "mc") {
        const auto e = estimate_absorption(o.n, o.i, o.t, SimConfig{o.seed, o.reps, o.threads});
        row.update(estimate_json(e));
        row["seed"] = o.seed;
    } else if (o.method == "duality") {
        row["cdf"] = block_tail_via_duality(static_cast<unsigned>(o.n), static_cast<unsigned>(o.i),
                                            TimePoint::from_time(o.t));
    } else {
        row["cdf"] = absorption_cdf(o.n, o.i, o.t);
    }
    return {row};
}

std::vector<Json> run_edgeworth(const Options& o) {
    const double shift = std::log(std::log(static_cast<double>(o.n)));
    const auto coeffs = edgeworth_c(o.K);
    Json row{{"n", o.n},
             {"i", o.i},
             {"x", o.x},
             {"K", o.K},
             {"expansion", edgeworth_cdf(o.n, o.i, o.x, o.K)},
             {"exact", absorption_cdf(o.n, o.i, o.x + shift)},
             {"gumbel", gumbel_limit_cdf(o.i, o.x)}};
    if (o.format == "json") {
        row["c"] = coeffs.c;
    }
    return {row};
}

std::vector<Json> run_limits(const Options& o) {
    if (o.mode == "moment") {
        const auto tp = TimePoint::from_time(o.t);
        return {Json{{"t", o.t}, {"m", o.m}, {"moment", ml_moment(tp, o.m)}}};
    }
    if (o.mode == "laplace") {
        std::vector<double> ts = o.ts.empty() ? std::vector<double>{o.t} : o.ts;
        std::vector<double> ls = o.lambdas.empty() ? std::vector<double>{o.x} : o.lambdas;
        return {Json{{"k", ts.size()}, {"value", neveu_laplace_fd(ts, ls)}}};
    }
    if (o.mode == "cumulant") {
        const LogMarginalSpec spec{o.which == "x" ? LogProcess::x_tilde : LogProcess::y_tilde, o.t};
        return {Json{{"which", o.which}, {"t", o.t}, {"j", o.j}, {"cumulant", log_cumulant(spec, o.j)}}};
    }
    if (o.mode == "sample") {
        const auto process = o.which == "x" ? ProcessKind::block : ProcessKind::fixation;
        const auto values = limit_reference_sample(process, o.t, SimConfig{o.seed, o.reps, o.threads});
        std::vector<Json> rows;
        rows.reserve(values.size());
        for (double v : values) {
            rows.push_back(Json{{"value", v}});
        }
        return rows;
    }
    if (o.mode == "duality") {
        RandomStream rng(o.seed, 0);
        const auto gap = siegmund_duality_gap(o.x, o.y, o.t, o.reps, rng);
        return {Json{{"x", o.x},
                     {"y", o.y},
                     {"t", o.t},
                     {"reps", o.reps},
                     {"seed", o.seed},
                     {"block_side", gap.block_side.value},
                     {"branching_side", gap.branching_side.value},
                     {"gap", gap.gap},
                     {"std_error", gap.std_error}}};
    }
    if (o.mode == "inequality") {
        return {Json{{"x", o.x}, {"alpha", o.alpha}, {"holds", check_pow_inequality(o.x, o.alpha)}}};
    }
    throw UsageError("unknown limits mode '" + o.mode + "'");
}

std::vector<Json> run_simulate(const Options& o) {
    const SimConfig config{o.seed, o.reps, o.threads};
    const auto process = parse_process_kind(o.process);
    if (o.mode == "hitting") {
        Json row{{"i", o.i}, {"j", o.j}, {"seed", o.seed}};
        row.update(estimate_json(estimate_hitting(o.i, o.j, config)));
        return {row};
    }
    if (o.mode == "absorption") {
        Json row{{"n", o.n}, {"i", o.i}, {"t", o.t}, {"seed", o.seed}};
        row.update(estimate_json(estimate_absorption(o.n, o.i, o.t, config)));
        return {row};
    }
    if (o.mode == "scaled") {
        const auto sample = scaled_marginal_sample(process, o.n, o.t, config, parse_fixation_route(o.route));
        write_sidecar(o.diagnostics, Json{{"process", o.process},
                                          {"route", o.route},
                                          {"n", o.n},
                                          {"t", o.t},
                                          {"reps", o.reps},
                                          {"seed", o.seed},
                                          {"cap_doublings", sample.diagnostics.cap_doublings},
                                          {"rejected_draws", sample.diagnostics.rejected_draws}});
        std::vector<Json> rows;
        rows.reserve(sample.values.size());
        for (double v : sample.values) {
            rows.push_back(Json{{"value", v}});
        }
        return rows;
    }
    if (o.mode == "path") {
        if (o.n < 1) {
            throw UsageError("--n must be at least 1");
        }
        std::vector<Json> rows;
        unsigned long capped = 0;
        for (unsigned long r = 0; r < o.reps; ++r) {
            RandomStream rng(o.seed, r);
            PathSample path;
            if (process == ProcessKind::block) {
                path = simulate_block(o.n, o.t, rng);
            } else {
                const auto cap = o.cap > 0 ? o.cap
                                           : static_cast<unsigned long>(std::min(
                                                 0x1.0p62, std::pow(static_cast<double>(o.n), std::exp(o.t)) * 1000.0 +
                                                               static_cast<double>(o.n)));
                path = simulate_fixation(o.n, o.t, cap, rng);
                capped += path.exceeded_cap ? 1 : 0;
            }
            rows.push_back(Json{{"rep", r}, {"time", 0.0}, {"state", path.states.front()}});
            for (std::size_t k = 0; k < path.jump_times.size(); ++k) {
                rows.push_back(Json{{"rep", r}, {"time", path.jump_times[k]}, {"state", path.states[k + 1]}});
            }
        }
        write_sidecar(o.diagnostics, Json{{"process", o.process},
                                          {"n", o.n},
                                          {"horizon", o.t},
                                          {"reps", o.reps},
                                          {"seed", o.seed},
                                          {"paths_over_cap", capped}});
        return rows;
    }
    throw UsageError("unknown simulate mode '" + o.mode + "'");
}

std::vector<Json> run_converge(const Options& o) {
    const auto process = parse_process_kind(o.process);
    const auto study = convergence_study(process, o.ns, o.t, SimConfig{o.seed, o.reps, o.threads}, o.ref_reps,
                                         parse_fixation_route(o.route));
    std::vector<Json> rows;
    Json diag = Json::array();
    for (const auto& row : study.rows) {
        rows.push_back(Json{{"n", row.n}, {"t", row.t}, {"ks", row.ks}, {"reps", row.reps}, {"seed", row.seed}});
        diag.push_back(Json{{"n", row.n},
                            {"cap_doublings", row.diagnostics.cap_doublings},
                            {"rejected_draws", row.diagnostics.rejected_draws}});
    }
    write_sidecar(o.diagnostics, Json{{"process", o.process},
                                      {"route", o.route},
                                      {"reference_reps", study.reference_reps},
                                      {"runs", diag}});
    return rows;
}

constexpr const char* spectral_help =
    "Exact spectral decomposition G = R diag(D) L of a generator window.\n"
    "  bs-fixation: r_ij = (i!/j!)(-1)^{i+j} S(j,i), l_ij = (i!/j!)(-1)^{i+j} s(j,i), d_i = -i\n"
    "  bs-block:    r_ij = ((j-1)!/(i-1)!)|s(i,j)|, l_ij = (-1)^{i+j}((j-1)!/(i-1)!) S(i,j), d_i = 1-i\n"
    "  kingman-fixation: r_ij = (-1)^{j-i} j!(j-1)!(i+j)!/((j-i)! i!(i-1)!(2j)!),\n"
    "                    l_ij = j!(j-1)!(2i+1)!/(i!(i-1)!(j-i)!(i+j+1)!), d_i = -i(i+1)/2\n"
    "  recursive: r_ij = sum_{k=i+1}^{j} g_ik r_kj/(d_j-d_i), l_ij = sum_{k=i}^{j-1} l_ik g_kj/(d_i-d_j)";

constexpr const char* transition_help =
    "Fixation-line transition probability p_ij(t), alpha = exp(-t).\n"
    "  stirling: p_ij = (-1)^{i+j} (i!/j!) sum_{k=i}^{j} S(k,i) alpha^k s(j,k)\n"
    "  binomial: p_ij = (-1)^j sum_{k=1}^{i} (-1)^k C(i,k) binom(k alpha, j)\n"
    "  pgf: E z^{L_t} = (1 - (1-z)^alpha)^i";

constexpr const char* hitting_help =
    "Probability h(i,j) that the fixation line from i visits j; h(i,j) = h(1, j-i+1).\n"
    "  convolution:     sum_{k=1}^{j-i} P(eta_1 + ... + eta_k = j-i), P(eta=n) = 1/(n(n+1))\n"
    "  stirling-double: (-1)^{i+j} (i!/(j-1)!) sum_{k=i}^{j} s(j,k) S(k,i)/k\n"
    "  stirling-shift:  ((-1)^{j-i}/(j-i)!) sum_{k=1}^{j-i+1} s(j-i+1,k)/k\n"
    "  integral:        (1/(j-i)!) int_0^1 Gamma(j-i+x)/Gamma(x) dx\n"
    "  gf-series:       [z^{j-1}] z^i / ((1-z)(-log(1-z)))";

constexpr const char* absorption_help =
    "Absorption time tau_{n,i} of the block counting process started at n.\n"
    "  analytic: P(tau_{n,i} <= t) = sum_{j=1}^{i} (-1)^{j-1} C(i,j) Gamma(n - j alpha)/(Gamma(n) Gamma(1 - j alpha))\n"
    "  duality:  sum_{k=1}^{i} (-1)^{k+n} C(i,k) binom(k alpha - 1, n - 1) = P(L_t >= n | L_0 = i)\n"
    "  mc:       fraction of simulated paths with N_t <= i";

constexpr const char* edgeworth_help =
    "Expansion of P(tau_{n,i} - log log n <= x) in powers of 1/log n.\n"
    "  sum_{k=0}^{K} c_k d_ki(x) e^{-kx} / log^k n,  sum_k c_k x^k = 1/Gamma(1-x),\n"
    "  d_ki(x) = sum_{j=1}^{i} (-1)^{j-1} C(i,j) j^k F(x)^j,  F(x) = exp(-exp(-x)).\n"
    "  K = 0 is the Gumbel limit 1 - (1 - F(x))^i.";

constexpr const char* limits_help =
    "Limit laws, alpha = exp(-t).\n"
    "  moment:     E X_t^m = Gamma(1+m)/Gamma(1+m alpha)\n"
    "  laplace:    psi_k by psi_k(.., l_{k-1}, l_k) = psi_{k-1}(.., l_{k-1} + l_k^{a_k/a_{k-1}}), psi_1(l) = exp(-l^{a_1})\n"
    "  cumulant:   kappa_j(log Y_t) = (e^{jt}-1) kappa_j(G), kappa_j(log X_t) = (-1)^j (1-e^{-jt}) kappa_j(G)\n"
    "  sample:     Mittag-Leffler (--which x) or positive stable (--which y) draws\n"
    "  duality:    P(x^alpha X_t <= y) - P(y^{1/alpha} Y_t >= x)\n"
    "  inequality: (1-e^{-x})^alpha >= 1 - e^{-x^alpha}";

constexpr const char* simulate_help =
    "Exact simulation. Block: rate i-1, decrement m w.p. i/((i-1)m(m+1)), m < i.\n"
    "Fixation: rate i, increment m w.p. 1/(m(m+1)).\n"
    "  path:       CSV rep,time,state for --reps paths up to time --t\n"
    "  scaled:     N_t/n^{exp(-t)} or L_t/n^{exp(t)}, one value per line\n"
    "  hitting:    jump-chain estimate of h(i,j)\n"
    "  absorption: estimate of P(tau_{n,i} <= t)";

constexpr const char* converge_help =
    "Kolmogorov-Smirnov distance of scaled samples to a reference sample of the limit\n"
    "law (Mittag-Leffler for block, positive exp(-t)-stable for fixation) over --ns.";

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Exact and Monte Carlo computations for the Beta(1,1) coalescent: block counts N_t and the "
                 "dual chain L_t.",
                 "coalab"};
    app.require_subcommand(1);
    app.footer(std::string("Formulas:\n\nspectral: ") + spectral_help + "\n\ntransition: " + transition_help +
               "\n\nhitting: " + hitting_help + "\n\nabsorption: " + absorption_help + "\n\nedgeworth: " +
               edgeworth_help + "\n\nlimits: " + limits_help + "\n\nsimulate: " + simulate_help +
               "\n\nconverge: " + converge_help);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    auto* spectral = app.add_subcommand("spectral", "Spectral decomposition of a generator");
    spectral->footer(spectral_help);
    spectral->add_option("--kind", o.kind, "bs-block | bs-fixation | kingman-fixation")->required();
    spectral->add_option("--n", o.n, "Truncation size")->required();
    o.method = "closed";
    spectral->add_option("--method", o.method, "closed | recursive")->check(CLI::IsMember({"closed", "recursive"}));
    spectral->add_flag("--verify", o.verify, "Check R L = I and R D L = G in exact arithmetic");
    add_format(spectral, o);

    auto* transition = app.add_subcommand("transition", "Fixation-line transition probabilities");
    transition->footer(transition_help);
    transition->add_option("--i", o.i, "Initial state")->check(CLI::PositiveNumber);
    transition->add_option("--j", o.j, "Target state (omit for the row j = i..trunc)");
    transition->add_option("--t", o.t, "Time")->check(CLI::NonNegativeNumber);
    transition->add_option("--trunc", o.trunc, "Last j of the row when --j is omitted (default i + 20)");
    transition->add_option("--tol", o.tol, "Add a column telling whether both formulas agree within tol");
    auto* transition_method =
        transition->add_option("--method", o.method, "stirling | binomial")->check(CLI::IsMember({"stirling", "binomial"}));
    add_format(transition, o);

    auto* hitting = app.add_subcommand("hitting", "Hitting probabilities of the fixation line");
    hitting->footer(hitting_help);
    hitting->add_option("--i", o.i, "Initial state")->check(CLI::PositiveNumber);
    hitting->add_option("--j", o.j, "Target state")->required()->check(CLI::PositiveNumber);
    auto* hitting_method = hitting->add_option("--method", o.method,
                                               "convolution | stirling-double | stirling-shift | integral | gf-series");
    add_format(hitting, o);

    auto* absorption = app.add_subcommand("absorption", "Absorption-time distribution of the block counting process");
    absorption->footer(absorption_help);
    absorption->add_option("--n", o.n, "Initial number of blocks")->required()->check(CLI::PositiveNumber);
    absorption->add_option("--i", o.i, "Threshold")->check(CLI::PositiveNumber);
    absorption->add_option("--t", o.t, "Time")->check(CLI::PositiveNumber);
    auto* absorption_method = absorption->add_option("--method", o.method, "analytic | duality | mc")
                                  ->check(CLI::IsMember({"analytic", "duality", "mc"}));
    add_mc(absorption, o);
    add_format(absorption, o);

    auto* edgeworth = app.add_subcommand("edgeworth", "Edgeworth expansion of the absorption time");
    edgeworth->footer(edgeworth_help);
    edgeworth->add_option("--n", o.n, "Initial number of blocks (>= 3)")->required();
    edgeworth->add_option("--i", o.i, "Threshold")->check(CLI::PositiveNumber);
    edgeworth->add_option("--x", o.x, "Centered time x = t - log log n");
    edgeworth->add_option("--K", o.K, "Expansion order (0..12)");
    add_format(edgeworth, o);

    auto* limits = app.add_subcommand("limits", "Mittag-Leffler and Neveu limit laws");
    limits->footer(limits_help);
    limits->add_option("--mode", o.mode, "moment | laplace | cumulant | sample | duality | inequality")
        ->required()
        ->check(CLI::IsMember({"moment", "laplace", "cumulant", "sample", "duality", "inequality"}));
    limits->add_option("--t", o.t, "Time");
    limits->add_option("--m", o.m, "Moment order");
    limits->add_option("--x", o.x, "x argument (lambda for laplace with one time)");
    limits->add_option("--y", o.y, "y argument");
    limits->add_option("--j", o.j, "Cumulant order");
    limits->add_option("--alpha", o.alpha, "alpha for the inequality check");
    limits->add_option("--which", o.which, "x | y")->check(CLI::IsMember({"x", "y"}));
    limits->add_option("--ts", o.ts, "Increasing times for laplace")->delimiter(',');
    limits->add_option("--lambdas", o.lambdas, "Nonnegative arguments for laplace")->delimiter(',');
    add_mc(limits, o);
    add_format(limits, o);

    auto* simulate = app.add_subcommand("simulate", "Exact Monte Carlo simulation");
    simulate->footer(simulate_help);
    simulate->add_option("--mode", o.mode, "path | scaled | hitting | absorption")
        ->required()
        ->check(CLI::IsMember({"path", "scaled", "hitting", "absorption"}));
    simulate->add_option("--process", o.process, "block | fixation")->check(CLI::IsMember({"block", "fixation"}));
    simulate->add_option("--n", o.n, "Initial state");
    simulate->add_option("--i", o.i, "Start (hitting) or threshold (absorption)");
    simulate->add_option("--j", o.j, "Target state for hitting");
    simulate->add_option("--t", o.t, "Time horizon");
    simulate->add_option("--cap", o.cap, "Fixation state cap for path mode");
    simulate->add_option("--route", o.route, "Fixation draws: path | branching")
        ->check(CLI::IsMember({"path", "branching"}));
    simulate->add_option("--diagnostics", o.diagnostics, "JSON sidecar file for cap doublings and rejections");
    add_mc(simulate, o);
    add_format(simulate, o);

    auto* converge = app.add_subcommand("converge", "Convergence of scaled marginals to their limit laws");
    converge->footer(converge_help);
    converge->add_option("--process", o.process, "block | fixation")->check(CLI::IsMember({"block", "fixation"}));
    converge->add_option("--ns", o.ns, "Comma-separated initial states")->required()->delimiter(',');
    converge->add_option("--t", o.t, "Time");
    converge->add_option("--ref-reps", o.ref_reps, "Size of the limit-law reference sample")
        ->check(CLI::PositiveNumber);
    converge->add_option("--route", o.route, "Fixation draws: path | branching")
        ->check(CLI::IsMember({"path", "branching"}));
    converge->add_option("--diagnostics", o.diagnostics, "JSON sidecar file");
    add_mc(converge, o);
    add_format(converge, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    if (transition_method->count() == 0 && transition->parsed()) {
        o.method = "stirling";
    }
    if (hitting_method->count() == 0 && hitting->parsed()) {
        o.method = "stirling-shift";
    }
    if (absorption_method->count() == 0 && absorption->parsed()) {
        o.method = "analytic";
    }

    try {
        std::vector<Json> rows;
        if (spectral->parsed()) {
            rows = run_spectral(o);
        } else if (transition->parsed()) {
            rows = run_transition(o);
        } else if (hitting->parsed()) {
            rows = run_hitting(o);
        } else if (absorption->parsed()) {
            rows = run_absorption(o);
        } else if (edgeworth->parsed()) {
            rows = run_edgeworth(o);
        } else if (limits->parsed()) {
            rows = run_limits(o);
        } else if (simulate->parsed()) {
            rows = run_simulate(o);
        } else {
            rows = run_converge(o);
        }
        emit(rows, o.format, out);
    } catch (const NumericInstability& e) {
        err << "numeric instability: " << e.what() << '\n';
        return exit_numeric;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numeric;
    }
    return exit_ok;
}

} // namespace coalab::cli
