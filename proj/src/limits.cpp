#include "coalab/limits.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "coalab/special_functions.hpp"

namespace coalab {

double ml_moment(TimePoint tp, double m) {
    if (!(m >= 0.0)) {
        throw std::domain_error("ml_moment requires m >= 0");
    }
    if (m == 0.0) {
        return 1.0;
    }
    return std::exp(boost::math::lgamma(1.0 + m) - boost::math::lgamma(1.0 + m * tp.alpha));
}

double neveu_laplace(TimePoint tp, double lambda) {
    if (!(lambda >= 0.0)) {
        throw std::domain_error("Laplace argument must be nonnegative");
    }
    return std::exp(-std::pow(lambda, tp.alpha));
}

namespace {

double log_neveu(double a, RandomStream& rng) {
    const double u = rng.uniform();
    const double e = rng.exponential();
    const double b = (1.0 - a) / a;
    return std::log(boost::math::sin_pi(a * u)) + b * std::log(boost::math::sin_pi((1.0 - a) * u)) -
           std::log(boost::math::sin_pi(u)) / a - b * std::log(e);
}

} // namespace

double sample_neveu(TimePoint tp, RandomStream& rng) {
    if (tp.alpha >= 1.0) {
        return 1.0;
    }
    return std::exp(log_neveu(tp.alpha, rng));
}

double sample_mittag_leffler(TimePoint tp, RandomStream& rng) {
    if (tp.alpha >= 1.0) {
        return 1.0;
    }
    return std::exp(-tp.alpha * log_neveu(tp.alpha, rng));
}

double neveu_laplace_fd(const std::vector<double>& times, const std::vector<double>& lambdas) {
    if (times.empty() || times.size() != lambdas.size()) {
        throw std::domain_error("neveu_laplace_fd needs equally many times and lambdas");
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0) || (k > 0 && !(times[k] > times[k - 1]))) {
            throw std::domain_error("times must be nonnegative and strictly increasing");
        }
        if (!(lambdas[k] >= 0.0)) {
            throw std::domain_error("lambdas must be nonnegative");
        }
    }
    double carry = lambdas.back();
    for (std::size_t k = times.size() - 1; k > 0; --k) {
        // a_k / a_{k-1} = exp(-(t_k - t_{k-1}))
        carry = lambdas[k - 1] + std::pow(carry, std::exp(times[k - 1] - times[k]));
    }
    return std::exp(-std::pow(carry, std::exp(-times.front())));
}

double log_cumulant(LogMarginalSpec spec, unsigned j) {
    if (j < 1) {
        throw std::out_of_range("cumulant order starts at 1");
    }
    const double kappa = gumbel_cumulant(j);
    const double jt = static_cast<double>(j) * spec.t;
    if (spec.which == LogProcess::y_tilde) {
        return std::expm1(jt) * kappa;
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * -std::expm1(-jt) * kappa;
}

DualityGap siegmund_duality_gap(double x, double y, double t, unsigned long reps, RandomStream& rng) {
    if (!(x >= 0.0) || !(y >= 0.0) || !(t > 0.0)) {
        throw std::domain_error("duality gap needs x, y >= 0 and t > 0");
    }
    if (reps < 1) {
        throw std::domain_error("duality gap needs at least one replicate");
    }
    const TimePoint tp = TimePoint::from_time(t);
    std::vector<double> block(reps);
    std::vector<double> branching(reps);
    const double x_scale = std::pow(x, tp.alpha);
    for (auto& v : block) {
        v = (x_scale * sample_mittag_leffler(tp, rng) <= y) ? 1.0 : 0.0;
    }
    const double y_scale = std::pow(y, 1.0 / tp.alpha);
    for (auto& v : branching) {
        v = (y_scale * sample_neveu(tp, rng) >= x) ? 1.0 : 0.0;
    }
    DualityGap out;
    out.block_side = summarize(block);
    out.branching_side = summarize(branching);
    out.gap = out.block_side.value - out.branching_side.value;
    out.std_error = std::hypot(out.block_side.std_error, out.branching_side.std_error);
    return out;
}

bool check_pow_inequality(double x, double alpha) {
    if (!(x >= 0.0) || !(alpha >= 0.0) || !(alpha <= 1.0)) {
        throw std::domain_error("check_pow_inequality needs x >= 0 and alpha in [0, 1]");
    }
    const double lhs = std::pow(-std::expm1(-x), alpha);
    const double rhs = -std::expm1(-std::pow(x, alpha));
    return lhs >= rhs - 1e-12;
}

} // namespace coalab
