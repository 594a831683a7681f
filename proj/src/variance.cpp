#include "rwa/variance.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rwa/error.hpp"
#include "rwa/parallel.hpp"
#include "rwa/quadrature.hpp"
#include "rwa/text.hpp"

namespace rwa {

namespace {

void check_args(int n, double theta) {
    if (n < 2) throw InvalidArgument("n must be >= 2, got " + std::to_string(n));
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw InvalidArgument("theta must be > 0, got " + format_double(theta));
}

constexpr std::size_t kDrawBlock = 8192;

}  // namespace

double expected_sq_sum(int n, double theta) {
    check_args(n, theta);
    const double nd = n;
    const double head = 2.0 * nd * theta / (theta + 2.0) - 2.0 * nd * theta / (nd * theta + 1.0) + 1.0;
    const double shift = 2.0 / theta;
    CompensatedSum tail;
    double prod = 1.0;  // Π_{j=i+1}^{n} j/(j + 2/θ), built from i = n-1 downwards
    for (int i = n - 1; i >= 1; --i) {
        prod *= (i + 1.0) / (i + 1.0 + shift);
        tail.add(2.0 * theta * i / (i * theta + 1.0) * prod);
    }
    return head - tail.value();
}

double printed_bracket(int n, double theta, BracketReading reading) {
    check_args(n, theta);
    using big = boost::multiprecision::cpp_bin_float_100;
    const big th = theta;
    const big nd = n;
    std::vector<big> fact(static_cast<std::size_t>(n) + 1, big(1));
    for (int k = 1; k <= n; ++k) fact[static_cast<std::size_t>(k)] = fact[static_cast<std::size_t>(k - 1)] * k;
    big value = 2 * nd * th / (th + 2) - 2 * nd * th / (nd * th + 1) + 1;
    for (int i = 1; i <= n - 1; ++i) {
        for (int k = 0; k <= n - i - 1; ++k) {
            const int c = n - i - 1 - k;
            const big d = reading == BracketReading::Factorial ? fact[static_cast<std::size_t>(c)] : big(c);
            if (d == 0)
                throw DomainError("plain reading of the double-sum denominator divides by zero at i = " +
                                  std::to_string(i) + ", k = " + std::to_string(k));
            const big term = 2 * fact[static_cast<std::size_t>(n)] * th * th /
                             ((i * th + 1) * fact[static_cast<std::size_t>(i - 1)] *
                              fact[static_cast<std::size_t>(k)] * d * (nd * th - k * th + 2));
            if (c % 2)
                value += term;
            else
                value -= term;
        }
    }
    return static_cast<double>(value);
}

double expected_sq_sum_quadrature(int n, double theta) {
    check_args(n, theta);
    const quad::Options inner_opt{.abs_tol = 1e-15, .rel_tol = 1e-13, .max_intervals = 500};
    const quad::Options outer_opt{.abs_tol = 1e-14, .rel_tol = 1e-12, .max_intervals = 500};
    auto inner = [&](double x) {
        if (x >= 1.0) return 0.0;
        const double fx = std::pow(x, theta);
        return quad::integrate<double>(
                   [&](double y) { return std::pow(1.0 - std::pow(y, theta) + fx, n); }, x, 1.0,
                   inner_opt)
            .value;
    };
    const auto r = quad::integrate<double>(inner, 0.0, 1.0, outer_opt);
    if (!r.converged)
        throw AccuracyError("quadrature of E[sum W^2] did not converge", 2.0 * r.value, 2.0 * r.error);
    return 2.0 * r.value;
}

double dvariance_dtheta_at1(int n) {
    if (n < 2) throw InvalidArgument("n must be >= 2, got " + std::to_string(n));
    double h = 0.0;
    for (int i = n + 1; i >= 2; --i) h += 1.0 / i;
    const double nd = n;
    return (2.0 * nd - 2.0 * (nd + 2.0) * h) / ((nd + 1.0) * (nd + 2.0) * (nd + 2.0));
}

std::vector<double> sample_power_spacings(int n, double theta, Rng& rng) {
    std::vector<double> v(static_cast<std::size_t>(n));
    const double inv = 1.0 / theta;
    for (auto& x : v) x = std::pow(rng.uniform(), inv);
    std::sort(v.begin(), v.end());
    std::vector<double> w(v.size() + 1);
    double prev = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = v[i] - prev;
        prev = v[i];
    }
    w.back() = 1.0 - prev;
    return w;
}

MeanEstimate mc_expected_sq_sum(int n, double theta, std::size_t draws, RngState rng,
                                unsigned threads) {
    check_args(n, theta);
    if (draws < 10'000) throw InvalidArgument("Monte Carlo needs at least 10^4 draws");
    std::vector<double> values(draws);
    const std::size_t nblocks = (draws + kDrawBlock - 1) / kDrawBlock;
    parallel_blocks(nblocks, threads, [&](std::size_t b) {
        Rng r(rng.substream(b));
        const std::size_t lo = b * kDrawBlock;
        const std::size_t hi = std::min(draws, lo + kDrawBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            double s = 0.0;
            for (double w : sample_power_spacings(n, theta, r)) s += w * w;
            values[i] = s;
        }
    });
    return mean_and_se(values);
}

VarianceCurve variance_curve(int n, std::span<const double> theta_grid, double sigma2) {
    if (!(sigma2 >= 0.0)) throw InvalidArgument("sigma2 must be >= 0");
    for (std::size_t k = 0; k < theta_grid.size(); ++k) {
        if (!(theta_grid[k] > 0.0)) throw InvalidArgument("theta grid must lie in (0, inf)");
        if (k > 0 && !(theta_grid[k] > theta_grid[k - 1]))
            throw InvalidArgument("theta grid must be increasing");
    }
    VarianceCurve curve{n, sigma2, {theta_grid.begin(), theta_grid.end()}, {}, {}};
    for (double th : theta_grid) {
        curve.esq_sum.push_back(expected_sq_sum(n, th));
        curve.variance.push_back(sigma2 * curve.esq_sum.back());
    }
    return curve;
}

std::vector<ReadingVerdict> arbitrate_bracket_readings(std::span<const int> ns,
                                                       std::span<const double> thetas,
                                                       std::size_t draws, RngState rng,
                                                       double z_limit, unsigned threads) {
    std::vector<ReadingVerdict> verdicts;
    for (auto reading : {BracketReading::Factorial, BracketReading::Plain}) {
        ReadingVerdict v{reading, true, 0.0, false};
        std::uint64_t cell = 0;
        for (int n : ns) {
            for (double th : thetas) {
                double printed;
                try {
                    printed = printed_bracket(n, th, reading);
                } catch (const DomainError&) {
                    v.defined = false;
                    break;
                }
                const auto mc = mc_expected_sq_sum(n, th, draws, rng.substream(cell++), threads);
                v.max_z_score = std::max(v.max_z_score, std::abs(printed - mc.mean) / mc.std_error);
            }
            if (!v.defined) break;
        }
        v.accepted = v.defined && v.max_z_score <= z_limit;
        verdicts.push_back(v);
    }
    return verdicts;
}

}  // namespace rwa
