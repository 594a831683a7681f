#include "rwa/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rwa/error.hpp"
#include "rwa/parallel.hpp"

namespace rwa {

namespace {
constexpr std::size_t kSampleBlock = 4096;
}

std::vector<double> sample_weights_dirichlet(const WeightScheme& scheme, Rng& rng) {
    const std::size_t n = scheme.size();
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double g = 0.0;
        for (int k = 0; k < scheme.multiplicity(j); ++k) g += rng.exponential();
        w[j] = g;
        total += g;
    }
    double head = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        w[j] /= total;
        head += w[j];
    }
    w[n - 1] = std::max(0.0, 1.0 - head);
    return w;
}

std::vector<double> sample_weights_orderstat(const WeightScheme& scheme, Rng& rng) {
    const int points = scheme.nstar() - 1;
    std::vector<double> u(static_cast<std::size_t>(points));
    for (auto& v : u) v = rng.uniform();
    std::sort(u.begin(), u.end());
    const auto cuts = scheme.cut_indices();
    std::vector<double> w;
    w.reserve(scheme.size());
    double prev = 0.0;
    double head = 0.0;
    for (int k : cuts) {
        const double cur = u[static_cast<std::size_t>(k - 1)];
        w.push_back(cur - prev);
        head += w.back();
        prev = cur;
    }
    w.push_back(std::max(0.0, 1.0 - head));
    return w;
}

std::vector<double> sample_rwa(const WeightScheme& scheme, std::span<const Dist> marginals,
                               std::size_t count, RngState rng, unsigned threads) {
    if (marginals.size() != scheme.size())
        throw InvalidArgument("marginal count " + std::to_string(marginals.size()) +
                              " does not match scheme size " + std::to_string(scheme.size()));
    std::vector<double> out(count);
    const std::size_t nblocks = (count + kSampleBlock - 1) / kSampleBlock;
    parallel_blocks(nblocks, threads, [&](std::size_t b) {
        Rng r(rng.substream(b));
        const std::size_t lo = b * kSampleBlock;
        const std::size_t hi = std::min(count, lo + kSampleBlock);
        std::vector<double> x(scheme.size());
        for (std::size_t i = lo; i < hi; ++i) {
            const auto w = sample_weights_dirichlet(scheme, r);
            double s = 0.0, xmin = INFINITY, xmax = -INFINITY;
            for (std::size_t j = 0; j < x.size(); ++j) {
                x[j] = marginals[j].sample(r);
                s += w[j] * x[j];
                xmin = std::min(xmin, x[j]);
                xmax = std::max(xmax, x[j]);
            }
            // A convex combination stays in the hull of its atoms.
            const double slack = 1e-12 * std::max(1.0, std::max(std::abs(xmin), std::abs(xmax)));
            if (std::isfinite(s) && (s < xmin - slack || s > xmax + slack))
                throw std::logic_error("randomly weighted average left the convex hull of its atoms");
            out[i] = std::clamp(s, xmin, xmax);
        }
    });
    return out;
}

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw InvalidArgument("empirical CDF needs at least one sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double Ecdf::left(double x) const {
    const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

namespace {

template <typename Right, typename Left>
double ks_against(const Ecdf& e, Right&& F, Left&& F_left) {
    const auto s = e.sorted();
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;
        const double below = static_cast<double>(i) / n;  // ECDF just left of s[i]
        const double at = static_cast<double>(j) / n;     // ECDF at s[i]
        d = std::max({d, std::abs(at - F(s[i])), std::abs(below - F_left(s[i]))});
        i = j;
    }
    return d;
}

}  // namespace

double ks_distance(const Ecdf& e, const Dist& F) {
    return ks_against(e, [&](double x) { return F.cdf(x); }, [&](double x) { return F.cdf_left(x); });
}

double ks_distance(const Ecdf& e, const std::function<double(double)>& F) {
    return ks_against(e, F, F);
}

double ks_distance(const Ecdf& a, const Ecdf& b) {
    const auto sa = a.sorted();
    const auto sb = b.sorted();
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() || j < sb.size()) {
        double x;
        if (j >= sb.size() || (i < sa.size() && sa[i] <= sb[j]))
            x = sa[i];
        else
            x = sb[j];
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

MeanEstimate mean_and_se(std::span<const double> xs) {
    if (xs.empty()) throw InvalidArgument("mean of an empty sample");
    double mean = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (double x : xs) {
        ++k;
        const double d = x - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (x - mean);
    }
    const double n = static_cast<double>(xs.size());
    const double var = xs.size() > 1 ? m2 / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

}  // namespace rwa
