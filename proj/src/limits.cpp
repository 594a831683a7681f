#include "rwa/limits.hpp"

#include <algorithm>
#include <cmath>

#include "rwa/error.hpp"
#include "rwa/mc.hpp"
#include "rwa/parallel.hpp"

namespace rwa {

namespace {

constexpr std::size_t kReplicateBlock = 64;

void check_replicates(std::size_t replicates) {
    if (replicates < kMinReplicates)
        throw InvalidArgument("need at least " + std::to_string(kMinReplicates) + " replicates, got " +
                              std::to_string(replicates));
}

}  // namespace

double sample_quantile(std::vector<double> xs, double p) {
    if (xs.empty()) throw InvalidArgument("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
    std::sort(xs.begin(), xs.end());
    const double h = p * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

MaxSpacingSummary max_spacing_stats(int n, std::size_t replicates, RngState rng, unsigned threads) {
    if (n < 2) throw InvalidArgument("max spacing needs n >= 2");
    check_replicates(replicates);
    std::vector<double> maxima(replicates);
    const std::size_t nblocks = (replicates + kReplicateBlock - 1) / kReplicateBlock;
    parallel_blocks(nblocks, threads, [&](std::size_t b) {
        Rng r(rng.substream(b));
        std::vector<double> u(static_cast<std::size_t>(n - 1));
        const std::size_t lo = b * kReplicateBlock;
        const std::size_t hi = std::min(replicates, lo + kReplicateBlock);
        for (std::size_t k = lo; k < hi; ++k) {
            for (auto& v : u) v = r.uniform();
            std::sort(u.begin(), u.end());
            double prev = 0.0, best = 0.0;
            for (double v : u) {
                best = std::max(best, v - prev);
                prev = v;
            }
            maxima[k] = std::max(best, 1.0 - prev);
        }
    });
    MaxSpacingSummary s{n, replicates, mean_and_se(maxima).mean, sample_quantile(maxima, 0.5),
                        sample_quantile(maxima, 0.95), std::move(maxima)};
    return s;
}

ConvergenceTable convergence_experiment(const Dist& marginal, double mu, std::span<const int> n_grid,
                                        double eps, std::size_t replicates, RngState rng,
                                        unsigned threads) {
    if (!marginal.mean())
        throw InvalidArgument("marginal " + marginal.spec() +
                              " has no finite mean; the weak law needs E|X| < infinity");
    if (!(eps > 0.0)) throw InvalidArgument("eps must be > 0");
    check_replicates(replicates);

    ConvergenceTable table{mu, {}};
    std::uint64_t cell = 0;
    for (int n : n_grid) {
        if (n < 2) throw InvalidArgument("n grid entries must be >= 2");
        const auto scheme = WeightScheme::uniform_spacings(n);
        const RngState row_rng = rng.substream(cell++);
        std::vector<double> exceed(replicates), max_w(replicates);
        const std::size_t nblocks = (replicates + kReplicateBlock - 1) / kReplicateBlock;
        parallel_blocks(nblocks, threads, [&](std::size_t b) {
            Rng r(row_rng.substream(b));
            const std::size_t lo = b * kReplicateBlock;
            const std::size_t hi = std::min(replicates, lo + kReplicateBlock);
            for (std::size_t k = lo; k < hi; ++k) {
                const auto w = sample_weights_dirichlet(scheme, r);
                CompensatedSum s;
                double wmax = 0.0;
                for (double wi : w) {
                    s.add(wi * marginal.sample(r));
                    wmax = std::max(wmax, wi);
                }
                exceed[k] = std::abs(s.value() - mu) > eps ? 1.0 : 0.0;
                max_w[k] = wmax;
            }
        });
        const auto p = mean_and_se(exceed);
        ConvergenceRow row{n,
                           p.mean,
                           p.std_error,
                           eps,
                           mean_and_se(max_w).mean,
                           sample_quantile(max_w, 0.95),
                           replicates,
                           rng.seed,
                           std::move(max_w)};
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace rwa
