#pragma once

// Empirical limit experiments for uniform-spacings weights (n - 1 uniform
// cut points, n weights): the maximum spacing vanishes, and the randomly
// weighted average of i.i.d. atoms with a finite mean converges in
// probability to that mean.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rwa/dists.hpp"
#include "rwa/rng.hpp"

namespace rwa {

inline constexpr std::size_t kMinReplicates = 200;

struct MaxSpacingSummary {
    int n;
    std::size_t replicates;
    double mean;
    double p50;
    double p95;
    std::vector<double> maxima;  // one per replicate, in replicate order
};

// Sorted-uniform construction: per replicate, n - 1 uniforms are sorted and
// the largest of the n spacings is recorded.
MaxSpacingSummary max_spacing_stats(int n, std::size_t replicates, RngState rng,
                                    unsigned threads = 0);

struct ConvergenceRow {
    int n;
    double prob_exceed;  // estimate of P(|S_n - mu| > eps)
    double std_error;
    double eps;
    double max_spacing_mean;
    double max_spacing_p95;
    std::size_t replicates;
    std::uint64_t seed;
    std::vector<double> max_weights;  // largest weight per replicate
};

struct ConvergenceTable {
    double mu;
    std::vector<ConvergenceRow> rows;
};

// For each n, `replicates` draws of S_n = Σ R_i X_i with Dirichlet(1, ..., 1)
// weights and i.i.d. X_i ~ marginal. Marginals without a finite mean (Cauchy)
// are rejected: the weak law needs E|X| < ∞.
ConvergenceTable convergence_experiment(const Dist& marginal, double mu, std::span<const int> n_grid,
                                        double eps, std::size_t replicates, RngState rng,
                                        unsigned threads = 0);

// Linear-interpolation (type 7) sample quantile.
double sample_quantile(std::vector<double> xs, double p);

}  // namespace rwa
