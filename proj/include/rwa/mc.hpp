#pragma once

// Random weights, randomly weighted average samples, empirical CDFs and
// Kolmogorov–Smirnov distances. This is the oracle every analytic component
// is checked against.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rwa/atoms.hpp"
#include "rwa/dists.hpp"
#include "rwa/rng.hpp"

namespace rwa {

// Dirichlet(m_1, ..., m_n) weights via normalized Gamma(m_j) variates; a
// Gamma with integer shape m is drawn as a sum of m exponentials. The last
// weight is 1 minus the others, so the left-to-right sum is exactly 1.
std::vector<double> sample_weights_dirichlet(const WeightScheme& scheme, Rng& rng);

// Literal construction: n* - 1 sorted uniforms, increments at the cut
// indices. Kept as the witness for the Dirichlet path.
std::vector<double> sample_weights_orderstat(const WeightScheme& scheme, Rng& rng);

// `count` independent draws of Σ_j W_j X_j, weights from the Dirichlet path,
// X_j ~ marginals[j] independent. Work is split into fixed blocks with their
// own substreams, so the output does not depend on `threads` (0 = default).
std::vector<double> sample_rwa(const WeightScheme& scheme, std::span<const Dist> marginals,
                               std::size_t count, RngState rng, unsigned threads = 0);

// Right-continuous empirical CDF.
class Ecdf {
public:
    explicit Ecdf(std::vector<double> samples);

    double operator()(double x) const;
    // Fraction of samples strictly below x.
    double left(double x) const;
    std::size_t size() const noexcept { return sorted_.size(); }
    std::span<const double> sorted() const noexcept { return sorted_; }

private:
    std::vector<double> sorted_;
};

// sup_x |ECDF(x) - F(x)|, checking both sides of every jump (F(x-) through
// cdf_left, so discontinuous F are handled).
double ks_distance(const Ecdf& e, const Dist& F);
// Same, for any right-continuous CDF given as a callable; F is assumed
// continuous at the sample points.
double ks_distance(const Ecdf& e, const std::function<double(double)>& F);
// Two-sample sup distance.
double ks_distance(const Ecdf& a, const Ecdf& b);

struct MeanEstimate {
    double mean;
    double std_error;
};

MeanEstimate mean_and_se(std::span<const double> xs);

}  // namespace rwa
