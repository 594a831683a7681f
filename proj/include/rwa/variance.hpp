#pragma once

// Variance of the randomly weighted average over power-distribution spacings.
//
// V_1, ..., V_n are i.i.d. power(θ) on [0, 1] (density θ v^{θ-1}); the
// weights are the n + 1 spacings of V_(0) = 0 <= V_(1) <= ... <= V_(n) <= 1.
// With i.i.d. atoms of variance σ², Var(Σ W_i X_i) = σ² · E[Σ W_i²]; this
// module works with the dimensionless factor E[Σ W_i²]. θ = 1 is the
// uniform-spacings weighting.

#include <cstddef>
#include <span>
#include <vector>

#include "rwa/mc.hpp"
#include "rwa/rng.hpp"

namespace rwa {

// E[Σ W_i²] from the closed-form bracket
//   2nθ/(θ+2) - 2nθ/(nθ+1) + 1 - Σ_{i=1}^{n-1} T_i(θ),
// with the alternating inner sum of T_i summed exactly into a Beta function:
//   T_i = 2θ i/(iθ+1) · Π_{j=i+1}^{n} j/(j + 2/θ).
double expected_sq_sum(int n, double theta);

// How the double-sum denominator term (n-i-1-k) is read.
enum class BracketReading { Factorial, Plain };

// The bracket exactly as printed: an alternating double sum, evaluated in
// 100-digit arithmetic because it cancels catastrophically in double.
// The Plain reading divides by zero at k = n-i-1 and throws DomainError.
double printed_bracket(int n, double theta, BracketReading reading);

// E[Σ W_i²] = 2 ∫∫_{0<x<y<1} (1 - y^θ + x^θ)^n dy dx by nested adaptive
// quadrature: (x, y) fall in the same spacing iff no V_i lands between them.
double expected_sq_sum_quadrature(int n, double theta);

// d/dθ E[Σ W_i²] at θ = 1: [2n - 2(n+2) Σ_{i=2}^{n+1} 1/i] / [(n+1)(n+2)²].
double dvariance_dtheta_at1(int n);

// The n + 1 spacings of n sorted power(θ) draws.
std::vector<double> sample_power_spacings(int n, double theta, Rng& rng);

// Monte Carlo estimate of E[Σ W_i²] (draws >= 10^4).
MeanEstimate mc_expected_sq_sum(int n, double theta, std::size_t draws, RngState rng,
                                unsigned threads = 0);

struct VarianceCurve {
    int n;
    double sigma2;
    std::vector<double> theta;
    std::vector<double> esq_sum;   // E[Σ W_i²]
    std::vector<double> variance;  // sigma2 · esq_sum
};

VarianceCurve variance_curve(int n, std::span<const double> theta_grid, double sigma2);

// Outcome of checking one bracket reading against Monte Carlo.
struct ReadingVerdict {
    BracketReading reading;
    bool defined;         // false when the reading divides by zero
    double max_z_score;   // max |printed - mc| / se over the grid
    bool accepted;        // defined and every point within `z_limit` standard errors
};

// Evaluates both readings of the printed bracket over ns × thetas against
// mc_expected_sq_sum. Used to justify the reading expected_sq_sum implements.
std::vector<ReadingVerdict> arbitrate_bracket_readings(std::span<const int> ns,
                                                       std::span<const double> thetas,
                                                       std::size_t draws, RngState rng,
                                                       double z_limit = 3.0,
                                                       unsigned threads = 0);

}  // namespace rwa
