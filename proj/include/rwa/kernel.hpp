#pragma once

// Conditional law of the randomly weighted average given its atoms.
//
// weisberg_cdf evaluates
//     k(z | x) = Σ_{j : x_j <= z} f_j^{(m_j - 1)}(x_j; z) / (m_j - 1)!,
//     f_j(x; z) = (x - z)^{n* - 1} / Π_{i != j} (x - x_i)^{m_i},
// and kernel_apply the general form
//     k(g | x) = Σ_j (-1)^{m_j - 1} / (m_j - 1)! · d^{m_j - 1}/dx^{m_j - 1}
//                [ g(x) / Π_{i != j} (x_i - x)^{m_i} ] at x = x_j,
// both through truncated Taylor products (see series.hpp).

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rwa/atoms.hpp"
#include "rwa/dists.hpp"
#include "rwa/rng.hpp"

namespace rwa {

// Summands of the Weisberg sum may cancel; a result further than this outside
// [0, 1] is reported as a ConditioningError instead of being clamped.
inline constexpr double kKernelRangeSlack = 1e-7;

// P(Σ W_j x_j <= z) for W ~ Dirichlet(m). Right-continuous in z: 0 below the
// smallest atom, 1 at or above the largest.
double weisberg_cdf(const AtomConfig& cfg, double z);

// Taylor coefficients of g about a point, up to a requested order:
// coeffs(a, r) returns g(a), g'(a), g''(a)/2!, ..., g^{(r)}(a)/r!.
// Lower-order requests must return prefixes of higher-order ones.
template <typename T>
using SmoothFunction = std::function<std::vector<T>(double a, std::size_t r)>;

double kernel_apply(const AtomConfig& cfg, const SmoothFunction<double>& g);
std::complex<double> kernel_apply(const AtomConfig& cfg,
                                  const SmoothFunction<std::complex<double>>& g);

// g(x) = (z - x)^p · U(z - x), with U(0) = 1. With p = n* - 1 the kernel
// reproduces weisberg_cdf(cfg, z).
SmoothFunction<double> truncated_power(double z, int p);
// g(x) = 1 / (z - x); needs z off the atoms.
SmoothFunction<std::complex<double>> resolvent(std::complex<double> z);
// g(x) = Σ_k c_k x^k.
SmoothFunction<double> polynomial(std::vector<double> coeffs);

enum class MixtureMethod { Quadrature, MonteCarlo };

struct MixtureEstimate {
    double value;
    double std_error;  // 0 for quadrature
};

// Unconditional CDF F_S(z) = E[k(z | X_1, ..., X_n)].
//
// Quadrature: tensor Gauss–Legendre in the probability scale, atoms taken as
// marginal quantiles of the nodes; `budget` is the node count per axis
// (>= 8). Node vectors with near-coincident atoms are merged first.
// Monte Carlo: `budget` sampled atom vectors, standard error reported.
MixtureEstimate mixture_cdf(const WeightScheme& scheme, std::span<const Dist> marginals, double z,
                            MixtureMethod method, std::size_t budget, RngState rng = {},
                            unsigned threads = 0, double merge_tol = kDefaultMergeTolerance);

}  // namespace rwa
