#pragma once

// Stieltjes transforms S(H, z) = ∫ (z - x)^{-1} H(dx) and their derivatives,
// plus numerical residual checks of the product identities linking the
// transform of a randomly weighted average to those of its marginals.

#include <complex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "rwa/atoms.hpp"
#include "rwa/dists.hpp"
#include "rwa/quadrature.hpp"

namespace rwa {

using cplx = std::complex<double>;

// Closer than this to a support, transforms are refused.
inline constexpr double kSupportGuard = 1e-6;
// Absolute accuracy demanded from the quadrature behind transform_deriv.
inline constexpr double kTransformTargetAccuracy = 1e-10;

// A sample standing in for a law (e.g. Monte Carlo draws of a mixture).
class EmpiricalLaw {
public:
    explicit EmpiricalLaw(std::vector<double> samples);
    std::span<const double> samples() const noexcept { return samples_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    std::vector<double> samples_;
    double lo_, hi_;
};

using TransformSource = std::variant<Dist, EmpiricalLaw>;

struct TransformValue {
    cplx z;
    int order;   // m
    cplx value;  // S^{(m-1)}(F, z)
    double std_error = 0.0;
};

// Distance from z to the support interval (0 when z lies on it).
double distance_to_support(const Support& s, cplx z);

// S^{(m-1)}(F, z) = (-1)^{m-1} (m-1)! ∫ (z - x)^{-m} dF(x), integrated in the
// probability scale x = F^{-1}(u). Throws DomainError when z is within
// kSupportGuard of the support and AccuracyError when the quadrature misses
// kTransformTargetAccuracy.
cplx transform_deriv(const Dist& F, cplx z, int m);
// Sample average of the same integrand, with its standard error.
TransformValue transform_deriv(const EmpiricalLaw& F, cplx z, int m);
TransformValue transform_deriv(const TransformSource& F, cplx z, int m);

enum class ClosedForm { Arcsin, Semicircle };

// arcsin: (z² - 1)^{-1/2}; semicircle: 2(z - (z² - 1)^{1/2}); the root is
// √(z - 1)·√(z + 1) with principal branches, so z·S(z) -> 1 at infinity.
cplx closed_form_transform(ClosedForm law, cplx z);

struct ResidualPoint {
    cplx z;
    cplx lhs;
    cplx rhs;
    double abs_res;
    double rel_res;
    double std_error = 0.0;  // of lhs - rhs; nonzero only for empirical inputs
};

struct ResidualReport {
    std::string identity;
    std::vector<ResidualPoint> points;

    double max_rel_residual() const;
    // Every point has abs_res <= k · std_error (analytic points need abs_res == 0).
    bool within_standard_errors(double k) const;

    // {identity, points: [{z_re, z_im, lhs_re, lhs_im, rhs_re, rhs_im, abs_res, rel_res, std_err}]}
    nlohmann::json to_json() const;
};

ResidualPoint make_residual(cplx z, cplx lhs, cplx rhs, double std_error = 0.0);

// [(-1)^{n*-1}/(n*-1)!] S^{(n*-1)}(F, z) against Π_i [(-1)^{m_i-1}/(m_i-1)!] S^{(m_i-1)}(F_i, z).
ResidualReport theorem1_residual(const WeightScheme& scheme, std::span<const Dist> marginals,
                                 const TransformSource& mixture, std::span<const cplx> z_points);

// B(n1, n2) S^{(n1+n2-1)}(F_Z, z) against -S^{(n1-1)}(F_1, z) S^{(n2-1)}(F_2, z),
// with B the Euler Beta function.
ResidualReport remark1_residual(int n1, int n2, const Dist& fx1, const Dist& fx2,
                                const TransformSource& fz, std::span<const cplx> z_points);

// -S'(F_Z, z) against S(F_X, z)² (two i.i.d. atoms, m = (1, 1)).
ResidualReport eq31_residual(const Dist& fx, const TransformSource& fz,
                             std::span<const cplx> z_points);

}  // namespace rwa
