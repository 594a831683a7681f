#include "rwa/stieltjes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rwa/error.hpp"
#include "rwa/parallel.hpp"
#include "rwa/text.hpp"

namespace rwa {

namespace {

// w^{-m} for m >= 1 by repeated squaring.
cplx inverse_power(cplx w, int m) {
    cplx base = 1.0 / w;
    cplx out = 1.0;
    for (; m > 0; m >>= 1) {
        if (m & 1) out *= base;
        base *= base;
    }
    return out;
}

// (-1)^{m-1} (m-1)!
double derivative_prefactor(int m) {
    const double f = std::tgamma(static_cast<double>(m));
    return (m % 2 == 1) ? f : -f;
}

// (-1)^{m-1} / (m-1)!, the normalization the product identities use.
double identity_coefficient(int m) {
    const double f = 1.0 / std::tgamma(static_cast<double>(m));
    return (m % 2 == 1) ? f : -f;
}

void check_order(int m) {
    if (m < 1) throw InvalidArgument("transform order m must be >= 1");
}

std::string describe(cplx z) { return format_double(z.real()) + (z.imag() < 0 ? "" : "+") +
                                       format_double(z.imag()) + "i"; }

}  // namespace

EmpiricalLaw::EmpiricalLaw(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) throw InvalidArgument("empirical law needs at least one sample");
    const auto [lo, hi] = std::minmax_element(samples_.begin(), samples_.end());
    lo_ = *lo;
    hi_ = *hi;
}

double distance_to_support(const Support& s, cplx z) {
    const double x = z.real();
    double dx = 0.0;
    if (x < s.lo) dx = s.lo - x;
    if (x > s.hi) dx = x - s.hi;
    return std::hypot(dx, z.imag());
}

cplx transform_deriv(const Dist& F, cplx z, int m) {
    check_order(m);
    if (distance_to_support(F.support(), z) < kSupportGuard)
        throw DomainError("transform evaluated at z = " + describe(z) + " on or near the support of " +
                          F.spec());
    const double pre = derivative_prefactor(m);
    if (F.family() == Family::PointMass) return pre * inverse_power(z - F.params()[0], m);

    const auto r = quad::integrate<cplx>(
        [&](double u) { return inverse_power(z - F.quantile(u), m); }, 0.0, 1.0,
        {.abs_tol = 1e-14, .rel_tol = 1e-12, .max_intervals = 3000});
    if (std::abs(pre) * r.error > kTransformTargetAccuracy)
        throw AccuracyError("transform quadrature for " + F.spec() + " at z = " + describe(z) +
                                " did not reach the target accuracy",
                            pre * r.value, std::abs(pre) * r.error);
    return pre * r.value;
}

TransformValue transform_deriv(const EmpiricalLaw& F, cplx z, int m) {
    check_order(m);
    if (distance_to_support({F.lo(), F.hi()}, z) < kSupportGuard)
        throw DomainError("transform evaluated at z = " + describe(z) + " inside the sample range");
    const auto xs = F.samples();
    const double n = static_cast<double>(xs.size());
    // Two passes: mean, then spread, each accumulated with compensation.
    CompensatedSum re, im;
    for (double x : xs) {
        const cplx v = inverse_power(z - x, m);
        re.add(v.real());
        im.add(v.imag());
    }
    const cplx mean = cplx(re.value(), im.value()) / n;
    double ss = 0.0;
    for (double x : xs) ss += std::norm(inverse_power(z - x, m) - mean);
    const double se = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    const double pre = derivative_prefactor(m);
    return {z, m, pre * mean, std::abs(pre) * se};
}

TransformValue transform_deriv(const TransformSource& F, cplx z, int m) {
    if (const auto* d = std::get_if<Dist>(&F)) return {z, m, transform_deriv(*d, z, m), 0.0};
    return transform_deriv(std::get<EmpiricalLaw>(F), z, m);
}

cplx closed_form_transform(ClosedForm law, cplx z) {
    if (z.imag() == 0.0 && std::abs(z.real()) <= 1.0)
        throw DomainError("closed-form transform evaluated on the cut [-1, 1] at z = " + describe(z));
    const cplx root = std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
    switch (law) {
    case ClosedForm::Arcsin:
        return 1.0 / root;
    case ClosedForm::Semicircle:
        // 2(z - root) = 2 / (z + root), the second form avoids cancellation for large |z|.
        return 2.0 / (z + root);
    }
    throw InvalidArgument("unknown closed form");
}

double ResidualReport::max_rel_residual() const {
    double r = 0.0;
    for (const auto& p : points) r = std::max(r, p.rel_res);
    return r;
}

bool ResidualReport::within_standard_errors(double k) const {
    return std::all_of(points.begin(), points.end(),
                       [k](const ResidualPoint& p) { return p.abs_res <= k * p.std_error; });
}

nlohmann::json ResidualReport::to_json() const {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points) {
        pts.push_back({{"z_re", p.z.real()},
                       {"z_im", p.z.imag()},
                       {"lhs_re", p.lhs.real()},
                       {"lhs_im", p.lhs.imag()},
                       {"rhs_re", p.rhs.real()},
                       {"rhs_im", p.rhs.imag()},
                       {"abs_res", p.abs_res},
                       {"rel_res", p.rel_res},
                       {"std_err", p.std_error}});
    }
    return {{"identity", identity}, {"points", pts}};
}

ResidualPoint make_residual(cplx z, cplx lhs, cplx rhs, double std_error) {
    const double abs_res = std::abs(lhs - rhs);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return {z, lhs, rhs, abs_res, abs_res / scale, std_error};
}

ResidualReport theorem1_residual(const WeightScheme& scheme, std::span<const Dist> marginals,
                                 const TransformSource& mixture, std::span<const cplx> z_points) {
    if (marginals.size() != scheme.size())
        throw InvalidArgument("marginal count does not match scheme size");
    const int nstar = scheme.nstar();
    ResidualReport report{"theorem1", {}};
    for (const cplx z : z_points) {
        const auto mix = transform_deriv(mixture, z, nstar);
        const double lhs_scale = identity_coefficient(nstar);
        const cplx lhs = lhs_scale * mix.value;
        cplx rhs = 1.0;
        for (std::size_t i = 0; i < scheme.size(); ++i) {
            const int mi = scheme.multiplicity(i);
            rhs *= identity_coefficient(mi) * transform_deriv(marginals[i], z, mi);
        }
        report.points.push_back(make_residual(z, lhs, rhs, std::abs(lhs_scale) * mix.std_error));
    }
    return report;
}

ResidualReport remark1_residual(int n1, int n2, const Dist& fx1, const Dist& fx2,
                                const TransformSource& fz, std::span<const cplx> z_points) {
    if (n1 < 1 || n2 < 1) throw InvalidArgument("remark 1 orders must be >= 1");
    const double beta = std::exp(std::lgamma(n1) + std::lgamma(n2) - std::lgamma(n1 + n2));
    ResidualReport report{"remark1", {}};
    for (const cplx z : z_points) {
        // S^{(k)} is transform_deriv with m = k + 1.
        const auto mix = transform_deriv(fz, z, n1 + n2);
        const cplx lhs = beta * mix.value;
        const cplx rhs = -transform_deriv(fx1, z, n1) * transform_deriv(fx2, z, n2);
        report.points.push_back(make_residual(z, lhs, rhs, beta * mix.std_error));
    }
    return report;
}

ResidualReport eq31_residual(const Dist& fx, const TransformSource& fz,
                             std::span<const cplx> z_points) {
    ResidualReport report{"eq31", {}};
    for (const cplx z : z_points) {
        const auto mix = transform_deriv(fz, z, 2);
        const cplx s = transform_deriv(fx, z, 1);
        report.points.push_back(make_residual(z, -mix.value, s * s, mix.std_error));
    }
    return report;
}

}  // namespace rwa
