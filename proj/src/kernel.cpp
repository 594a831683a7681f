#include "rwa/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "rwa/error.hpp"
#include "rwa/mc.hpp"
#include "rwa/parallel.hpp"
#include "rwa/quadrature.hpp"
#include "rwa/series.hpp"
#include "rwa/text.hpp"

namespace rwa {

double weisberg_cdf(const AtomConfig& cfg, double z) {
    if (std::isnan(z)) throw InvalidArgument("kernel evaluated at NaN");
    if (z < cfg.min_atom()) return 0.0;
    if (z >= cfg.max_atom()) return 1.0;

    const std::size_t n = cfg.size();
    const int nstar = cfg.nstar();
    std::vector<LinearFactor> factors;
    factors.reserve(n);
    CompensatedSum sum;
    try {
        for (std::size_t j = 0; j < n; ++j) {
            const double xj = cfg.atom(j);
            if (xj > z) continue;
            factors.clear();
            factors.push_back({xj - z, nstar - 1});
            for (std::size_t i = 0; i < n; ++i)
                if (i != j) factors.push_back({xj - cfg.atom(i), -cfg.scheme().multiplicity(i)});
            const auto r = static_cast<std::size_t>(cfg.scheme().multiplicity(j) - 1);
            // Coefficient of t^r is the r-th derivative over r!.
            sum.add(taylor_coefficient_of_factor_product(factors, r));
        }
    } catch (const DomainError& e) {
        throw ConditioningError(std::string("kernel factors too close to a pole: ") + e.what());
    }
    const double v = sum.value();
    if (!(v >= -kKernelRangeSlack && v <= 1.0 + kKernelRangeSlack))
        throw ConditioningError("kernel value " + format_double(v) + " outside [0, 1] for atoms " +
                                cfg.to_string() + " at z = " + format_double(z));
    return std::clamp(v, 0.0, 1.0);
}

namespace {

template <typename T>
T kernel_apply_impl(const AtomConfig& cfg, const SmoothFunction<T>& g) {
    const std::size_t n = cfg.size();
    T total{};
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = cfg.atom(j);
        const auto r = static_cast<std::size_t>(cfg.scheme().multiplicity(j) - 1);
        auto coeffs = g(xj, r);
        if (coeffs.size() < r + 1)
            throw InvalidArgument("smooth function supplied " + std::to_string(coeffs.size()) +
                                  " Taylor coefficients, kernel needs " + std::to_string(r + 1));
        coeffs.resize(r + 1);
        Series<T> product(std::move(coeffs));
        // Π_{i != j} (x_i - x_j - t)^{-m_i} = (-1)^{n* - m_j} Π (x_j - x_i + t)^{-m_i}
        int sign_exp = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == j) continue;
            const int mi = cfg.scheme().multiplicity(i);
            try {
                product *= series_of_factor<T>({xj - cfg.atom(i), -mi}, r);
            } catch (const DomainError& e) {
                throw ConditioningError(std::string("kernel factors too close to a pole: ") +
                                        e.what());
            }
            sign_exp += mi;
        }
        // (-1)^{m_j - 1} from the kernel, (-1)^{Σ m_i} from the factor flip.
        const bool negative = ((static_cast<int>(r) + sign_exp) % 2) != 0;
        total += negative ? -product[r] : product[r];
    }
    return total;
}

}  // namespace

double kernel_apply(const AtomConfig& cfg, const SmoothFunction<double>& g) {
    return kernel_apply_impl<double>(cfg, g);
}

std::complex<double> kernel_apply(const AtomConfig& cfg,
                                  const SmoothFunction<std::complex<double>>& g) {
    return kernel_apply_impl<std::complex<double>>(cfg, g);
}

SmoothFunction<double> truncated_power(double z, int p) {
    if (p < 0) throw InvalidArgument("truncated power needs p >= 0");
    return [z, p](double a, std::size_t r) {
        std::vector<double> c(r + 1, 0.0);
        if (a > z) return c;
        // (z - a - t)^p = (-1)^p (a - z + t)^p
        const auto s = series_of_factor<double>({a - z, p}, r);
        const double flip = (p % 2) ? -1.0 : 1.0;
        for (std::size_t k = 0; k <= r; ++k) c[k] = flip * s[k];
        return c;
    };
}

SmoothFunction<std::complex<double>> resolvent(std::complex<double> z) {
    return [z](double a, std::size_t r) {
        // 1/(z - a - t) = Σ_k t^k / (z - a)^{k+1}
        const std::complex<double> w = z - a;
        if (std::abs(w) < kPoleGuard) throw DomainError("resolvent evaluated at its pole");
        std::vector<std::complex<double>> c(r + 1);
        std::complex<double> p = 1.0 / w;
        for (std::size_t k = 0; k <= r; ++k) {
            c[k] = p;
            p /= w;
        }
        return c;
    };
}

SmoothFunction<double> polynomial(std::vector<double> coeffs) {
    return [coeffs = std::move(coeffs)](double a, std::size_t r) {
        // Taylor shift: coefficient k about a is Σ_j C(j, k) c_j a^{j-k}.
        std::vector<double> out(r + 1, 0.0);
        for (std::size_t k = 0; k <= r && k < coeffs.size(); ++k) {
            double binom = 1.0;  // C(j, k) starting at j = k
            double apow = 1.0;   // a^{j-k}
            for (std::size_t j = k; j < coeffs.size(); ++j) {
                out[k] += coeffs[j] * binom * apow;
                binom = binom * static_cast<double>(j + 1) / static_cast<double>(j + 1 - k);
                apow *= a;
            }
        }
        return out;
    };
}

namespace {

constexpr std::size_t kMaxQuadratureEvaluations = 50'000'000;
constexpr std::size_t kMixtureBlock = 2048;

double kernel_at_nodes(const WeightScheme& scheme, std::span<const double> x, double z,
                       double merge_tol) {
    return weisberg_cdf(normalize(x, scheme, merge_tol), z);
}

}  // namespace

MixtureEstimate mixture_cdf(const WeightScheme& scheme, std::span<const Dist> marginals, double z,
                            MixtureMethod method, std::size_t budget, RngState rng,
                            unsigned threads, double merge_tol) {
    const std::size_t n = scheme.size();
    if (marginals.size() != n)
        throw InvalidArgument("marginal count " + std::to_string(marginals.size()) +
                              " does not match scheme size " + std::to_string(n));

    if (method == MixtureMethod::Quadrature) {
        if (budget < 8) throw InvalidArgument("quadrature needs at least 8 nodes per axis");
        double total_evals = std::pow(static_cast<double>(budget), static_cast<double>(n));
        if (total_evals > static_cast<double>(kMaxQuadratureEvaluations))
            throw InvalidArgument("quadrature grid of " + format_double(total_evals) +
                                  " points is too large; lower the budget or use montecarlo");
        for (const auto& d : marginals)
            if (!d.support().bounded())
                throw InvalidArgument("quadrature mixture needs compactly supported marginals");
        const auto rule = quad::gauss_legendre(budget);
        std::vector<std::vector<double>> atoms(n, std::vector<double>(budget));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < budget; ++k) atoms[j][k] = marginals[j].quantile(rule.nodes[k]);

        // Blocks over the flattened grid index; outer axis varies slowest.
        const auto total = static_cast<std::size_t>(total_evals);
        const std::size_t nblocks = (total + kMixtureBlock - 1) / kMixtureBlock;
        std::vector<double> partial(nblocks, 0.0);
        parallel_blocks(nblocks, threads, [&](std::size_t b) {
            CompensatedSum acc;
            std::vector<double> x(n);
            const std::size_t lo = b * kMixtureBlock;
            const std::size_t hi = std::min(total, lo + kMixtureBlock);
            for (std::size_t flat = lo; flat < hi; ++flat) {
                std::size_t rem = flat;
                double w = 1.0;
                for (std::size_t j = n; j-- > 0;) {
                    const std::size_t k = rem % budget;
                    rem /= budget;
                    x[j] = atoms[j][k];
                    w *= rule.weights[k];
                }
                acc.add(w * kernel_at_nodes(scheme, x, z, merge_tol));
            }
            partial[b] = acc.value();
        });
        CompensatedSum acc;
        for (double p : partial) acc.add(p);
        return {std::clamp(acc.value(), 0.0, 1.0), 0.0};
    }

    if (budget < 2) throw InvalidArgument("Monte Carlo mixture needs at least 2 samples");
    const std::size_t nblocks = (budget + kMixtureBlock - 1) / kMixtureBlock;
    std::vector<double> values(budget);
    parallel_blocks(nblocks, threads, [&](std::size_t b) {
        Rng r(rng.substream(b));
        std::vector<double> x(n);
        const std::size_t lo = b * kMixtureBlock;
        const std::size_t hi = std::min(budget, lo + kMixtureBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = 0; j < n; ++j) x[j] = marginals[j].sample(r);
            values[i] = kernel_at_nodes(scheme, x, z, merge_tol);
        }
    });
    const auto est = mean_and_se(values);
    return {est.mean, est.std_error};
}

}  // namespace rwa
