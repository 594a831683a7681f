#pragma once

// Catalog of the marginal and limit laws used throughout: arcsin, semicircle,
// power semicircle, power(θ), and the plain uniform / point-mass / Cauchy /
// exponential extras. A Dist is an immutable handle; copies share state.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rwa/rng.hpp"

namespace rwa {

enum class Family { Arcsin, Semicircle, PowerSemicircle, Power, Uniform, PointMass, Cauchy, Exponential };

struct Support {
    double lo;
    double hi;
    // Density unbounded at the endpoint.
    bool lo_singular = false;
    bool hi_singular = false;

    bool whole_line() const noexcept;
    bool bounded() const noexcept;
};

// Density normalizer · (1 - z²)^exponent on [-1, 1].
struct PowerSemicircle {
    double exponent;
    double normalizer;
};

// Normalizer computed by quadrature and cross-checked against the Beta
// closed form Γ(p + 3/2) / (√π Γ(p + 1)). Throws InvalidArgument for p <= -1.
PowerSemicircle power_semicircle_params(double p);

namespace detail {
class DistModel;
}

class Dist {
public:
    explicit Dist(std::shared_ptr<const detail::DistModel> impl);

    double pdf(double x) const;
    double cdf(double x) const;
    // P(X < x); differs from cdf only at atoms.
    double cdf_left(double x) const;
    // Inverse CDF on (0, 1).
    double quantile(double u) const;
    double sample(Rng& rng) const;

    Family family() const;
    const Support& support() const;
    bool continuous() const;
    // Empty when E|X| is infinite.
    std::optional<double> mean() const;
    // CLI syntax, e.g. "psc:1.5"; parse_dist(spec()) reproduces the law.
    std::string spec() const;
    // Family parameters in the order the CLI syntax lists them.
    const std::vector<double>& params() const;

private:
    std::shared_ptr<const detail::DistModel> impl_;
};

Dist arcsin();
Dist semicircle();
Dist power_semicircle(double p);
Dist power_dist(double theta);
Dist uniform(double a, double b);
Dist point_mass(double x);
Dist cauchy(double location, double scale);
Dist exponential(double rate);

// `arcsin`, `semicircle`, `psc:p`, `uniform:a,b`, `power:theta`,
// `cauchy:x0,g`, `point:x`, `exp:rate`. Throws ParseError.
Dist parse_dist(std::string_view text);

// Comma- or semicolon-separated list. A purely numeric comma token continues
// the parameter list of the preceding entry, so "uniform:-1,1,arcsin" is two
// entries.
std::vector<Dist> parse_dist_list(std::string_view text);

}  // namespace rwa
