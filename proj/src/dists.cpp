#include "rwa/dists.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "rwa/error.hpp"
#include "rwa/quadrature.hpp"
#include "rwa/text.hpp"

namespace rwa {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

void check_probability(double u) {
    if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("quantile level must lie in (0, 1)");
}
}  // namespace

bool Support::whole_line() const noexcept { return lo == -kInf && hi == kInf; }
bool Support::bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }

namespace detail {

class DistModel {
public:
    DistModel(Family family, Support support, std::vector<double> params)
        : family_(family), support_(support), params_(std::move(params)) {}
    virtual ~DistModel() = default;

    virtual double pdf(double x) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double cdf_left(double x) const { return cdf(x); }
    virtual double quantile(double u) const = 0;
    virtual double sample(Rng& rng) const { return quantile(rng.uniform()); }
    virtual std::optional<double> mean() const = 0;
    virtual bool continuous() const { return true; }
    virtual std::string spec() const = 0;

    Family family() const { return family_; }
    const Support& support() const { return support_; }
    const std::vector<double>& params() const { return params_; }

private:
    Family family_;
    Support support_;
    std::vector<double> params_;
};

}  // namespace detail

namespace {

using detail::DistModel;

class ArcsinModel final : public DistModel {
public:
    ArcsinModel() : DistModel(Family::Arcsin, {-1.0, 1.0, true, true}, {}) {}
    double pdf(double x) const override {
        return (x > -1.0 && x < 1.0) ? 1.0 / (kPi * std::sqrt((1.0 - x) * (1.0 + x))) : 0.0;
    }
    double cdf(double x) const override {
        if (x <= -1.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return 0.5 + std::asin(x) / kPi;
    }
    double quantile(double u) const override {
        check_probability(u);
        return std::sin(kPi * (u - 0.5));
    }
    std::optional<double> mean() const override { return 0.0; }
    std::string spec() const override { return "arcsin"; }
};

class SemicircleModel final : public DistModel {
public:
    SemicircleModel() : DistModel(Family::Semicircle, {-1.0, 1.0}, {}) {}
    double pdf(double x) const override {
        return (x >= -1.0 && x <= 1.0) ? 2.0 / kPi * std::sqrt((1.0 - x) * (1.0 + x)) : 0.0;
    }
    double cdf(double x) const override {
        if (x <= -1.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return 0.5 + (x * std::sqrt((1.0 - x) * (1.0 + x)) + std::asin(x)) / kPi;
    }
    double quantile(double u) const override {
        check_probability(u);
        return 2.0 * boost::math::ibeta_inv(1.5, 1.5, u) - 1.0;
    }
    // Rejection from the uniform envelope on [-1, 1] × [0, 1].
    double sample(Rng& rng) const override {
        for (;;) {
            const double x = 2.0 * rng.uniform() - 1.0;
            const double y = rng.uniform();
            if (y * y <= (1.0 - x) * (1.0 + x)) return x;
        }
    }
    std::optional<double> mean() const override { return 0.0; }
    std::string spec() const override { return "semicircle"; }
};

class PowerSemicircleModel final : public DistModel {
public:
    explicit PowerSemicircleModel(PowerSemicircle ps)
        : DistModel(Family::PowerSemicircle, {-1.0, 1.0, ps.exponent < 0.0, ps.exponent < 0.0},
                    {ps.exponent}),
          ps_(ps) {}
    double pdf(double x) const override {
        if (!(x > -1.0 && x < 1.0)) {
            if ((x == -1.0 || x == 1.0) && ps_.exponent > 0.0) return 0.0;
            if ((x == -1.0 || x == 1.0) && ps_.exponent == 0.0) return ps_.normalizer;
            return (x == -1.0 || x == 1.0) ? kInf : 0.0;
        }
        return ps_.normalizer * std::pow((1.0 - x) * (1.0 + x), ps_.exponent);
    }
    double cdf(double x) const override {
        if (x <= -1.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const double a = ps_.exponent + 1.0;
        return boost::math::ibeta(a, a, 0.5 * (1.0 + x));
    }
    double quantile(double u) const override {
        check_probability(u);
        const double a = ps_.exponent + 1.0;
        return 2.0 * boost::math::ibeta_inv(a, a, u) - 1.0;
    }
    // 2·B - 1 with B ~ Beta(p + 1, p + 1) as a ratio of Gamma variates.
    double sample(Rng& rng) const override {
        const double a = ps_.exponent + 1.0;
        const double g1 = rng.gamma(a);
        const double g2 = rng.gamma(a);
        return (g1 - g2) / (g1 + g2);
    }
    std::optional<double> mean() const override { return 0.0; }
    std::string spec() const override { return "psc:" + format_double(ps_.exponent); }

private:
    PowerSemicircle ps_;
};

class PowerModel final : public DistModel {
public:
    explicit PowerModel(double theta)
        : DistModel(Family::Power, {0.0, 1.0, theta < 1.0, false}, {theta}), theta_(theta) {}
    double pdf(double v) const override {
        if (v < 0.0 || v > 1.0) return 0.0;
        if (v == 0.0) return theta_ < 1.0 ? kInf : (theta_ == 1.0 ? 1.0 : 0.0);
        return theta_ * std::pow(v, theta_ - 1.0);
    }
    double cdf(double v) const override {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) return 1.0;
        return std::pow(v, theta_);
    }
    double quantile(double u) const override {
        check_probability(u);
        return std::pow(u, 1.0 / theta_);
    }
    std::optional<double> mean() const override { return theta_ / (theta_ + 1.0); }
    std::string spec() const override { return "power:" + format_double(theta_); }

private:
    double theta_;
};

class UniformModel final : public DistModel {
public:
    UniformModel(double a, double b) : DistModel(Family::Uniform, {a, b}, {a, b}), a_(a), b_(b) {}
    double pdf(double x) const override { return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0; }
    double cdf(double x) const override {
        if (x <= a_) return 0.0;
        if (x >= b_) return 1.0;
        return (x - a_) / (b_ - a_);
    }
    double quantile(double u) const override {
        check_probability(u);
        return a_ + (b_ - a_) * u;
    }
    std::optional<double> mean() const override { return 0.5 * (a_ + b_); }
    std::string spec() const override { return "uniform:" + format_double(a_) + "," + format_double(b_); }

private:
    double a_, b_;
};

class PointMassModel final : public DistModel {
public:
    explicit PointMassModel(double x) : DistModel(Family::PointMass, {x, x}, {x}), x_(x) {}
    double pdf(double x) const override { return x == x_ ? kInf : 0.0; }
    double cdf(double x) const override { return x >= x_ ? 1.0 : 0.0; }
    double cdf_left(double x) const override { return x > x_ ? 1.0 : 0.0; }
    double quantile(double u) const override {
        check_probability(u);
        return x_;
    }
    double sample(Rng&) const override { return x_; }
    std::optional<double> mean() const override { return x_; }
    bool continuous() const override { return false; }
    std::string spec() const override { return "point:" + format_double(x_); }

private:
    double x_;
};

class CauchyModel final : public DistModel {
public:
    CauchyModel(double x0, double g)
        : DistModel(Family::Cauchy, {-kInf, kInf}, {x0, g}), x0_(x0), g_(g) {}
    double pdf(double x) const override {
        const double t = (x - x0_) / g_;
        return 1.0 / (kPi * g_ * (1.0 + t * t));
    }
    double cdf(double x) const override { return 0.5 + std::atan((x - x0_) / g_) / kPi; }
    double quantile(double u) const override {
        check_probability(u);
        return x0_ + g_ * std::tan(kPi * (u - 0.5));
    }
    std::optional<double> mean() const override { return std::nullopt; }
    std::string spec() const override { return "cauchy:" + format_double(x0_) + "," + format_double(g_); }

private:
    double x0_, g_;
};

class ExponentialModel final : public DistModel {
public:
    explicit ExponentialModel(double rate)
        : DistModel(Family::Exponential, {0.0, kInf}, {rate}), rate_(rate) {}
    double pdf(double x) const override { return x < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x); }
    double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x); }
    double quantile(double u) const override {
        check_probability(u);
        return -std::log1p(-u) / rate_;
    }
    double sample(Rng& rng) const override { return rng.exponential() / rate_; }
    std::optional<double> mean() const override { return 1.0 / rate_; }
    std::string spec() const override { return "exp:" + format_double(rate_); }

private:
    double rate_;
};

}  // namespace

Dist::Dist(std::shared_ptr<const detail::DistModel> impl) : impl_(std::move(impl)) {}

double Dist::pdf(double x) const { return impl_->pdf(x); }
double Dist::cdf(double x) const { return impl_->cdf(x); }
double Dist::cdf_left(double x) const { return impl_->cdf_left(x); }
double Dist::quantile(double u) const { return impl_->quantile(u); }
double Dist::sample(Rng& rng) const { return impl_->sample(rng); }
Family Dist::family() const { return impl_->family(); }
const Support& Dist::support() const { return impl_->support(); }
bool Dist::continuous() const { return impl_->continuous(); }
std::optional<double> Dist::mean() const { return impl_->mean(); }
std::string Dist::spec() const { return impl_->spec(); }
const std::vector<double>& Dist::params() const { return impl_->params(); }

PowerSemicircle power_semicircle_params(double p) {
    if (!(p > -1.0) || !std::isfinite(p))
        throw InvalidArgument("power semicircle exponent must be > -1, got " + format_double(p));
    // ∫_{-1}^{1} (1 - z²)^p dz = (2 / (p + 1)) ∫_0^1 (2 - v^{1/(p+1)})^p dv after
    // 1 - z = v^{1/(p+1)} on each half, which removes the endpoint singularity.
    const double s = 1.0 / (p + 1.0);
    const auto r = quad::integrate<double>(
        [&](double v) { return std::pow(2.0 - std::pow(v, s), p); }, 0.0, 1.0,
        {.abs_tol = 1e-15, .rel_tol = 1e-14, .max_intervals = 2000});
    const double mass = 2.0 * s * r.value;
    const double closed = std::exp(std::lgamma(p + 1.5) - std::lgamma(p + 1.0)) / std::sqrt(kPi);
    const double normalizer = 1.0 / mass;
    if (!r.converged || std::abs(normalizer - closed) > 1e-10 * closed)
        throw AccuracyError("power semicircle normalizer disagrees with Beta closed form",
                            normalizer, std::abs(normalizer - closed));
    return {p, normalizer};
}

Dist arcsin() { return Dist(std::make_shared<ArcsinModel>()); }
Dist semicircle() { return Dist(std::make_shared<SemicircleModel>()); }
Dist power_semicircle(double p) {
    return Dist(std::make_shared<PowerSemicircleModel>(power_semicircle_params(p)));
}

Dist power_dist(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw InvalidArgument("power distribution needs theta > 0, got " + format_double(theta));
    return Dist(std::make_shared<PowerModel>(theta));
}

Dist uniform(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw InvalidArgument("uniform needs finite a < b");
    return Dist(std::make_shared<UniformModel>(a, b));
}

Dist point_mass(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("point mass location must be finite");
    return Dist(std::make_shared<PointMassModel>(x));
}

Dist cauchy(double location, double scale) {
    if (!(scale > 0.0) || !std::isfinite(location) || !std::isfinite(scale))
        throw InvalidArgument("cauchy needs finite location and scale > 0");
    return Dist(std::make_shared<CauchyModel>(location, scale));
}

Dist exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidArgument("exponential needs rate > 0");
    return Dist(std::make_shared<ExponentialModel>(rate));
}

Dist parse_dist(std::string_view text) {
    const auto t = trim(text);
    const auto colon = t.find(':');
    const auto name = t.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string_view::npos) {
        for (auto tok : split(t.substr(colon + 1), ',')) {
            const auto v = parse_double(tok);
            if (!v) throw ParseError("bad distribution parameter", std::string(t));
            args.push_back(*v);
        }
    }
    auto need = [&](std::size_t k) {
        if (args.size() != k)
            throw ParseError("distribution '" + std::string(name) + "' takes " + std::to_string(k) +
                                 " parameter(s)",
                             std::string(t));
    };
    try {
        if (name == "arcsin") {
            need(0);
            return arcsin();
        }
        if (name == "semicircle") {
            need(0);
            return semicircle();
        }
        if (name == "psc") {
            need(1);
            return power_semicircle(args[0]);
        }
        if (name == "uniform") {
            need(2);
            return uniform(args[0], args[1]);
        }
        if (name == "power") {
            need(1);
            return power_dist(args[0]);
        }
        if (name == "cauchy") {
            need(2);
            return cauchy(args[0], args[1]);
        }
        if (name == "point") {
            need(1);
            return point_mass(args[0]);
        }
        if (name == "exp") {
            need(1);
            return exponential(args[0]);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), std::string(t));
    }
    throw ParseError("unknown distribution", std::string(t));
}

std::vector<Dist> parse_dist_list(std::string_view text) {
    std::vector<std::string> entries;
    for (auto group : split(text, ';')) {
        for (auto tok : split(group, ',')) {
            if (parse_double(tok) && !entries.empty() &&
                entries.back().find(':') != std::string::npos)
                entries.back() += "," + std::string(tok);
            else
                entries.emplace_back(tok);
        }
    }
    std::vector<Dist> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(parse_dist(e));
    if (out.empty()) throw ParseError("empty distribution list", std::string(text));
    return out;
}

}  // namespace rwa
