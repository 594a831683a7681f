#pragma once

// Numerical integration shared by the distribution catalog, the transform
// evaluator and the mixture CDF.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <limits>
#include <vector>

#include "rwa/error.hpp"

namespace rwa::quad {

struct Rule {
    std::vector<double> nodes;    // on (0, 1)
    std::vector<double> weights;  // sum to 1
};

// n-point Gauss–Legendre rule mapped to (0, 1). Newton iteration on P_n.
inline Rule gauss_legendre(std::size_t n) {
    if (n == 0) throw InvalidArgument("Gauss-Legendre rule needs at least one node");
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) p0 = 1.0;
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        if (n == 1) dp = 1.0;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = 0.5 * (1.0 - x);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
    }
    if (n == 1) rule.weights[0] = 1.0;
    return rule;
}

template <typename T>
struct Result {
    T value{};
    double error = 0.0;
    std::size_t intervals = 0;
    bool converged = false;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    std::size_t max_intervals = 4000;
};

namespace detail {

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1] (non-negative half).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <typename T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T kronrod = fc * kWgk[7];
    T gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        kronrod += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
    }
    return {a, b, kronrod * h, magnitude((kronrod - gauss) * h)};
}

}  // namespace detail

// Globally adaptive Gauss–Kronrod 7/15 on [a, b]. The rule never evaluates f
// at the endpoints, so integrable endpoint singularities are tolerated.
// T is double or std::complex<double>.
template <typename T, typename F>
Result<T> integrate(F&& f, double a, double b, const Options& opt = {}) {
    std::vector<detail::Segment<T>> work;
    work.push_back(detail::gk15<T>(f, a, b));
    T total = work.front().value;
    double err = work.front().error;
    while (err > std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total)) &&
           work.size() < opt.max_intervals) {
        std::pop_heap(work.begin(), work.end());
        const auto worst = work.back();
        if (worst.b - worst.a <= 4.0 * std::numeric_limits<double>::epsilon() *
                                     std::max(std::abs(worst.a), std::abs(worst.b))) {
            std::push_heap(work.begin(), work.end());
            break;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        work.back() = detail::gk15<T>(f, worst.a, mid);
        std::push_heap(work.begin(), work.end());
        work.push_back(detail::gk15<T>(f, mid, worst.b));
        std::push_heap(work.begin(), work.end());
        // Re-summing keeps the running totals free of drift.
        total = T{};
        err = 0.0;
        for (const auto& s : work) {
            total += s.value;
            err += s.error;
        }
    }
    const std::size_t intervals = work.size();
    Result<T> r;
    r.value = total;
    r.error = err;
    r.intervals = intervals;
    r.converged = err <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total));
    return r;
}

}  // namespace rwa::quad
