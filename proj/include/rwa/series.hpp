#pragma once

// Truncated Taylor-series arithmetic.
//
// Used to evaluate high-order derivatives of products of powers of linear
// factors, Π_i (d_i + t)^{e_i}, at t = 0 without symbolic algebra or finite
// differences: expand each factor as a series, multiply, read off a
// coefficient.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rwa/error.hpp"

namespace rwa {

// Largest truncation order accepted anywhere (n* - 1 never exceeds it).
inline constexpr std::size_t kMaxSeriesOrder = 64;

// Expansion points closer than this to a pole are refused.
inline constexpr double kPoleGuard = 1e-9;

template <typename T>
class Series {
public:
    explicit Series(std::size_t order) : c_(order + 1, T{}) {
        if (order > kMaxSeriesOrder)
            throw InvalidArgument("series order " + std::to_string(order) + " exceeds cap " +
                                  std::to_string(kMaxSeriesOrder));
    }

    Series(std::vector<T> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) throw InvalidArgument("series needs at least one coefficient");
        if (order() > kMaxSeriesOrder)
            throw InvalidArgument("series order exceeds cap " + std::to_string(kMaxSeriesOrder));
    }

    // 1 + 0·t + ... at the given order.
    static Series one(std::size_t order) {
        Series s(order);
        s.c_[0] = T{1};
        return s;
    }

    std::size_t order() const noexcept { return c_.size() - 1; }
    const T& operator[](std::size_t k) const { return c_[k]; }
    T& operator[](std::size_t k) { return c_[k]; }
    std::span<const T> coeffs() const noexcept { return c_; }

    Series& operator*=(const Series& other) {
        *this = *this * other;
        return *this;
    }

    Series& operator*=(T scalar) {
        for (auto& c : c_) c *= scalar;
        return *this;
    }

    // Cauchy product truncated at the common order.
    friend Series operator*(const Series& a, const Series& b) {
        if (a.order() != b.order())
            throw InvalidArgument("series order mismatch: " + std::to_string(a.order()) + " vs " +
                                  std::to_string(b.order()));
        Series out(a.order());
        const std::size_t K = a.order();
        for (std::size_t i = 0; i <= K; ++i) {
            if (a.c_[i] == T{}) continue;
            for (std::size_t j = 0; i + j <= K; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return out;
    }

    friend bool operator==(const Series&, const Series&) = default;

private:
    std::vector<T> c_;
};

// (offset + t)^exponent
struct LinearFactor {
    double offset = 0.0;
    int exponent = 0;
};

// Taylor coefficients of (d + t)^e about t = 0, via generalized binomial
// coefficients: c_k = C(e, k) d^{e-k}.
template <typename T = double>
Series<T> series_of_factor(const LinearFactor& f, std::size_t order) {
    Series<T> s(order);
    const double d = f.offset;
    const int e = f.exponent;
    if (e < 0 && std::abs(d) < kPoleGuard)
        throw DomainError("pole at expansion point: offset " + std::to_string(d) +
                          " with exponent " + std::to_string(e));
    if (e == 0) {
        s[0] = T{1};
        return s;
    }
    if (e > 0 && d == 0.0) {
        // (t)^e: a single monomial.
        if (static_cast<std::size_t>(e) <= order) s[static_cast<std::size_t>(e)] = T{1};
        return s;
    }
    double c = std::pow(d, e);
    s[0] = T{c};
    for (std::size_t k = 0; k < order; ++k) {
        c *= static_cast<double>(e - static_cast<int>(k)) / static_cast<double>(k + 1) / d;
        s[k + 1] = T{c};
        if (c == 0.0) break;  // non-negative integer exponent: the expansion terminates
    }
    return s;
}

// Coefficient of t^r in Π_i (d_i + t)^{e_i}.
double taylor_coefficient_of_factor_product(std::span<const LinearFactor> factors, std::size_t r);

// r-th derivative at t = 0 of Π_i (d_i + t)^{e_i}.
double derivative_of_factor_product(std::span<const LinearFactor> factors, std::size_t r);

// Π_i (d_i + t)^{e_i} evaluated directly at t.
double evaluate_factor_product(std::span<const LinearFactor> factors, double t);

}  // namespace rwa
