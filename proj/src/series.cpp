#include "rwa/series.hpp"

#include <cmath>

namespace rwa {

double taylor_coefficient_of_factor_product(std::span<const LinearFactor> factors, std::size_t r) {
    auto product = Series<double>::one(r);
    for (const auto& f : factors) product *= series_of_factor<double>(f, r);
    return product[r];
}

double derivative_of_factor_product(std::span<const LinearFactor> factors, std::size_t r) {
    return std::tgamma(static_cast<double>(r) + 1.0) *
           taylor_coefficient_of_factor_product(factors, r);
}

double evaluate_factor_product(std::span<const LinearFactor> factors, double t) {
    double v = 1.0;
    for (const auto& f : factors) v *= std::pow(f.offset + t, f.exponent);
    return v;
}

}  // namespace rwa
