#include "rwa/atoms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "rwa/error.hpp"
#include "rwa/text.hpp"

namespace rwa {

WeightScheme::WeightScheme(std::vector<int> multiplicities) : m_(std::move(multiplicities)) {
    if (m_.empty()) throw InvalidArgument("weight scheme needs at least one multiplicity");
    for (int m : m_)
        if (m < 1) throw InvalidArgument("multiplicities must be >= 1, got " + std::to_string(m));
    nstar_ = std::accumulate(m_.begin(), m_.end(), 0);
}

WeightScheme WeightScheme::from_indices(int nstar, std::span<const int> cuts) {
    if (nstar < 1) throw InvalidArgument("nstar must be >= 1");
    std::vector<int> m;
    m.reserve(cuts.size() + 1);
    int prev = 0;
    for (int k : cuts) {
        if (k < 1 || k > nstar - 1)
            throw InvalidArgument("cut index " + std::to_string(k) + " outside [1, " +
                                  std::to_string(nstar - 1) + "]");
        if (k <= prev) throw InvalidArgument("cut indices must be strictly increasing");
        m.push_back(k - prev);
        prev = k;
    }
    m.push_back(nstar - prev);
    return WeightScheme(std::move(m));
}

WeightScheme WeightScheme::uniform_spacings(int n) {
    if (n < 1) throw InvalidArgument("need at least one weight");
    return WeightScheme(std::vector<int>(static_cast<std::size_t>(n), 1));
}

std::vector<int> WeightScheme::cut_indices() const {
    std::vector<int> k;
    int acc = 0;
    for (std::size_t j = 0; j + 1 < m_.size(); ++j) k.push_back(acc += m_[j]);
    return k;
}

std::string WeightScheme::to_string() const {
    std::string out;
    for (std::size_t j = 0; j < m_.size(); ++j) {
        if (j) out += ',';
        out += std::to_string(m_[j]);
    }
    return out;
}

AtomConfig::AtomConfig(std::vector<double> atoms, WeightScheme scheme)
    : x_(std::move(atoms)), scheme_(std::move(scheme)) {
    if (x_.size() != scheme_.size())
        throw InvalidArgument("atom count " + std::to_string(x_.size()) +
                              " does not match multiplicity count " +
                              std::to_string(scheme_.size()));
    for (double v : x_)
        if (!std::isfinite(v)) throw InvalidArgument("atoms must be finite");
    if (min_gap() == 0.0) throw InvalidArgument("tied atoms; normalize() the configuration first");
}

double AtomConfig::min_atom() const { return *std::min_element(x_.begin(), x_.end()); }
double AtomConfig::max_atom() const { return *std::max_element(x_.begin(), x_.end()); }

double AtomConfig::min_gap() const {
    std::vector<double> s(x_);
    std::sort(s.begin(), s.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < s.size(); ++i) gap = std::min(gap, s[i] - s[i - 1]);
    return gap;
}

std::string AtomConfig::to_string() const {
    std::string out;
    for (std::size_t j = 0; j < x_.size(); ++j) {
        if (j) out += ',';
        out += format_double(x_[j]) + ':' + std::to_string(scheme_.multiplicity(j));
    }
    return out;
}

AtomConfig normalize(std::span<const double> atoms, const WeightScheme& scheme, double tol) {
    const std::size_t n = atoms.size();
    if (n != scheme.size())
        throw InvalidArgument("atom count " + std::to_string(n) +
                              " does not match multiplicity count " +
                              std::to_string(scheme.size()));
    if (!(tol >= 0.0)) throw InvalidArgument("merge tolerance must be >= 0");

    // Single-linkage clusters along the sorted order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
    std::vector<std::size_t> cluster(n);
    std::size_t nclusters = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && atoms[order[i]] - atoms[order[i - 1]] > tol) ++nclusters;
        cluster[order[i]] = nclusters;
    }
    ++nclusters;
    if (nclusters == n) return AtomConfig({atoms.begin(), atoms.end()}, scheme);

    std::vector<double> weighted(nclusters, 0.0);
    std::vector<int> mult(nclusters, 0);
    std::vector<std::size_t> first(nclusters, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t c = cluster[j];
        weighted[c] += scheme.multiplicity(j) * atoms[j];
        mult[c] += scheme.multiplicity(j);
        first[c] = std::min(first[c], j);
    }
    std::vector<std::size_t> by_first(nclusters);
    std::iota(by_first.begin(), by_first.end(), 0);
    std::sort(by_first.begin(), by_first.end(),
              [&](std::size_t a, std::size_t b) { return first[a] < first[b]; });

    std::vector<double> x;
    std::vector<int> m;
    for (std::size_t c : by_first) {
        // Rounding can push the mean just outside its cluster; keep it inside.
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t j = 0; j < n; ++j)
            if (cluster[j] == c) {
                lo = std::min(lo, atoms[j]);
                hi = std::max(hi, atoms[j]);
            }
        x.push_back(std::clamp(weighted[c] / mult[c], lo, hi));
        m.push_back(mult[c]);
    }
    return AtomConfig(std::move(x), WeightScheme(std::move(m)));
}

ParsedAtoms parse_atoms(std::string_view text) {
    std::vector<double> x;
    std::vector<int> m;
    for (auto token : split(text, ',')) {
        const auto colon = token.find(':');
        if (colon == std::string_view::npos)
            throw ParseError("atom must be written value:multiplicity", std::string(token));
        const auto value = parse_double(token.substr(0, colon));
        const auto mult = parse_int(token.substr(colon + 1));
        if (!value || !mult || *mult < 1)
            throw ParseError("bad atom", std::string(token));
        x.push_back(*value);
        m.push_back(*mult);
    }
    if (x.empty()) throw ParseError("empty atom list", std::string(text));
    return {std::move(x), WeightScheme(std::move(m))};
}

WeightScheme parse_scheme(std::string_view text) {
    std::vector<int> m;
    for (auto token : split(text, ',')) {
        const auto v = parse_int(token);
        if (!v || *v < 1) throw ParseError("bad multiplicity", std::string(token));
        m.push_back(*v);
    }
    if (m.empty()) throw ParseError("empty scheme", std::string(text));
    return WeightScheme(std::move(m));
}

}  // namespace rwa
