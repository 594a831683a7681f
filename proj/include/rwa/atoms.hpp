#pragma once

// Conditioning configurations: atoms x_j with integer multiplicities m_j.
//
// A WeightScheme (m_1, ..., m_n) with n* = Σ m_j identifies the law of the
// random weights: cutting [0, 1] at the order statistics U_(k_1) < ... <
// U_(k_{n-1}) of n* - 1 uniforms, with m_j = k_j - k_{j-1}, k_0 = 0, k_n = n*.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rwa {

inline constexpr double kDefaultMergeTolerance = 1e-9;

class WeightScheme {
public:
    // Multiplicities directly; every entry must be >= 1.
    explicit WeightScheme(std::vector<int> multiplicities);

    // From cut indices 1 <= k_1 < ... < k_{n-1} <= nstar - 1.
    static WeightScheme from_indices(int nstar, std::span<const int> cuts);

    // (1, ..., 1) with n entries: the plain uniform-spacings weights.
    static WeightScheme uniform_spacings(int n);

    std::size_t size() const noexcept { return m_.size(); }
    int nstar() const noexcept { return nstar_; }
    int multiplicity(std::size_t j) const { return m_.at(j); }
    std::span<const int> multiplicities() const noexcept { return m_; }

    // k_1, ..., k_{n-1} (partial sums, k_n = n* omitted).
    std::vector<int> cut_indices() const;

    std::string to_string() const;  // "3,1,1"

    friend bool operator==(const WeightScheme&, const WeightScheme&) = default;

private:
    std::vector<int> m_;
    int nstar_ = 0;
};

struct Atom {
    double value;
    int multiplicity;
};

// Distinct atoms with their multiplicities. Construct through normalize() to
// merge ties, or directly when the atoms are known to be distinct.
class AtomConfig {
public:
    // Throws InvalidArgument on length mismatch or on any exactly-tied pair.
    AtomConfig(std::vector<double> atoms, WeightScheme scheme);

    std::size_t size() const noexcept { return x_.size(); }
    std::span<const double> atoms() const noexcept { return x_; }
    double atom(std::size_t j) const { return x_.at(j); }
    const WeightScheme& scheme() const noexcept { return scheme_; }
    int nstar() const noexcept { return scheme_.nstar(); }

    double min_atom() const;
    double max_atom() const;
    // Smallest pairwise distance (infinity for a single atom).
    double min_gap() const;

    std::string to_string() const;  // "3:1,2:1,1:1"

private:
    std::vector<double> x_;
    WeightScheme scheme_;
};

// Merges atoms whose pairwise distance is <= tol (single linkage) into one
// atom carrying the summed multiplicity, placed at the multiplicity-weighted
// mean. Clusters keep the position of their first member. Idempotent.
AtomConfig normalize(std::span<const double> atoms, const WeightScheme& scheme,
                     double tol = kDefaultMergeTolerance);

struct ParsedAtoms {
    std::vector<double> atoms;
    WeightScheme scheme;
};

// `x:m` pairs separated by commas, e.g. "3:1,2:1,1:1". Throws ParseError.
ParsedAtoms parse_atoms(std::string_view text);

// Comma-separated positive multiplicities, e.g. "3,1,1". Throws ParseError.
WeightScheme parse_scheme(std::string_view text);

}  // namespace rwa
