#pragma once

#include <vector>

#include "rootseries/rational.hpp"

namespace rootseries {

// Falling factorial (x)_k over any ring embedding small integers.
template <class T>
T falling_factorial(const T& x, int k) {
    if (k < 0) throw std::invalid_argument("falling factorial wants k >= 0");
    T out = T(1);
    for (int i = 1; i <= k; ++i) out *= x - T(i - 1);
    return out;
}

// C(x, m) = (x)_m / m! for m >= 0, and 0 for m < 0. The m < 0 convention is
// what makes the composition sum in F finite.
inline Rational gen_binomial(const Rational& x, long m) {
    if (m < 0) return Rational(0);
    return falling_factorial(x, static_cast<int>(m)) / Rational(factorial(m));
}

inline Complex gen_binomial(const Complex& x, long m) {
    if (m < 0) return Complex(0.0, 0.0);
    return falling_factorial(x, static_cast<int>(m)) / Complex(factorial(m).get_d(), 0.0);
}

// A composition mu of r with non-negative parts; mu[i] stores mu_{i+1}.
// Weight W(mu) = sum_{i>=2} (i-1) mu_i controls which terms of F survive.
struct Composition {
    std::vector<int> mu;

    int sum() const {
        int s = 0;
        for (int v : mu) s += v;
        return s;
    }
    int weight() const {
        int w = 0;
        for (size_t i = 1; i < mu.size(); ++i) w += static_cast<int>(i) * mu[i];
        return w;
    }
    int part(int i) const {  // mu_i, 1-based
        return (i >= 1 && i <= static_cast<int>(mu.size())) ? mu[i - 1] : 0;
    }
    int tail_sum() const {  // sum_{i>=2} mu_i
        int s = 0;
        for (size_t i = 1; i < mu.size(); ++i) s += mu[i];
        return s;
    }
};

// All mu in C(r) with W(mu) <= weight_bound, lexicographic on (mu_2, mu_3, ...).
// The bound is clamped to r (the only regime the series formulas use), which
// keeps every composition inside a dense vector of length r + 1.
std::vector<Composition> compositions(int r, int weight_bound);

// Set partition of [1,N] into k parts, parts ordered by least element,
// each part increasing.
struct SetPartition {
    std::vector<std::vector<int>> parts;
};

// All partitions of [1,N] into exactly k non-empty parts via restricted
// growth strings; |result| is the Stirling number S(N,k). Empty when k > N
// or k < 1.
std::vector<SetPartition> set_partitions(int N, int k);

// Ordered multiset of [1,d].
struct OrderedMultiset {
    std::vector<int> entries;  // values in [1,d]
    int d = 1;

    OrderedMultiset() = default;
    OrderedMultiset(std::vector<int> e, int d_) : entries(std::move(e)), d(d_) { validate(); }

    int order() const { return static_cast<int>(entries.size()); }
    int multiplicity(int v) const;
    std::vector<int> multiplicity_vector() const;  // length d
    OrderedMultiset without_index(int h) const;    // remove entry at 0-based h
    static OrderedMultiset from_multiplicities(const std::vector<int>& mult);

private:
    void validate() const;
};

struct MultisetPartition {
    std::vector<OrderedMultiset> parts;
};

// Parts(I,k): images of set_partitions(|I|,k) under I.
std::vector<MultisetPartition> multiset_partitions(const OrderedMultiset& I, int k);

// Number of J' in Parts(I,k) equivalent to J (parts equal as multisets up to
// permutation of the parts).
long long count_equivalent(const MultisetPartition& J);

// Multi-indices n with 1 <= sum(n) <= order, graded lexicographic.
std::vector<std::vector<int>> multi_indices_up_to(int d, int order);

}  // namespace rootseries
