#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "rootseries/combinatorics.hpp"

using namespace rootseries;

namespace {

// Stirling numbers of the second kind by the standard recurrence.
long long stirling2(int n, int k) {
    if (n == 0 && k == 0) return 1;
    if (n == 0 || k == 0 || k > n) return 0;
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1);
}

// Exhaustive generator for compositions: all tuples over indices 1..r+1.
std::set<std::vector<int>> brute_compositions(int r, int weight_bound) {
    std::set<std::vector<int>> out;
    std::vector<int> mu(static_cast<size_t>(r > 0 ? r + 1 : 1), 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == static_cast<int>(mu.size())) {
            int sum = 0, w = 0;
            for (size_t i = 0; i < mu.size(); ++i) {
                sum += mu[i];
                if (i >= 1) w += static_cast<int>(i) * mu[i];
            }
            if (sum == r && w <= weight_bound) out.insert(mu);
            return;
        }
        for (int v = 0; v <= r; ++v) {
            mu[static_cast<size_t>(pos)] = v;
            rec(pos + 1);
        }
        mu[static_cast<size_t>(pos)] = 0;
    };
    rec(0);
    return out;
}

}  // namespace

TEST_CASE("falling factorial basics") {
    CHECK(falling_factorial(Rational(7), 0) == 1);
    CHECK(falling_factorial(Rational(5), 3) == 60);
    CHECK(falling_factorial(make_rational(1, 2), 2) == make_rational(-1, 4));
    CHECK(falling_factorial(Complex(5.0, 0.0), 3) == Complex(60.0, 0.0));
}

TEST_CASE("generalized binomial, including the negative convention") {
    CHECK(gen_binomial(Rational(9), 0) == 1);
    CHECK(gen_binomial(Rational(9), -2) == 0);
    CHECK(gen_binomial(make_rational(1, 2), 2) == make_rational(-1, 8));
    CHECK(gen_binomial(Complex(0.5, 0.0), -1) == Complex(0.0, 0.0));
}

TEST_CASE("compositions: counts and fixed examples") {
    auto c0 = compositions(0, 5);
    REQUIRE(c0.size() == 1);
    CHECK(c0[0].sum() == 0);

    auto c22 = compositions(2, 2);
    REQUIRE(c22.size() == 4);
    // lexicographic on (mu_2, mu_3, ...)
    CHECK(c22[0].mu == std::vector<int>{2, 0, 0});
    CHECK(c22[1].mu == std::vector<int>{1, 0, 1});
    CHECK(c22[2].mu == std::vector<int>{1, 1, 0});
    CHECK(c22[3].mu == std::vector<int>{0, 2, 0});

    auto c10 = compositions(1, 0);
    REQUIRE(c10.size() == 1);
    CHECK(c10[0].mu == std::vector<int>{1, 0});
}

TEST_CASE("compositions: duplicate-free and matching the exhaustive filter") {
    for (int r = 0; r <= 6; ++r) {
        for (int w = 0; w <= r; ++w) {
            auto got = compositions(r, w);
            std::set<std::vector<int>> seen;
            for (const auto& c : got) {
                CHECK(c.sum() == r);
                CHECK(c.weight() <= w);
                CHECK(seen.insert(c.mu).second);  // no duplicates
            }
            CHECK(seen == brute_compositions(r, w));
        }
    }
}

TEST_CASE("set partitions: counts are Stirling numbers") {
    CHECK(set_partitions(5, 1).size() == 1);
    CHECK(set_partitions(3, 2).size() == 3);
    CHECK(set_partitions(4, 2).size() == 7);
    CHECK(set_partitions(3, 5).empty());
    for (int N = 1; N <= 8; ++N)
        for (int k = 1; k <= N; ++k)
            CHECK(static_cast<long long>(set_partitions(N, k).size()) == stirling2(N, k));
}

TEST_CASE("set partitions: canonical ordering invariants") {
    for (const auto& s : set_partitions(5, 3)) {
        int prev_min = 0;
        std::set<int> all;
        for (const auto& part : s.parts) {
            REQUIRE(!part.empty());
            CHECK(std::is_sorted(part.begin(), part.end()));
            CHECK(part.front() > prev_min);
            prev_min = part.front();
            for (int v : part) CHECK(all.insert(v).second);
        }
        CHECK(all.size() == 5);
    }
}

TEST_CASE("multiset partitions mirror set partitions") {
    auto p1 = multiset_partitions(OrderedMultiset({1, 1}, 1), 2);
    REQUIRE(p1.size() == 1);
    CHECK(p1[0].parts[0].entries == std::vector<int>{1});
    CHECK(p1[0].parts[1].entries == std::vector<int>{1});

    auto p2 = multiset_partitions(OrderedMultiset({1, 2}, 2), 1);
    REQUIRE(p2.size() == 1);
    CHECK(p2[0].parts[0].entries == std::vector<int>{1, 2});

    CHECK(multiset_partitions(OrderedMultiset({1, 1, 2}, 2), 2).size() == 3);

    for (int N = 1; N <= 8; ++N) {
        std::vector<int> entries;
        for (int i = 0; i < N; ++i) entries.push_back(1 + (i % 3));
        OrderedMultiset I(entries, 3);
        for (int k = 1; k <= N; ++k)
            CHECK(multiset_partitions(I, k).size() == set_partitions(N, k).size());
    }
}

TEST_CASE("count_equivalent: fixed examples") {
    auto parts_of = [](std::vector<std::vector<int>> parts, int d) {
        MultisetPartition J;
        for (auto& p : parts) J.parts.push_back(OrderedMultiset(p, d));
        return J;
    };
    CHECK(count_equivalent(parts_of({{1}, {1}}, 1)) == 1);
    CHECK(count_equivalent(parts_of({{1}, {2}}, 2)) == 1);
    CHECK(count_equivalent(parts_of({{1}, {1, 2}}, 2)) == 2);
}

TEST_CASE("count_equivalent sums to |Parts(I,k)| over equivalence classes") {
    auto signature = [](const MultisetPartition& J) {
        std::vector<std::vector<int>> sig;
        for (const auto& p : J.parts) sig.push_back(p.multiplicity_vector());
        std::sort(sig.begin(), sig.end());
        return sig;
    };
    std::vector<OrderedMultiset> cases = {
        OrderedMultiset({1, 1, 2}, 2),      OrderedMultiset({1, 1, 1, 1}, 1),
        OrderedMultiset({1, 2, 3, 1}, 3),   OrderedMultiset({1, 1, 2, 2, 3}, 3),
        OrderedMultiset({2, 2, 2, 1, 1, 1}, 2),
    };
    for (const auto& I : cases) {
        for (int k = 1; k <= I.order(); ++k) {
            auto parts = multiset_partitions(I, k);
            std::map<std::vector<std::vector<int>>, long long> brute;
            std::map<std::vector<std::vector<int>>, const MultisetPartition*> rep;
            for (const auto& J : parts) {
                auto sig = signature(J);
                ++brute[sig];
                rep.emplace(sig, &J);
            }
            long long total = 0;
            for (const auto& [sig, count] : brute) {
                CHECK(count_equivalent(*rep[sig]) == count);
                total += count;
            }
            CHECK(total == static_cast<long long>(parts.size()));
        }
    }
}

TEST_CASE("ordered multiset bookkeeping") {
    OrderedMultiset I({2, 1, 2}, 3);
    CHECK(I.order() == 3);
    CHECK(I.multiplicity(2) == 2);
    CHECK(I.multiplicity_vector() == std::vector<int>{1, 2, 0});
    CHECK(I.without_index(0).entries == std::vector<int>{1, 2});
    CHECK(OrderedMultiset::from_multiplicities({1, 2, 0}).entries == std::vector<int>{1, 2, 2});
    CHECK_THROWS_AS(OrderedMultiset({0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(OrderedMultiset({4}, 3), std::invalid_argument);
}

TEST_CASE("graded multi-index enumeration is deterministic") {
    auto idx = multi_indices_up_to(2, 2);
    REQUIRE(idx.size() == 5);
    CHECK(idx[0] == std::vector<int>{1, 0});
    CHECK(idx[1] == std::vector<int>{0, 1});
    CHECK(idx[2] == std::vector<int>{2, 0});
    CHECK(idx[3] == std::vector<int>{1, 1});
    CHECK(idx[4] == std::vector<int>{0, 2});
}
