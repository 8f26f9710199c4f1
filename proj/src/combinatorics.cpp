#include "rootseries/combinatorics.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace rootseries {

namespace {

// Recursively pick mu_2, mu_3, ... within the weight budget; mu_1 absorbs the
// remainder of r. Recursion position i is the 1-based part index.
void extend_composition(int r, int weight_left, int sum_left, int i, std::vector<int>& tail,
                        std::vector<Composition>& out) {
    if ((i - 1) > weight_left || sum_left == 0) {
        // No further mu_i (i >= current) can be nonzero: emit.
        Composition c;
        c.mu.assign(static_cast<size_t>(r > 0 ? r + 1 : 1), 0);
        int tail_total = 0;
        for (size_t j = 0; j < tail.size(); ++j) {
            c.mu[j + 1] = tail[j];
            tail_total += tail[j];
        }
        c.mu[0] = r - tail_total;
        out.push_back(std::move(c));
        return;
    }
    int max_mu = std::min(weight_left / (i - 1), sum_left);
    for (int v = 0; v <= max_mu; ++v) {
        tail.push_back(v);
        extend_composition(r, weight_left - v * (i - 1), sum_left - v, i + 1, tail, out);
        tail.pop_back();
    }
}

}  // namespace

std::vector<Composition> compositions(int r, int weight_bound) {
    if (r < 0) throw std::invalid_argument("compositions wants r >= 0");
    std::vector<Composition> out;
    if (weight_bound < 0) return out;
    if (r == 0) {
        out.push_back(Composition{std::vector<int>{0}});
        return out;
    }
    int budget = std::min(weight_bound, r);  // parts beyond weight r cannot appear
    std::vector<int> tail;
    extend_composition(r, budget, r, 2, tail, out);
    // Lexicographic on (mu_2, mu_3, ...).
    std::sort(out.begin(), out.end(), [](const Composition& a, const Composition& b) {
        return std::lexicographical_compare(a.mu.begin() + 1, a.mu.end(), b.mu.begin() + 1,
                                            b.mu.end());
    });
    return out;
}

std::vector<SetPartition> set_partitions(int N, int k) {
    std::vector<SetPartition> out;
    if (N < 1 || k < 1 || k > N) return out;
    // Restricted growth strings with max entry exactly k-1, lexicographic.
    std::vector<int> rgs(static_cast<size_t>(N), 0);
    auto emit = [&]() {
        SetPartition p;
        p.parts.assign(static_cast<size_t>(k), {});
        for (int i = 0; i < N; ++i) p.parts[static_cast<size_t>(rgs[i])].push_back(i + 1);
        out.push_back(std::move(p));
    };
    // Iterative enumeration in lexicographic RGS order.
    std::vector<int> maxes(static_cast<size_t>(N), 0);
    int i = 0;
    rgs[0] = 0;
    maxes[0] = 0;
    if (N == 1) {
        if (k == 1) emit();
        return out;
    }
    i = 1;
    rgs[1] = -1;  // will be incremented on entry
    while (i >= 1) {
        int cap = std::min(maxes[i - 1] + 1, k - 1);
        if (rgs[i] < cap) {
            ++rgs[i];
            maxes[i] = std::max(maxes[i - 1], rgs[i]);
            if (i == N - 1) {
                if (maxes[i] == k - 1) emit();
            } else {
                ++i;
                rgs[i] = -1;
            }
        } else {
            --i;
        }
    }
    return out;
}

void OrderedMultiset::validate() const {
    if (d < 1) throw std::invalid_argument("multiset wants d >= 1");
    for (int v : entries)
        if (v < 1 || v > d) throw std::invalid_argument("multiset entry out of [1,d]");
}

int OrderedMultiset::multiplicity(int v) const {
    int m = 0;
    for (int e : entries) m += (e == v);
    return m;
}

std::vector<int> OrderedMultiset::multiplicity_vector() const {
    std::vector<int> mult(static_cast<size_t>(d), 0);
    for (int e : entries) ++mult[static_cast<size_t>(e - 1)];
    return mult;
}

OrderedMultiset OrderedMultiset::without_index(int h) const {
    if (h < 0 || h >= order()) throw std::out_of_range("without_index");
    OrderedMultiset out;
    out.d = d;
    out.entries = entries;
    out.entries.erase(out.entries.begin() + h);
    return out;
}

OrderedMultiset OrderedMultiset::from_multiplicities(const std::vector<int>& mult) {
    OrderedMultiset out;
    out.d = static_cast<int>(mult.size());
    if (out.d < 1) throw std::invalid_argument("empty multiplicity vector");
    for (size_t v = 0; v < mult.size(); ++v) {
        if (mult[v] < 0) throw std::invalid_argument("negative multiplicity");
        for (int j = 0; j < mult[v]; ++j) out.entries.push_back(static_cast<int>(v) + 1);
    }
    return out;
}

std::vector<MultisetPartition> multiset_partitions(const OrderedMultiset& I, int k) {
    std::vector<MultisetPartition> out;
    for (const SetPartition& s : set_partitions(I.order(), k)) {
        MultisetPartition J;
        J.parts.reserve(s.parts.size());
        for (const auto& part : s.parts) {
            OrderedMultiset Ji;
            Ji.d = I.d;
            for (int pos : part) Ji.entries.push_back(I.entries[static_cast<size_t>(pos - 1)]);
            J.parts.push_back(std::move(Ji));
        }
        out.push_back(std::move(J));
    }
    return out;
}

long long count_equivalent(const MultisetPartition& J) {
    if (J.parts.empty()) throw std::invalid_argument("empty multiset partition");
    int d = J.parts.front().d;
    // b_v: multiplicities of the distinct parts, parts compared as multisets.
    std::map<std::vector<int>, int> distinct;
    for (const auto& part : J.parts) ++distinct[part.multiplicity_vector()];

    Integer num(1), den(1);
    for (const auto& [mv, b] : distinct) den *= factorial(b);
    std::vector<int> total(static_cast<size_t>(d), 0);
    for (const auto& part : J.parts)
        for (int e : part.entries) ++total[static_cast<size_t>(e - 1)];
    for (int v = 0; v < d; ++v) num *= factorial(total[static_cast<size_t>(v)]);
    for (const auto& part : J.parts)
        for (int v = 1; v <= d; ++v) den *= factorial(part.multiplicity(v));

    Integer q = num / den;
    if (q * den != num || q <= 0)
        throw std::logic_error("count_equivalent: non-integer count");
    return static_cast<long long>(q.get_si());
}

std::vector<std::vector<int>> multi_indices_up_to(int d, int order) {
    std::vector<std::vector<int>> out;
    std::vector<int> n(static_cast<size_t>(d), 0);
    for (int total = 1; total <= order; ++total) {
        // lexicographic within a grade
        std::function<void(int, int)> rec = [&](int pos, int left) {
            if (pos == d - 1) {
                n[static_cast<size_t>(pos)] = left;
                out.push_back(n);
                return;
            }
            for (int v = left; v >= 0; --v) {
                n[static_cast<size_t>(pos)] = v;
                rec(pos + 1, left - v);
            }
        };
        rec(0, total);
    }
    return out;
}

}  // namespace rootseries
