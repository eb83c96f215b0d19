#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "semiwp/errors.hpp"

namespace semiwp {

// Largest total order for which k! = prod k_j! stays an exact uint64 (20! < 2^64).
inline constexpr int kMaxFactorialOrder = 20;

/// Vector of nonnegative integer exponents k = (k_1,...,k_d).
class MultiIndex {
  public:
    MultiIndex() = default;
    explicit MultiIndex(int d) : k_(static_cast<std::size_t>(check_dim(d)), 0) {}
    MultiIndex(std::initializer_list<int> init) : k_(init) {
        for (int v : k_)
            if (v < 0) throw input_error("MultiIndex: negative component");
        check_dim(static_cast<int>(k_.size()));
    }
    explicit MultiIndex(std::vector<int> comps) : k_(std::move(comps)) {
        for (int v : k_)
            if (v < 0) throw input_error("MultiIndex: negative component");
        check_dim(static_cast<int>(k_.size()));
    }

    int dim() const { return static_cast<int>(k_.size()); }
    int operator[](int j) const { return k_[static_cast<std::size_t>(j)]; }
    const std::vector<int>& components() const { return k_; }

    /// Total order |k| = sum_j k_j.
    int order() const { return std::accumulate(k_.begin(), k_.end(), 0); }

    /// Exact k! = prod_j (k_j)!; throws capacity_error beyond order 20.
    std::uint64_t factorial() const {
        if (order() > kMaxFactorialOrder)
            throw capacity_error("MultiIndex::factorial: order " + std::to_string(order()) +
                                 " exceeds exact-integer range (max " +
                                 std::to_string(kMaxFactorialOrder) + ")");
        std::uint64_t f = 1;
        for (int c : k_)
            for (int j = 2; j <= c; ++j) f *= static_cast<std::uint64_t>(j);
        return f;
    }

    /// k + e_axis (axis is 0-based).
    MultiIndex add_unit(int axis) const {
        if (axis < 0 || axis >= dim())
            throw input_error("MultiIndex::add_unit: axis " + std::to_string(axis) +
                              " out of range for dimension " + std::to_string(dim()));
        MultiIndex out = *this;
        ++out.k_[static_cast<std::size_t>(axis)];
        return out;
    }

    /// k - e_axis; requires k_axis > 0.
    MultiIndex sub_unit(int axis) const {
        if (axis < 0 || axis >= dim() || k_[static_cast<std::size_t>(axis)] == 0)
            throw input_error("MultiIndex::sub_unit: axis out of range or zero component");
        MultiIndex out = *this;
        --out.k_[static_cast<std::size_t>(axis)];
        return out;
    }

    /// Smallest axis with a nonzero component; -1 for the zero index.
    int first_nonzero_axis() const {
        for (int j = 0; j < dim(); ++j)
            if (k_[static_cast<std::size_t>(j)] > 0) return j;
        return -1;
    }

    bool operator==(const MultiIndex& o) const { return k_ == o.k_; }
    bool operator!=(const MultiIndex& o) const { return k_ != o.k_; }

    /// Compact form "[2,0,1]" (also the JSON serialization).
    std::string to_string() const {
        std::string s = "[";
        for (std::size_t j = 0; j < k_.size(); ++j) {
            if (j) s += ',';
            s += std::to_string(k_[j]);
        }
        s += ']';
        return s;
    }

  private:
    static int check_dim(int d) {
        if (d < 1) throw input_error("MultiIndex: dimension must be >= 1");
        return d;
    }
    std::vector<int> k_;
};

/// Graded lexicographic order: ascending total order; within a grade the first
/// component is most significant and larger components come first, so for d=2
/// the sequence runs (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),...
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        const int oa = a.order(), ob = b.order();
        if (oa != ob) return oa < ob;
        for (int j = 0; j < a.dim() && j < b.dim(); ++j)
            if (a[j] != b[j]) return a[j] > b[j];
        return false;
    }
};

/// All k with |k| <= N in graded lexicographic order; length C(d+N, d).
inline std::vector<MultiIndex> enumerate_upto(int d, int N) {
    if (d < 1) throw input_error("enumerate_upto: d must be >= 1");
    if (N < 0) throw input_error("enumerate_upto: N must be >= 0");
    std::vector<MultiIndex> out;
    std::vector<int> k(static_cast<std::size_t>(d), 0);
    // Fill positions left to right, spending the grade budget on the most
    // significant components first.
    auto fill = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == d - 1) {
            k[static_cast<std::size_t>(pos)] = remaining;
            out.emplace_back(k);
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            k[static_cast<std::size_t>(pos)] = c;
            self(self, pos + 1, remaining - c);
        }
    };
    for (int n = 0; n <= N; ++n) fill(fill, 0, n);
    return out;
}

}  // namespace semiwp
