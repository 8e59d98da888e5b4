#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "hermop/errors.hpp"

namespace hermop {

/// Tuple of non-negative integers indexing the tensor Hermite basis.
/// Ordering is lexicographic on the entries (dimension first), which is the
/// total order used for storage and serialization everywhere.
class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
        if (entries_.empty())
            throw ValidationError("MultiIndex: dimension must be >= 1");
        for (int e : entries_)
            if (e < 0)
                throw ValidationError("MultiIndex: entries must be non-negative");
    }

    MultiIndex(std::initializer_list<int> entries)
        : MultiIndex(std::vector<int>(entries)) {}

    static MultiIndex zeros(int dim) {
        if (dim < 1)
            throw ValidationError("MultiIndex: dimension must be >= 1");
        return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0));
    }

    int dim() const { return static_cast<int>(entries_.size()); }

    /// |alpha|: the modulus (sum of entries).
    int order() const { return std::accumulate(entries_.begin(), entries_.end(), 0); }

    int operator[](int k) const { return entries_[static_cast<std::size_t>(k)]; }

    const std::vector<int>& entries() const { return entries_; }

    bool is_zero() const { return order() == 0; }

    /// Concatenation (alpha, tail) used by the inner-dimension extension.
    MultiIndex concat(const MultiIndex& tail) const {
        std::vector<int> e = entries_;
        e.insert(e.end(), tail.entries_.begin(), tail.entries_.end());
        return MultiIndex(std::move(e));
    }

    /// First k axes.
    MultiIndex head(int k) const {
        return MultiIndex(std::vector<int>(entries_.begin(), entries_.begin() + k));
    }

    /// Axes k..d-1.
    MultiIndex tail_from(int k) const {
        return MultiIndex(std::vector<int>(entries_.begin() + k, entries_.end()));
    }

    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

    friend std::ostream& operator<<(std::ostream& os, const MultiIndex& a) {
        os << '(';
        for (int k = 0; k < a.dim(); ++k)
            os << (k ? "," : "") << a[k];
        return os << ')';
    }

private:
    std::vector<int> entries_;
};

/// Lexicographic enumeration of the box {alpha : alpha_k <= trunc_k}.
/// Visitor receives each MultiIndex in the canonical order.
template <typename F>
void for_each_index(const std::vector<int>& trunc, F&& visit) {
    const int d = static_cast<int>(trunc.size());
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    while (true) {
        visit(MultiIndex(cur));
        int k = d - 1;
        while (k >= 0 && cur[static_cast<std::size_t>(k)] == trunc[static_cast<std::size_t>(k)]) {
            cur[static_cast<std::size_t>(k)] = 0;
            --k;
        }
        if (k < 0)
            return;
        ++cur[static_cast<std::size_t>(k)];
    }
}

inline std::size_t box_size(const std::vector<int>& trunc) {
    std::size_t n = 1;
    for (int t : trunc)
        n *= static_cast<std::size_t>(t + 1);
    return n;
}

} // namespace hermop
