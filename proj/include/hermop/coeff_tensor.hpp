#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "hermop/errors.hpp"
#include "hermop/multi_index.hpp"

namespace hermop {

using Complex = std::complex<double>;

/// Sparse kernel coefficient tensor a_{alpha,beta} for
/// K(x,y) = sum a_{alpha,beta} h_alpha(x) h_beta(y): the operator's matrix in
/// the Hermite basis. Entries with |a| < 1e-300 are dropped on insertion so
/// the stored form stays canonical and log-domain estimators never underflow.
class CoeffTensor {
public:
    using Key = std::pair<MultiIndex, MultiIndex>;
    using EntryMap = std::map<Key, Complex>;

    static constexpr double kDropThreshold = 1e-300;

    CoeffTensor(int d_left, int d_right, std::vector<int> trunc_left,
                std::vector<int> trunc_right)
        : d_left_(d_left), d_right_(d_right), trunc_left_(std::move(trunc_left)),
          trunc_right_(std::move(trunc_right)) {
        if (d_left_ < 1 || d_right_ < 1)
            throw ValidationError("CoeffTensor: dimensions must be >= 1");
        if (static_cast<int>(trunc_left_.size()) != d_left_ ||
            static_cast<int>(trunc_right_.size()) != d_right_)
            throw ValidationError("CoeffTensor: truncation lists must match dimensions");
        for (int t : trunc_left_)
            if (t < 0)
                throw ValidationError("CoeffTensor: truncations must be >= 0");
        for (int t : trunc_right_)
            if (t < 0)
                throw ValidationError("CoeffTensor: truncations must be >= 0");
    }

    /// Square d=1 convenience: orders 0..n on both sides.
    static CoeffTensor square1d(int n) { return CoeffTensor(1, 1, {n}, {n}); }

    int d_left() const { return d_left_; }
    int d_right() const { return d_right_; }
    const std::vector<int>& trunc_left() const { return trunc_left_; }
    const std::vector<int>& trunc_right() const { return trunc_right_; }

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const EntryMap& entries() const { return entries_; }

    void set(const MultiIndex& alpha, const MultiIndex& beta, Complex v) {
        check_key(alpha, beta);
        if (std::abs(v) < kDropThreshold) {
            entries_.erase({alpha, beta});
            return;
        }
        entries_[{alpha, beta}] = v;
    }

    void add(const MultiIndex& alpha, const MultiIndex& beta, Complex v) {
        check_key(alpha, beta);
        auto it = entries_.find({alpha, beta});
        Complex next = (it == entries_.end() ? Complex(0, 0) : it->second) + v;
        if (std::abs(next) < kDropThreshold) {
            if (it != entries_.end())
                entries_.erase(it);
        } else if (it != entries_.end()) {
            it->second = next;
        } else {
            entries_[{alpha, beta}] = next;
        }
    }

    Complex at(const MultiIndex& alpha, const MultiIndex& beta) const {
        auto it = entries_.find({alpha, beta});
        return it == entries_.end() ? Complex(0, 0) : it->second;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& [key, v] : entries_)
            m = std::max(m, std::abs(v));
        return m;
    }

    bool same_shape(const CoeffTensor& o) const {
        return d_left_ == o.d_left_ && d_right_ == o.d_right_ &&
               trunc_left_ == o.trunc_left_ && trunc_right_ == o.trunc_right_;
    }

private:
    void check_key(const MultiIndex& alpha, const MultiIndex& beta) const {
        if (alpha.dim() != d_left_ || beta.dim() != d_right_)
            throw ValidationError("CoeffTensor: index dimension mismatch");
        for (int k = 0; k < d_left_; ++k)
            if (alpha[k] > trunc_left_[static_cast<std::size_t>(k)])
                throw ValidationError("CoeffTensor: alpha beyond truncation");
        for (int k = 0; k < d_right_; ++k)
            if (beta[k] > trunc_right_[static_cast<std::size_t>(k)])
                throw ValidationError("CoeffTensor: beta beyond truncation");
    }

    int d_left_;
    int d_right_;
    std::vector<int> trunc_left_;
    std::vector<int> trunc_right_;
    EntryMap entries_;
};

/// Kernel composition int K_2(x,z) K_1(z,y) dz: by orthonormality this is the
/// coefficient matrix product (sum_gamma b_{alpha,gamma} c_{gamma,beta}).
inline CoeffTensor matmul(const CoeffTensor& a2, const CoeffTensor& a1) {
    if (a2.d_right() != a1.d_left() || a2.trunc_right() != a1.trunc_left())
        throw ValidationError("matmul: contracted index mismatch");

    // Group the right factor by its left index for the contraction.
    std::map<MultiIndex, std::vector<std::pair<const MultiIndex*, Complex>>> by_left;
    for (const auto& [key, v] : a1.entries())
        by_left[key.first].emplace_back(&key.second, v);

    CoeffTensor out(a2.d_left(), a1.d_right(), a2.trunc_left(), a1.trunc_right());
    std::map<CoeffTensor::Key, Complex> acc;
    for (const auto& [key, bval] : a2.entries()) {
        auto it = by_left.find(key.second);
        if (it == by_left.end())
            continue;
        for (const auto& [beta, cval] : it->second)
            acc[{key.first, *beta}] += bval * cval;
    }
    for (const auto& [key, v] : acc)
        out.set(key.first, key.second, v);
    return out;
}

/// Adjoint kernel: entries conj(a_{beta,alpha}) with sides swapped.
inline CoeffTensor adjoint(const CoeffTensor& a) {
    CoeffTensor out(a.d_right(), a.d_left(), a.trunc_right(), a.trunc_left());
    for (const auto& [key, v] : a.entries())
        out.set(key.second, key.first, std::conj(v));
    return out;
}

/// Largest |entry| difference relative to max(|A|, |B|, 1e-300)-scale:
/// used by reconstruction checks.
inline double max_rel_diff(const CoeffTensor& a, const CoeffTensor& b) {
    double scale = std::max(a.max_abs(), b.max_abs());
    if (scale == 0.0)
        return 0.0;
    double worst = 0.0;
    for (const auto& [key, v] : a.entries())
        worst = std::max(worst, std::abs(v - b.at(key.first, key.second)));
    for (const auto& [key, v] : b.entries())
        worst = std::max(worst, std::abs(v - a.at(key.first, key.second)));
    return worst / scale;
}

} // namespace hermop
