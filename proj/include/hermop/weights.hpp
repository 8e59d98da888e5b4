#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "hermop/errors.hpp"
#include "hermop/multi_index.hpp"

namespace hermop {

/// Basis weights w_alpha = ||h_alpha||_H of a Hermite-type Hilbert space.
/// Keys are canonicalized to sorted order, so the permutation symmetry
/// w_alpha = w_{pi(alpha)} required of Hermite-type spaces holds by
/// construction. Unset indices default to weight 1.
class HermiteWeight {
public:
    explicit HermiteWeight(int dim) : dim_(dim) {
        if (dim_ < 1)
            throw ValidationError("HermiteWeight: dimension must be >= 1");
    }

    int dim() const { return dim_; }

    void set(const MultiIndex& alpha, double w) {
        if (alpha.dim() != dim_)
            throw ValidationError("HermiteWeight: index dimension mismatch");
        if (!(w > 0.0))
            throw ValidationError("HermiteWeight: weights must be positive");
        const MultiIndex key = canonical(alpha);
        auto it = weights_.find(key);
        if (it != weights_.end() && it->second != w)
            throw ValidationError("HermiteWeight: conflicting weight for a permutation class");
        weights_[key] = w;
    }

    double at(const MultiIndex& alpha) const {
        if (alpha.dim() != dim_)
            throw ValidationError("HermiteWeight: index dimension mismatch");
        auto it = weights_.find(canonical(alpha));
        return it == weights_.end() ? 1.0 : it->second;
    }

    const std::map<MultiIndex, double>& stored() const { return weights_; }

private:
    static MultiIndex canonical(const MultiIndex& alpha) {
        std::vector<int> e = alpha.entries();
        std::sort(e.begin(), e.end());
        return MultiIndex(std::move(e));
    }

    int dim_;
    std::map<MultiIndex, double> weights_;
};

} // namespace hermop
