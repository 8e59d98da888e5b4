#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hermop/coeff_tensor.hpp"
#include "hermop/decay.hpp"

namespace hermop {

enum class Branch { Schwartz, Roumieu, Beurling };

inline const char* to_string(Branch b) {
    switch (b) {
    case Branch::Schwartz: return "schwartz";
    case Branch::Roumieu: return "roumieu";
    default: return "beurling";
    }
}

/// Threshold partition of the column indices: Theta_N is the largest |beta|
/// whose column still carries an entry above the N-th qualification
/// threshold, and the blocks I_1 = {|beta| <= Theta_1 + 1},
/// I_j = {beta not yet assigned : |beta| <= Theta_j + j} receive
/// block-dependent weights in the Beurling/Schwartz constructions.
struct Partition {
    std::vector<long> theta;         // theta[j-1] = Theta_j; -1 = empty scan
    std::map<MultiIndex, int> blocks; // every beta in the truncation box
    int jmax = 1;

    int block_of(const MultiIndex& beta) const {
        auto it = blocks.find(beta);
        if (it == blocks.end())
            throw ValidationError("Partition: index outside the truncation box");
        return it->second;
    }
};

/// Diagonal coefficient data of a Hermite diagonal operator; tensor_order is
/// the Hermite order of the pure tensor factor g when the dimensions differ.
struct HermiteDiagonal {
    std::map<MultiIndex, double> eigenvalues;
    std::optional<MultiIndex> tensor_order;
};

/// One factorization T = T_2 (B) composed with T_1 (C); C is a positive
/// Hermite diagonal by construction in every branch.
struct FactorPair {
    CoeffTensor B;
    CoeffTensor C;
    Branch branch;
    int d0 = 1;                            // inner dimension
    std::optional<double> r;               // Roumieu rate actually used
    std::optional<Partition> partition;    // Beurling/Schwartz block structure
    std::optional<MultiIndex> tensor_order; // set by the inner-dim extension
};

namespace detail {

// a * e^{logw}, falling back to log-domain when exp(logw) alone over/underflows.
inline Complex scale_by_exp(Complex a, double logw) {
    if (std::abs(logw) < 690.0)
        return a * std::exp(logw);
    const double mag = std::abs(a);
    if (mag == 0.0)
        return a;
    const double out = logw + std::log(mag);
    if (out > 709.0)
        throw NumericError("factorize: factor entry exceeds double range");
    return std::polar(std::exp(out), std::arg(a));
}

// Shared block induction on precomputed U(j) = Theta_j + j (Theta_1 + 1 for j=1).
inline Partition assign_blocks(std::vector<long> theta, const CoeffTensor& a, int jmax) {
    Partition part;
    part.theta = std::move(theta);
    part.jmax = jmax;
    for_each_index(a.trunc_right(), [&](const MultiIndex& beta) {
        const long n = beta.order();
        int block = jmax + 1; // residual block for indices beyond jmax
        for (int j = 1; j <= jmax; ++j) {
            const long cap = part.theta[static_cast<std::size_t>(j - 1)] + (j == 1 ? 1 : j);
            if (n <= cap) {
                block = j;
                break;
            }
        }
        part.blocks[beta] = block;
    });
    return part;
}

} // namespace detail

/// Theta_N / I_j partition with the exponential qualification threshold
/// |a_{alpha,beta}| >= e^{-2(N+1)(|alpha|^{1/2s}+|beta|^{1/2s})}.
/// Empty tensor: all Theta_N = -1 and a single block.
inline Partition theta_partition(const CoeffTensor& a, double s, int jmax) {
    require_gs_index(s);
    if (jmax < 1)
        throw ValidationError("theta_partition: jmax must be >= 1");

    if (a.empty()) {
        Partition part;
        part.theta.assign(static_cast<std::size_t>(jmax), -1);
        part.jmax = jmax;
        for_each_index(a.trunc_right(),
                       [&](const MultiIndex& beta) { part.blocks[beta] = 1; });
        return part;
    }

    std::vector<long> theta(static_cast<std::size_t>(jmax), -1);
    for (const auto& [key, v] : a.entries()) {
        const double w = index_weight(key.first, s) + index_weight(key.second, s);
        const double mag = std::abs(v);
        for (int n = 1; n <= jmax; ++n) {
            // exact >= comparison; exp underflow to 0 keeps the right verdict
            if (mag >= std::exp(-2.0 * (n + 1) * w))
                theta[static_cast<std::size_t>(n - 1)] =
                    std::max(theta[static_cast<std::size_t>(n - 1)],
                             static_cast<long>(key.second.order()));
        }
    }
    return detail::assign_blocks(std::move(theta), a, jmax);
}

/// Roumieu branch: B carries a_{alpha,beta} e^{r|beta|^{1/2s}} and C is the
/// positive diagonal e^{-r|beta|^{1/2s}} over the full truncation box, so the
/// composition restores A entry by entry.
inline FactorPair factorize_roumieu(const CoeffTensor& a, double s, double r) {
    require_gs_index(s);
    if (!(r > 0.0) || std::isinf(r))
        throw ValidationError("factorize_roumieu: rate r must be positive and finite");

    CoeffTensor b(a.d_left(), a.d_right(), a.trunc_left(), a.trunc_right());
    for (const auto& [key, v] : a.entries())
        b.set(key.first, key.second, detail::scale_by_exp(v, r * index_weight(key.second, s)));

    CoeffTensor c(a.d_right(), a.d_right(), a.trunc_right(), a.trunc_right());
    for_each_index(a.trunc_right(), [&](const MultiIndex& beta) {
        c.set(beta, beta, detail::scale_by_exp(Complex(1.0, 0.0), -r * index_weight(beta, s)));
    });

    FactorPair out{std::move(b), std::move(c), Branch::Roumieu, a.d_right(), r, {}, {}};
    return out;
}

/// Default rate: the fitted r_hat of the input (any rate validates the
/// construction; the estimate is the one the decay bound certifies).
inline FactorPair factorize_roumieu(const CoeffTensor& a, double s) {
    if (a.empty())
        throw ValidationError("factorize_roumieu: zero tensor");
    const double r_hat = estimate_decay(a, s).r_hat;
    const double r = (std::isfinite(r_hat) && r_hat > 0.0) ? r_hat : 1.0;
    return factorize_roumieu(a, s, r);
}

namespace detail {

// jmax large enough that U(jmax) covers the whole right box:
// U(j) >= j - 1, so the total right truncation order + 1 always suffices.
inline int covering_jmax(const CoeffTensor& a) {
    long total = 0;
    for (int t : a.trunc_right())
        total += t;
    return static_cast<int>(total) + 1;
}

} // namespace detail

/// Beurling branch: block-dependent weights e^{+-j|beta|^{1/2s}} on the
/// Theta/I_j partition. Exact reconstruction; the partition is attached.
inline FactorPair factorize_beurling(const CoeffTensor& a, double s) {
    if (!(s > 0.5))
        throw ValidationError("factorize_beurling: requires s > 1/2");
    if (a.empty())
        throw ValidationError("factorize_beurling: zero tensor");

    Partition part = theta_partition(a, s, detail::covering_jmax(a));

    CoeffTensor b(a.d_left(), a.d_right(), a.trunc_left(), a.trunc_right());
    for (const auto& [key, v] : a.entries()) {
        const int j = part.block_of(key.second);
        b.set(key.first, key.second,
              detail::scale_by_exp(v, j * index_weight(key.second, s)));
    }

    CoeffTensor c(a.d_right(), a.d_right(), a.trunc_right(), a.trunc_right());
    for (const auto& [beta, j] : part.blocks)
        c.set(beta, beta,
              detail::scale_by_exp(Complex(1.0, 0.0), -j * index_weight(beta, s)));

    FactorPair out{std::move(b), std::move(c), Branch::Beurling, a.d_right(), {},
                   std::move(part), {}};
    return out;
}

/// Schwartz branch: same block induction with polynomial weights <beta>^j and
/// qualification threshold <alpha>^{-2(N+1)} <beta>^{-2(N+1)}.
inline FactorPair factorize_schwartz(const CoeffTensor& a, int jmax = -1) {
    if (a.empty())
        throw ValidationError("factorize_schwartz: zero tensor");
    if (jmax < 0)
        jmax = detail::covering_jmax(a);
    if (jmax < 1)
        throw ValidationError("factorize_schwartz: jmax must be >= 1");

    auto bracket = [](const MultiIndex& m) {
        const double n = m.order();
        return std::sqrt(1.0 + n * n);
    };

    std::vector<long> theta(static_cast<std::size_t>(jmax), -1);
    for (const auto& [key, v] : a.entries()) {
        const double lw = std::log(bracket(key.first)) + std::log(bracket(key.second));
        const double mag = std::abs(v);
        for (int n = 1; n <= jmax; ++n) {
            if (mag >= std::exp(-2.0 * (n + 1) * lw))
                theta[static_cast<std::size_t>(n - 1)] =
                    std::max(theta[static_cast<std::size_t>(n - 1)],
                             static_cast<long>(key.second.order()));
        }
    }
    Partition part = detail::assign_blocks(std::move(theta), a, jmax);

    CoeffTensor b(a.d_left(), a.d_right(), a.trunc_left(), a.trunc_right());
    for (const auto& [key, v] : a.entries()) {
        const int j = part.block_of(key.second);
        b.set(key.first, key.second, detail::scale_by_exp(v, j * std::log(bracket(key.second))));
    }

    CoeffTensor c(a.d_right(), a.d_right(), a.trunc_right(), a.trunc_right());
    for (const auto& [beta, j] : part.blocks)
        c.set(beta, beta,
              detail::scale_by_exp(Complex(1.0, 0.0), -j * std::log(bracket(beta))));

    FactorPair out{std::move(b), std::move(c), Branch::Schwartz, a.d_right(), {},
                   std::move(part), {}};
    return out;
}

/// Tensor both factors with the order-0 Hermite function in d0 - d_inner
/// extra inner variables: C gains zero blocks on the left, B on the right;
/// the composition is unchanged since (h_{d,0}, h_{d,0}) = 1.
inline FactorPair extend_inner_dim(const FactorPair& pair, int d0) {
    const int cur = pair.C.d_left();
    if (d0 <= cur)
        throw ValidationError("extend_inner_dim: d0 must exceed the current inner dimension");
    const int extra = d0 - cur;
    const MultiIndex pad = MultiIndex::zeros(extra);

    std::vector<int> pad_trunc(static_cast<std::size_t>(extra), 0);

    std::vector<int> ctl = pair.C.trunc_left();
    ctl.insert(ctl.end(), pad_trunc.begin(), pad_trunc.end());
    CoeffTensor c(d0, pair.C.d_right(), ctl, pair.C.trunc_right());
    for (const auto& [key, v] : pair.C.entries())
        c.set(key.first.concat(pad), key.second, v);

    std::vector<int> btr = pair.B.trunc_right();
    btr.insert(btr.end(), pad_trunc.begin(), pad_trunc.end());
    CoeffTensor b(pair.B.d_left(), d0, pair.B.trunc_left(), btr);
    for (const auto& [key, v] : pair.B.entries())
        b.set(key.first, key.second.concat(pad), v);

    FactorPair out{std::move(b), std::move(c), pair.branch, d0, pair.r, pair.partition,
                   pad};
    return out;
}

/// True iff every stored entry sits on the diagonal (after stripping a fixed
/// pure tensor factor when d_left > d_right) with real eigenvalues >= -1e-14.
inline std::pair<bool, HermiteDiagonal> is_positive_hermite_diagonal(const CoeffTensor& c) {
    HermiteDiagonal diag;
    constexpr double kTol = 1e-14;

    if (c.d_left() < c.d_right())
        return {false, diag};
    const int strip = c.d_left() - c.d_right();

    bool first = true;
    for (const auto& [key, v] : c.entries()) {
        MultiIndex head = strip == 0 ? key.first : key.first.head(c.d_right());
        if (strip > 0) {
            MultiIndex tail = key.first.tail_from(c.d_right());
            if (first) {
                diag.tensor_order = tail;
            } else if (tail != *diag.tensor_order) {
                return {false, HermiteDiagonal{}};
            }
        }
        first = false;
        if (head != key.second)
            return {false, HermiteDiagonal{}};
        if (std::abs(v.imag()) > kTol || v.real() < -kTol)
            return {false, HermiteDiagonal{}};
        diag.eigenvalues[key.second] = v.real();
    }
    return {true, diag};
}

/// Repeated factorization of the left factor: returns K_N, ..., K_1 whose
/// chained composition reproduces the input; every right factor along the way
/// is a positive Hermite diagonal.
inline std::vector<CoeffTensor> factor_chain(const CoeffTensor& a, double s, int n_factors,
                                             Branch branch) {
    if (n_factors < 2)
        throw ValidationError("factor_chain: need at least 2 factors");

    std::vector<CoeffTensor> tail; // C_1, C_2, ... in production order
    CoeffTensor left = a;
    for (int step = 0; step + 1 < n_factors; ++step) {
        FactorPair pair = [&] {
            switch (branch) {
            case Branch::Roumieu: return factorize_roumieu(left, s);
            case Branch::Beurling: return factorize_beurling(left, s);
            default: return factorize_schwartz(left);
            }
        }();
        tail.push_back(std::move(pair.C));
        left = std::move(pair.B);
    }

    std::vector<CoeffTensor> chain;
    chain.reserve(static_cast<std::size_t>(n_factors));
    chain.push_back(std::move(left)); // K_N
    for (auto it = tail.rbegin(); it != tail.rend(); ++it)
        chain.push_back(std::move(*it));
    return chain;
}

/// Composition of a chain as returned by factor_chain (left to right).
inline CoeffTensor chain_product(const std::vector<CoeffTensor>& chain) {
    if (chain.empty())
        throw ValidationError("chain_product: empty chain");
    CoeffTensor acc = chain.front();
    for (std::size_t i = 1; i < chain.size(); ++i)
        acc = matmul(acc, chain[i]);
    return acc;
}

} // namespace hermop
