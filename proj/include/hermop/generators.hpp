#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hermop/coeff_tensor.hpp"
#include "hermop/decay.hpp"
#include "hermop/phase_grid.hpp"

namespace hermop {

/// Diagonal heat-semigroup kernel sum_n e^{-(2n+1) tau} h_n (x) h_n.
/// The suite's closed-form reference: sigma_j = e^{-(2j-1) tau}.
inline CoeffTensor mehler_tensor(double tau, int n_trunc) {
    if (!(tau > 0.0))
        throw ValidationError("mehler_tensor: tau must be positive");
    CoeffTensor out = CoeffTensor::square1d(n_trunc);
    for (int n = 0; n <= n_trunc; ++n)
        out.set(MultiIndex{n}, MultiIndex{n}, Complex(std::exp(-(2.0 * n + 1.0) * tau), 0.0));
    return out;
}

/// Single coefficient 1 at (alpha, beta); the truncation box is the index itself.
inline CoeffTensor rank_one_tensor(const MultiIndex& alpha, const MultiIndex& beta) {
    CoeffTensor out(alpha.dim(), beta.dim(), alpha.entries(), beta.entries());
    out.set(alpha, beta, Complex(1.0, 0.0));
    return out;
}

namespace detail {

// Portable uniform doubles from raw engine bits; the standard library
// distributions are implementation-defined, which would break the
// byte-identical generation contract.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace detail

/// Dense seeded tensor a_{alpha,beta} = u_{alpha,beta} e^{-r(|alpha|^{1/2s}+|beta|^{1/2s})}
/// with u uniform on the complex unit disk; entries enumerated in the
/// canonical lexicographic order so identical seeds give identical tensors.
inline CoeffTensor random_gs_tensor(int n_trunc, int d, double s, double r,
                                    std::uint64_t seed) {
    require_gs_index(s);
    if (!(r > 0.0))
        throw ValidationError("random_gs_tensor: rate r must be positive");
    if (n_trunc < 0 || d < 1)
        throw ValidationError("random_gs_tensor: bad truncation or dimension");

    const std::vector<int> trunc(static_cast<std::size_t>(d), n_trunc);
    const std::size_t box = box_size(trunc);
    if (box * box > 2'000'000)
        throw ValidationError("random_gs_tensor: requested tensor too large");

    std::mt19937_64 rng(seed);
    CoeffTensor out(d, d, trunc, trunc);
    for_each_index(trunc, [&](const MultiIndex& alpha) {
        const double wa = index_weight(alpha, s);
        for_each_index(trunc, [&](const MultiIndex& beta) {
            const double mag = std::sqrt(detail::uniform01(rng));
            const double phase = 2.0 * M_PI * detail::uniform01(rng);
            const double decay = std::exp(-r * (wa + index_weight(beta, s)));
            out.set(alpha, beta, std::polar(mag * decay, phase));
        });
    });
    return out;
}

/// Weyl symbol 2 e^{-(x^2 + xi^2)} of the rank-one projector onto h_0.
inline GridSymbol projector_symbol(const PhaseGrid& grid) {
    grid.validate();
    GridSymbol out;
    out.grid = grid;
    out.values.resize(static_cast<std::size_t>(grid.axis1.n) *
                      static_cast<std::size_t>(grid.axis2.n));
    for (int m = 0; m < grid.axis2.n; ++m) {
        const double xi = grid.axis2.point(m);
        for (int i = 0; i < grid.axis1.n; ++i) {
            const double x = grid.axis1.point(i);
            out.at(i, m) = Complex(2.0 * std::exp(-(x * x + xi * xi)), 0.0);
        }
    }
    return out;
}

/// Shifted anisotropic Gaussian amp e^{-qx (x-cx)^2 - qxi (xi-cxi)^2}.
inline GridSymbol gaussian_symbol(const PhaseGrid& grid, double amp, double qx, double qxi,
                                  double cx, double cxi) {
    grid.validate();
    GridSymbol out;
    out.grid = grid;
    out.values.resize(static_cast<std::size_t>(grid.axis1.n) *
                      static_cast<std::size_t>(grid.axis2.n));
    for (int m = 0; m < grid.axis2.n; ++m) {
        const double dxi = grid.axis2.point(m) - cxi;
        for (int i = 0; i < grid.axis1.n; ++i) {
            const double dx = grid.axis1.point(i) - cx;
            out.at(i, m) = Complex(amp * std::exp(-qx * dx * dx - qxi * dxi * dxi), 0.0);
        }
    }
    return out;
}

} // namespace hermop
