#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "hermop/coeff_tensor.hpp"
#include "hermop/factorize.hpp"
#include "hermop/fft.hpp"
#include "hermop/hermite.hpp"
#include "hermop/phase_grid.hpp"

namespace hermop {

namespace detail {

using CMat = Eigen::MatrixXcd;
using CMap = Eigen::Map<CMat>;
using CMapConst = Eigen::Map<const CMat>;

// axis1-fastest storage maps onto a column-major (n1, n2) matrix view.
inline CMapConst as_matrix(const std::vector<Complex>& v, int n1, int n2) {
    return CMapConst(v.data(), n1, n2);
}

inline void require_square(const PhaseGrid& grid, const char* who) {
    grid.validate();
    if (!(grid.axis1 == grid.axis2))
        throw ValidationError(std::string(who) + ": grid axes must be identical");
}

inline void require_window(bool adequate, const char* who) {
    if (!adequate)
        throw NumericError(std::string(who) +
                           ": window inadequate (boundary ring above 1e-10)");
}

// Difference-coordinate Fourier matrix E[m, kk] = e^{+-i k h xi_m} for
// k = kk - (n-1) in [-(n-1), n-1]. The z = x - y values of two grid points
// land exactly on this lattice, which is what makes the shear exact.
inline CMat lattice_fourier(const GridAxis& axis, double sign) {
    const int n = axis.n;
    const double h = axis.spacing();
    CMat e(n, 2 * n - 1);
    for (int m = 0; m < n; ++m) {
        const double xi = axis.point(m);
        for (int kk = 0; kk < 2 * n - 1; ++kk) {
            const int k = kk - (n - 1);
            e(m, kk) = std::polar(1.0, sign * k * h * xi);
        }
    }
    return e;
}

// Spectral translation of every column: column kk is resampled at
// x_i + delta(kk) via its trigonometric interpolant.
template <typename DeltaF>
void shift_columns(CMat& g, const GridAxis& axis, DeltaF&& delta) {
    const int n = axis.n;
    const double period = axis.max - axis.min;
    Fft1d fft(n);
    std::vector<Complex> col(static_cast<std::size_t>(n));
    for (int kk = 0; kk < g.cols(); ++kk) {
        const double d = delta(kk);
        if (d == 0.0)
            continue;
        for (int i = 0; i < n; ++i)
            col[static_cast<std::size_t>(i)] = g(i, kk);
        fft.forward(col.data());
        for (int p = 0; p < n; ++p)
            col[static_cast<std::size_t>(p)] *=
                std::polar(1.0 / n, signed_frequency(p, n, period) * d);
        fft.backward(col.data());
        for (int i = 0; i < n; ++i)
            g(i, kk) = col[static_cast<std::size_t>(i)];
    }
}

} // namespace detail

/// Kernel of Op_t(a): K(x,y) = (2 pi)^{-1/2} (F_2^{-1} a)((1-t)x + t y, x - y).
/// Realized as the exact z-lattice Fourier sum
///   G(x, kh) = (h / 2 pi) sum_m a(x, xi_m) e^{i k h xi_m}
/// followed by a per-diagonal spectral shift x -> x - t k h and the scatter
/// K(x_i, x_{i-k}) = G(x_i - t k h, k h).
inline GridKernel symbol_to_kernel(const GridSymbol& a, QuantParam t) {
    a.validate();
    detail::require_square(a.grid, "symbol_to_kernel");
    detail::require_window(a.window_adequate(), "symbol_to_kernel");

    const int n = a.grid.axis1.n;
    const double h = a.grid.axis1.spacing();

    detail::CMat g = detail::as_matrix(a.values, n, n) *
                     detail::lattice_fourier(a.grid.axis2, +1.0);
    g *= h / (2.0 * M_PI);

    detail::shift_columns(g, a.grid.axis1,
                          [&](int kk) { return -t.t * (kk - (n - 1)) * h; });

    GridKernel out;
    out.grid = PhaseGrid{a.grid.axis1, a.grid.axis1};
    out.values.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                      Complex(0.0, 0.0));
    for (int kk = 0; kk < 2 * n - 1; ++kk) {
        const int k = kk - (n - 1);
        const int i_lo = std::max(0, k), i_hi = std::min(n - 1, n - 1 + k);
        for (int i = i_lo; i <= i_hi; ++i)
            out.at(i, i - k) = g(i, kk);
    }
    return out;
}

/// Inverse of symbol_to_kernel: gather the difference coordinates
/// V(x_i, kh) = K(x_i, x_i - kh), undo the shear by the shift x -> x + t k h,
/// then a(x, xi) = h sum_k V_sheared(x, kh) e^{-i k h xi}.
inline GridSymbol kernel_to_symbol(const GridKernel& kern, QuantParam t) {
    kern.validate();
    detail::require_square(kern.grid, "kernel_to_symbol");
    detail::require_window(kern.window_adequate(), "kernel_to_symbol");

    const int n = kern.grid.axis1.n;
    const double h = kern.grid.axis1.spacing();

    detail::CMat v = detail::CMat::Zero(n, 2 * n - 1);
    for (int kk = 0; kk < 2 * n - 1; ++kk) {
        const int k = kk - (n - 1);
        const int i_lo = std::max(0, k), i_hi = std::min(n - 1, n - 1 + k);
        for (int i = i_lo; i <= i_hi; ++i)
            v(i, kk) = kern.at(i, i - k);
    }

    detail::shift_columns(v, kern.grid.axis1,
                          [&](int kk) { return t.t * (kk - (n - 1)) * h; });

    detail::CMat a = v * detail::lattice_fourier(kern.grid.axis1, -1.0).transpose();
    a *= h;

    GridSymbol out;
    out.grid = kern.grid;
    out.values.assign(a.data(), a.data() + a.size());
    return out;
}

/// Quantization change Op_s(a) = Op_t(b): a Fourier multiplier on the full
/// symbol transform. With the e^{-i<x,eta>} transform convention the
/// multiplier consistent with the kernel formula is e^{i(s-t) eta zeta}
/// (check: Weyl xi*x has Kohn-Nirenberg form xi*x - i/2).
inline GridSymbol change_quantization(const GridSymbol& a, QuantParam from_s,
                                      QuantParam to_t) {
    a.validate();
    detail::require_window(a.window_adequate(), "change_quantization");
    if (from_s.t == to_t.t)
        return a;

    const int n1 = a.grid.axis1.n, n2 = a.grid.axis2.n;
    const double l1 = a.grid.axis1.max - a.grid.axis1.min;
    const double l2 = a.grid.axis2.max - a.grid.axis2.min;
    const double coef = from_s.t - to_t.t;

    GridSymbol out = a;
    Fft2d fft(n1, n2);
    fft.forward(out.values.data());
    for (int q = 0; q < n2; ++q) {
        const double zeta = signed_frequency(q, n2, l2);
        for (int p = 0; p < n1; ++p) {
            const double eta = signed_frequency(p, n1, l1);
            out.values[static_cast<std::size_t>(p) +
                       static_cast<std::size_t>(n1) * static_cast<std::size_t>(q)] *=
                std::polar(1.0 / (static_cast<double>(n1) * n2), coef * eta * zeta);
        }
    }
    fft.backward(out.values.data());
    return out;
}

/// Composition of kernels by grid quadrature: (K_a * K_b)(x,y) =
/// h sum_l K_a(x, z_l) K_b(z_l, y).
inline GridKernel compose_kernels(const GridKernel& ka, const GridKernel& kb) {
    ka.validate();
    kb.validate();
    if (!(ka.grid == kb.grid))
        throw ValidationError("compose_kernels: grid mismatch");
    detail::require_square(ka.grid, "compose_kernels");
    const int n = ka.grid.axis1.n;
    const double h = ka.grid.axis1.spacing();

    detail::CMat prod = detail::as_matrix(ka.values, n, n) *
                        detail::as_matrix(kb.values, n, n);
    prod *= h;

    GridKernel out;
    out.grid = ka.grid;
    out.values.assign(prod.data(), prod.data() + prod.size());
    return out;
}

/// Sharp product via the kernel route: Op_t(a #_t b) = Op_t(a) Op_t(b).
inline GridSymbol sharp(const GridSymbol& a, const GridSymbol& b, QuantParam t) {
    if (!(a.grid == b.grid))
        throw ValidationError("sharp: grid mismatch");
    const GridKernel ka = symbol_to_kernel(a, t);
    const GridKernel kb = symbol_to_kernel(b, t);
    return kernel_to_symbol(compose_kernels(ka, kb), t);
}

namespace detail {

// Basis table H[i, a] = h_a(x_i) on the grid axis.
inline CMat basis_table(const GridAxis& axis, int n_trunc) {
    CMat h(axis.n, n_trunc + 1);
    for (int i = 0; i < axis.n; ++i) {
        auto row = hermite_eval_all(n_trunc, axis.point(i));
        for (int a = 0; a <= n_trunc; ++a)
            h(i, a) = Complex(row[static_cast<std::size_t>(a)], 0.0);
    }
    return h;
}

} // namespace detail

/// Hermite coefficients of a grid kernel by trapezoid quadrature on the grid:
/// a_{alpha,beta} = h_x h_y sum_{i,j} K(x_i, y_j) h_alpha(x_i) h_beta(y_j).
/// Spectrally accurate for window-adequate kernels. Coefficients below
/// noise_floor_rel * max|a| are quadrature noise, not signal, and are dropped
/// so that downstream decay estimates are not driven by roundoff.
inline CoeffTensor kernel_grid_to_coeffs(const GridKernel& kern, const HermiteBasis& basis,
                                         double noise_floor_rel = 1e-14) {
    kern.validate();
    if (basis.dim != 1)
        throw ValidationError("kernel_grid_to_coeffs: 1-D basis per side expected");
    const int n_trunc = basis.trunc[0];

    const detail::CMat hx = detail::basis_table(kern.grid.axis1, n_trunc);
    const detail::CMat hy = detail::basis_table(kern.grid.axis2, n_trunc);
    const detail::CMat coeffs =
        kern.grid.axis1.spacing() * kern.grid.axis2.spacing() *
        (hx.transpose() *
         detail::as_matrix(kern.values, kern.grid.axis1.n, kern.grid.axis2.n) * hy);

    const double floor = noise_floor_rel * coeffs.cwiseAbs().maxCoeff();
    CoeffTensor out(1, 1, {n_trunc}, {n_trunc});
    for (int a = 0; a <= n_trunc; ++a)
        for (int b = 0; b <= n_trunc; ++b)
            if (std::abs(coeffs(a, b)) >= floor)
                out.set(MultiIndex{a}, MultiIndex{b}, coeffs(a, b));
    return out;
}

/// Kernel grid samples of a d=1 coefficient tensor:
/// K(x_i, y_j) = sum a_{alpha,beta} h_alpha(x_i) h_beta(y_j).
inline GridKernel coeffs_to_kernel_grid(const CoeffTensor& a, const PhaseGrid& grid) {
    grid.validate();
    if (a.d_left() != 1 || a.d_right() != 1)
        throw ValidationError("coeffs_to_kernel_grid: d=1 tensor expected");

    const int nl = a.trunc_left()[0], nr = a.trunc_right()[0];
    detail::CMat dense = detail::CMat::Zero(nl + 1, nr + 1);
    for (const auto& [key, v] : a.entries())
        dense(key.first[0], key.second[0]) = v;

    const detail::CMat hx = detail::basis_table(grid.axis1, nl);
    const detail::CMat hy = detail::basis_table(grid.axis2, nr);
    const detail::CMat k = hx * dense * hy.transpose();

    GridKernel out;
    out.grid = grid;
    out.values.assign(k.data(), k.data() + k.size());
    return out;
}

/// Symbol factorization a = a_1 #_t a_2 through the Hermite bridge: quantize
/// to a kernel, factorize its coefficient tensor, map both factors back.
struct SymbolFactorization {
    GridSymbol a1; // symbol of the left factor B
    GridSymbol a2; // symbol of the positive Hermite diagonal factor C
    FactorPair pair;
};

inline SymbolFactorization factorize_symbol(const GridSymbol& a, QuantParam t,
                                            double s_index, Branch branch,
                                            int bridge_trunc = 32) {
    const GridKernel kern = symbol_to_kernel(a, t);
    const CoeffTensor coeffs = kernel_grid_to_coeffs(kern, HermiteBasis(1, bridge_trunc));
    if (coeffs.empty())
        throw ValidationError("factorize_symbol: zero tensor");

    FactorPair pair = [&] {
        switch (branch) {
        case Branch::Roumieu: return factorize_roumieu(coeffs, s_index);
        case Branch::Beurling: return factorize_beurling(coeffs, s_index);
        default: return factorize_schwartz(coeffs);
        }
    }();

    SymbolFactorization out{kernel_to_symbol(coeffs_to_kernel_grid(pair.B, a.grid), t),
                            kernel_to_symbol(coeffs_to_kernel_grid(pair.C, a.grid), t),
                            std::move(pair)};
    return out;
}

} // namespace hermop
