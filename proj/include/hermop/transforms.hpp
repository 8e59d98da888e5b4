#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "hermop/errors.hpp"
#include "hermop/hermite.hpp"
#include "hermop/multi_index.hpp"
#include "hermop/quadrature.hpp"

namespace hermop {

using Complex = std::complex<double>;

/// Dense coefficient vector over a truncated tensor Hermite basis,
/// flattened lexicographically (last axis fastest).
class CoeffVector {
public:
    explicit CoeffVector(HermiteBasis basis)
        : basis_(std::move(basis)), values_(basis_.size(), Complex(0.0, 0.0)) {}

    const HermiteBasis& basis() const { return basis_; }
    std::size_t size() const { return values_.size(); }

    Complex& operator[](std::size_t flat) { return values_[flat]; }
    const Complex& operator[](std::size_t flat) const { return values_[flat]; }

    std::size_t flat_index(const MultiIndex& alpha) const {
        if (alpha.dim() != basis_.dim)
            throw ValidationError("CoeffVector: index dimension mismatch");
        std::size_t idx = 0;
        for (int k = 0; k < basis_.dim; ++k) {
            const int t = basis_.trunc[static_cast<std::size_t>(k)];
            if (alpha[k] > t)
                throw ValidationError("CoeffVector: index beyond truncation");
            idx = idx * static_cast<std::size_t>(t + 1) + static_cast<std::size_t>(alpha[k]);
        }
        return idx;
    }

    Complex& at(const MultiIndex& alpha) { return values_[flat_index(alpha)]; }
    const Complex& at(const MultiIndex& alpha) const { return values_[flat_index(alpha)]; }

    double l2_norm() const {
        double s = 0.0;
        for (const Complex& v : values_)
            s += std::norm(v);
        return std::sqrt(s);
    }

    const std::vector<Complex>& values() const { return values_; }
    std::vector<Complex>& values() { return values_; }

private:
    HermiteBasis basis_;
    std::vector<Complex> values_;
};

namespace detail {

// Per-axis contraction matrix B[a][i] = w_i e^{x_i^2} h_a(x_i). The e^{x_i^2}
// factor undoes the Gauss-Hermite weight so that (f, h_a) is integrated for
// integrands that carry their own Gaussian decay; the rule supplies the
// compensated weight in its stable Christoffel form.
inline std::vector<double> analysis_matrix(int n_trunc, const QuadratureRule& rule) {
    const int n = rule.order();
    std::vector<double> B(static_cast<std::size_t>(n_trunc + 1) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double comp = rule.compensated_weight(i);
        auto h = hermite_eval_all(n_trunc, rule.nodes[static_cast<std::size_t>(i)]);
        for (int a = 0; a <= n_trunc; ++a)
            B[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] =
                comp * h[static_cast<std::size_t>(a)];
    }
    return B;
}

// Contract the leading axis of V (shape (n, m)) with B (shape (rows, n)),
// appending the result axis at the back: out[j*rows + a] = sum_i B[a,i] V[i*m + j].
inline std::vector<Complex> contract_leading(const std::vector<Complex>& V, std::size_t n,
                                             std::size_t m, const std::vector<double>& B,
                                             std::size_t rows) {
    std::vector<Complex> out(m * rows, Complex(0.0, 0.0));
    for (std::size_t a = 0; a < rows; ++a) {
        const double* brow = B.data() + a * n;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = brow[i];
            if (w == 0.0)
                continue;
            const Complex* vrow = V.data() + i * m;
            Complex* orow = out.data();
            for (std::size_t j = 0; j < m; ++j)
                orow[j * rows + a] += w * vrow[j];
        }
    }
    return out;
}

} // namespace detail

/// Forward Hermite transform: c_alpha = (f, h_alpha)_{L^2} by tensorized
/// Gauss-Hermite quadrature. `samples` holds f at the tensor nodes of `rule`,
/// flattened with the last axis fastest. Requires rule order >= N+1 per axis.
inline CoeffVector analyze_samples(const std::vector<Complex>& samples, const HermiteBasis& basis,
                                   const QuadratureRule& rule) {
    const std::size_t n = static_cast<std::size_t>(rule.order());
    for (int t : basis.trunc)
        if (rule.order() < t + 1)
            throw ValidationError("analyze: rule too small for requested truncation");
    std::size_t expect = 1;
    for (int k = 0; k < basis.dim; ++k)
        expect *= n;
    if (samples.size() != expect)
        throw ValidationError("analyze: sample count does not match tensor rule");

    std::vector<Complex> V = samples;
    std::size_t lead = n;
    std::size_t rest = expect / n;
    for (int k = 0; k < basis.dim; ++k) {
        const int t = basis.trunc[static_cast<std::size_t>(k)];
        auto B = detail::analysis_matrix(t, rule);
        V = detail::contract_leading(V, lead, rest, B, static_cast<std::size_t>(t + 1));
        // shape is now (remaining axes..., coefficient axes...); next axis leads
        if (k + 1 < basis.dim) {
            rest = rest / n * static_cast<std::size_t>(t + 1);
            lead = n;
        }
    }
    CoeffVector out(basis);
    out.values() = std::move(V);
    return out;
}

/// Forward transform of a callable f(x), x a d-vector.
template <typename F>
CoeffVector analyze(F&& f, const HermiteBasis& basis, const QuadratureRule& rule) {
    const std::size_t n = static_cast<std::size_t>(rule.order());
    std::size_t total = 1;
    for (int k = 0; k < basis.dim; ++k)
        total *= n;

    std::vector<Complex> samples(total);
    std::vector<double> x(static_cast<std::size_t>(basis.dim));
    std::vector<std::size_t> idx(static_cast<std::size_t>(basis.dim), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int k = basis.dim - 1; k >= 0; --k) {
            idx[static_cast<std::size_t>(k)] = rem % n;
            rem /= n;
        }
        for (int k = 0; k < basis.dim; ++k)
            x[static_cast<std::size_t>(k)] = rule.nodes[idx[static_cast<std::size_t>(k)]];
        samples[flat] = Complex(f(std::span<const double>(x)));
    }
    return analyze_samples(samples, basis, rule);
}

/// Pointwise synthesis sum_alpha c_alpha h_alpha(x).
inline Complex synthesize(const CoeffVector& c, std::span<const double> x) {
    const HermiteBasis& basis = c.basis();
    if (static_cast<int>(x.size()) != basis.dim)
        throw ValidationError("synthesize: point dimension mismatch");

    std::vector<std::vector<double>> tables(static_cast<std::size_t>(basis.dim));
    for (int k = 0; k < basis.dim; ++k)
        tables[static_cast<std::size_t>(k)] =
            hermite_eval_all(basis.trunc[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(k)]);

    Complex acc(0.0, 0.0);
    std::size_t flat = 0;
    for_each_index(basis.trunc, [&](const MultiIndex& alpha) {
        double prod = 1.0;
        for (int k = 0; k < basis.dim; ++k)
            prod *= tables[static_cast<std::size_t>(k)][static_cast<std::size_t>(alpha[k])];
        acc += c[flat++] * prod;
    });
    return acc;
}

/// Synthesis on a list of 1-D points.
inline std::vector<Complex> synthesize_grid(const CoeffVector& c, std::span<const double> xs) {
    if (c.basis().dim != 1)
        throw ValidationError("synthesize_grid: 1-D coefficient vector expected");
    const int n_trunc = c.basis().trunc[0];
    std::vector<Complex> out(xs.size(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto h = hermite_eval_all(n_trunc, xs[i]);
        Complex acc(0.0, 0.0);
        for (int a = 0; a <= n_trunc; ++a)
            acc += c[static_cast<std::size_t>(a)] * h[static_cast<std::size_t>(a)];
        out[i] = acc;
    }
    return out;
}

/// Exact Fourier action on coefficients: c_alpha -> (-i)^{|alpha|} c_alpha.
inline CoeffVector fourier_coeffs(const CoeffVector& c) {
    static const Complex powers[4] = {Complex(1, 0), Complex(0, -1), Complex(-1, 0),
                                      Complex(0, 1)};
    CoeffVector out(c.basis());
    std::size_t flat = 0;
    for_each_index(c.basis().trunc, [&](const MultiIndex& alpha) {
        out[flat] = powers[alpha.order() % 4] * c[flat];
        ++flat;
    });
    return out;
}

} // namespace hermop
