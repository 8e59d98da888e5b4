#pragma once

#include <cmath>
#include <cstdlib>
#include <span>
#include <vector>

#include "hermop/errors.hpp"
#include "hermop/multi_index.hpp"

namespace hermop {

// pi^{-1/4}: value of h_0 at the origin.
inline constexpr double kPiQuarterInv = 0.7511255444649425;

/// Hermite function value in scaled form v = mantissa * 2^exponent.
/// Keeps the recurrence alive where the Gaussian prefactor e^{-x^2/2}
/// underflows a plain double before the polynomial growth catches up.
struct ScaledValue {
    double mantissa = 0.0;
    long exponent = 0;

    double value() const {
        if (mantissa == 0.0)
            return 0.0;
        if (exponent > 3000)
            return mantissa > 0 ? HUGE_VAL : -HUGE_VAL;
        if (exponent < -3000)
            return 0.0;
        return std::ldexp(mantissa, static_cast<int>(exponent));
    }
};

namespace detail {

// Renormalization threshold; powers of two keep rescaling exact.
inline constexpr double kScaleHi = 0x1p200;
inline constexpr double kScaleLo = 0x1p-200;

inline void renormalize(double& cur, double& prev, long& expo) {
    double acur = std::abs(cur), aprev = std::abs(prev);
    double m = acur > aprev ? acur : aprev;
    if (m > kScaleHi) {
        cur *= kScaleLo;
        prev *= kScaleLo;
        expo += 200;
    } else if (m > 0.0 && m < kScaleLo) {
        cur /= kScaleLo;
        prev /= kScaleLo;
        expo -= 200;
    }
}

} // namespace detail

/// All of h_0(x)..h_n(x) by the stable three-term recurrence
///   h_{k+1}(x) = sqrt(2/(k+1)) x h_k(x) - sqrt(k/(k+1)) h_{k-1}(x),
/// run on (mantissa, base-2 exponent) pairs. The shared exponent makes the
/// rescaling exact, so parity h_k(-x) = (-1)^k h_k(x) holds bit-for-bit.
inline std::vector<ScaledValue> hermite_eval_scaled_all(int n, double x) {
    if (n < 0)
        throw ValidationError("hermite_eval: order must be >= 0");
    if (!std::isfinite(x))
        throw ValidationError("hermite_eval: x must be finite");

    // h_0(x) = pi^{-1/4} e^{-x^2/2}, split as mantissa * 2^expo.
    const double g = -0.5 * x * x;
    const double e_real = g / M_LN2;
    long expo = static_cast<long>(std::floor(e_real));
    double cur = kPiQuarterInv * std::exp(g - static_cast<double>(expo) * M_LN2);
    double prev = 0.0;

    std::vector<ScaledValue> out(static_cast<std::size_t>(n) + 1);
    out[0] = {cur, expo};
    for (int k = 0; k < n; ++k) {
        const double a = std::sqrt(2.0 / (k + 1));
        const double b = std::sqrt(static_cast<double>(k) / (k + 1));
        double next = a * x * cur - b * prev;
        prev = cur;
        cur = next;
        detail::renormalize(cur, prev, expo);
        out[static_cast<std::size_t>(k) + 1] = {cur, expo};
    }
    return out;
}

inline ScaledValue hermite_eval_scaled(int n, double x) {
    return hermite_eval_scaled_all(n, x).back();
}

/// h_n(x) for the L^2-normalized Hermite function (pi^{-1/4} prefactor).
inline double hermite_eval(int n, double x) {
    return hermite_eval_scaled(n, x).value();
}

/// h_0(x)..h_n(x) as plain doubles (grid/basis tables).
inline std::vector<double> hermite_eval_all(int n, double x) {
    auto scaled = hermite_eval_scaled_all(n, x);
    std::vector<double> out(scaled.size());
    for (std::size_t k = 0; k < scaled.size(); ++k)
        out[k] = scaled[k].value();
    return out;
}

/// Tensor Hermite function h_{d,alpha}(x) = prod_k h_{alpha_k}(x_k).
inline double hermite_eval_multi(const MultiIndex& alpha, std::span<const double> x) {
    if (alpha.dim() != static_cast<int>(x.size()))
        throw ValidationError("hermite_eval_multi: dimension mismatch");
    double m = 1.0;
    long e = 0;
    for (int k = 0; k < alpha.dim(); ++k) {
        ScaledValue v = hermite_eval_scaled(alpha[k], x[static_cast<std::size_t>(k)]);
        m *= v.mantissa;
        e += v.exponent;
        int adj = 0;
        m = std::frexp(m, &adj);
        e += adj;
    }
    return ScaledValue{m, e}.value();
}

/// Truncated tensor basis {h_alpha : alpha_k <= trunc_k}, orders 0..N per axis.
struct HermiteBasis {
    int dim = 1;
    std::vector<int> trunc; // per-axis truncation N

    HermiteBasis(int d, int n_per_axis)
        : dim(d), trunc(static_cast<std::size_t>(d), n_per_axis) {
        validate();
    }
    HermiteBasis(int d, std::vector<int> per_axis) : dim(d), trunc(std::move(per_axis)) {
        validate();
    }

    std::size_t size() const { return box_size(trunc); }

    void validate() const {
        if (dim < 1 || static_cast<int>(trunc.size()) != dim)
            throw ValidationError("HermiteBasis: bad dimension");
        for (int t : trunc)
            if (t < 0)
                throw ValidationError("HermiteBasis: truncation must be >= 0");
    }
};

} // namespace hermop
