#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hermop/coeff_tensor.hpp"
#include "hermop/transforms.hpp"

namespace hermop {

/// |alpha|^{1/(2s)}: the exponent weight of the coefficient estimates.
inline double index_weight(const MultiIndex& alpha, double s) {
    const int n = alpha.order();
    if (n == 0)
        return 0.0;
    return std::pow(static_cast<double>(n), 1.0 / (2.0 * s));
}

inline void require_gs_index(double s) {
    if (!(s >= 0.5))
        throw ValidationError("Gelfand-Shilov index s must be >= 1/2");
}

/// sup over stored entries of |a_{alpha,beta}| e^{r(|alpha|^{1/2s}+|beta|^{1/2s})}.
/// 0 for the empty tensor; may overflow to +inf for large r.
inline double check_bound(const CoeffTensor& a, double s, double r) {
    require_gs_index(s);
    double sup = 0.0;
    for (const auto& [key, v] : a.entries()) {
        const double w = index_weight(key.first, s) + index_weight(key.second, s);
        sup = std::max(sup, std::abs(v) * std::exp(r * w));
    }
    return sup;
}

/// Fitted exponential decay profile of a coefficient tensor at index s.
struct DecayProfile {
    double s = 0.5;
    double r_hat = 0.0; // +inf when only the (0,0) entry constrains nothing
    double bound = 0.0; // sup |a| e^{r_hat (...)}
    std::size_t n_entries = 0;
    double regression_rate = 0.0; // least-squares slope, diagnostic only

    bool r_hat_infinite() const { return std::isinf(r_hat); }
};

/// Conservative min-ratio estimator: the largest r with
/// |a_{alpha,beta}| <= max|a| * e^{-r(|alpha|^{1/2s}+|beta|^{1/2s})} for every
/// stored entry. The (0,0) entry carries weight 0 and never constrains.
inline DecayProfile estimate_decay(const CoeffTensor& a, double s) {
    require_gs_index(s);
    if (a.empty())
        throw ValidationError("estimate_decay: zero tensor");

    const double big = a.max_abs();
    const double log_big = std::log(big);

    DecayProfile out;
    out.s = s;
    out.n_entries = a.size();

    double r_hat = std::numeric_limits<double>::infinity();
    double sw = 0, sl = 0, sww = 0, swl = 0;
    std::size_t m = 0;
    for (const auto& [key, v] : a.entries()) {
        const double w = index_weight(key.first, s) + index_weight(key.second, s);
        if (w == 0.0)
            continue;
        const double ratio = (log_big - std::log(std::abs(v))) / w;
        r_hat = std::min(r_hat, ratio);
        const double l = std::log(std::abs(v));
        sw += w;
        sl += l;
        sww += w * w;
        swl += w * l;
        ++m;
    }
    out.r_hat = r_hat;
    if (m >= 2 && sww * static_cast<double>(m) - sw * sw > 0)
        out.regression_rate = -(swl * static_cast<double>(m) - sw * sl) /
                              (sww * static_cast<double>(m) - sw * sw);
    out.bound = std::isinf(r_hat) ? big : check_bound(a, s, r_hat);
    return out;
}

enum class SpaceTag { Schwartz, Roumieu, Beurling, Dual, Indeterminate };
enum class ClassifyMode { Schwartz, Roumieu, Beurling, Dual };

/// Finite-truncation classification verdict. Membership in the function
/// classes is undecidable from finitely many coefficients, so the tag is a
/// heuristic and the diagnostics carry the evidence.
struct SpaceClass {
    SpaceTag tag = SpaceTag::Indeterminate;
    double s = 0.5;
    double t_or_r = 0.0; // fitted rate (Roumieu/Beurling) or polynomial order
    std::string reason;
    std::map<std::string, double> diagnostics;
};

inline const char* to_string(SpaceTag tag) {
    switch (tag) {
    case SpaceTag::Schwartz: return "schwartz";
    case SpaceTag::Roumieu: return "roumieu";
    case SpaceTag::Beurling: return "beurling";
    case SpaceTag::Dual: return "dual";
    default: return "indeterminate";
    }
}

namespace detail {

// Restriction to the sub-box with per-axis truncation halved.
inline CoeffTensor restrict_half(const CoeffTensor& a) {
    std::vector<int> tl = a.trunc_left(), tr = a.trunc_right();
    for (int& t : tl)
        t /= 2;
    for (int& t : tr)
        t /= 2;
    CoeffTensor out(a.d_left(), a.d_right(), tl, tr);
    for (const auto& [key, v] : a.entries()) {
        bool inside = true;
        for (int k = 0; k < a.d_left() && inside; ++k)
            inside = key.first[k] <= tl[static_cast<std::size_t>(k)];
        for (int k = 0; k < a.d_right() && inside; ++k)
            inside = key.second[k] <= tr[static_cast<std::size_t>(k)];
        if (inside)
            out.set(key.first, key.second, v);
    }
    return out;
}

struct LogLogFit {
    double order = 0.0; // |a| ~ <(alpha,beta)>^{-order}
    double r2 = 0.0;
    bool ok = false;
};

inline LogLogFit fit_polynomial_order(const CoeffTensor& a) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    std::size_t m = 0;
    for (const auto& [key, v] : a.entries()) {
        const double na = key.first.order(), nb = key.second.order();
        const double x = 0.5 * std::log(1.0 + na * na + nb * nb);
        const double y = std::log(std::abs(v));
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
        ++m;
    }
    LogLogFit fit;
    if (m < 3)
        return fit;
    const double dm = static_cast<double>(m);
    const double vxx = sxx - sx * sx / dm;
    const double vyy = syy - sy * sy / dm;
    const double vxy = sxy - sx * sy / dm;
    if (vxx <= 0)
        return fit;
    fit.order = -vxy / vxx;
    fit.r2 = vyy > 0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    fit.ok = true;
    return fit;
}

} // namespace detail

/// Tagged membership heuristic per the Hermite-coefficient characterizations;
/// requires truncation >= 8 per axis for a meaningful verdict.
inline SpaceClass classify(const CoeffTensor& a, double s, ClassifyMode mode) {
    require_gs_index(s);
    SpaceClass out;
    out.s = s;
    if (a.empty()) {
        out.reason = "empty";
        return out;
    }
    int min_trunc = std::numeric_limits<int>::max();
    for (int t : a.trunc_left())
        min_trunc = std::min(min_trunc, t);
    for (int t : a.trunc_right())
        min_trunc = std::min(min_trunc, t);
    if (min_trunc < 8) {
        out.reason = "truncation below 8 per axis";
        return out;
    }

    constexpr double kRateTol = 1e-9;
    const CoeffTensor half = detail::restrict_half(a);

    switch (mode) {
    case ClassifyMode::Roumieu: {
        const DecayProfile prof = estimate_decay(a, s);
        out.diagnostics["r_hat"] = prof.r_hat;
        out.diagnostics["regression_rate"] = prof.regression_rate;
        if (prof.r_hat > kRateTol) {
            out.tag = SpaceTag::Roumieu;
            out.t_or_r = prof.r_hat;
        } else {
            out.reason = "no positive decay rate at this truncation";
        }
        return out;
    }
    case ClassifyMode::Beurling: {
        const DecayProfile full_prof = estimate_decay(a, s);
        out.diagnostics["r_hat_full"] = full_prof.r_hat;
        double r_half = std::numeric_limits<double>::infinity();
        if (!half.empty())
            r_half = estimate_decay(half, s).r_hat;
        out.diagnostics["r_hat_half"] = r_half;

        bool rates_ok = full_prof.r_hat > kRateTol && full_prof.r_hat >= r_half - kRateTol;
        bool probes_ok = true;
        for (double r : {1.0, 2.0, 4.0, 8.0}) {
            const double bound_full = check_bound(a, s, r);
            const double bound_half = half.empty() ? 0.0 : check_bound(half, s, r);
            out.diagnostics["bound_r" + std::to_string(static_cast<int>(r))] = bound_full;
            if (!(std::isfinite(bound_full)) || bound_full > bound_half * 1.05 + 1e-300)
                probes_ok = false;
        }
        if (rates_ok && probes_ok) {
            out.tag = SpaceTag::Beurling;
            out.t_or_r = full_prof.r_hat;
        } else {
            out.reason = probes_ok ? "fitted rate not non-decreasing across truncations"
                                   : "probe bound grows with truncation";
        }
        return out;
    }
    case ClassifyMode::Schwartz: {
        const auto fit = detail::fit_polynomial_order(a);
        out.diagnostics["poly_order"] = fit.order;
        out.diagnostics["r2"] = fit.r2;
        if (fit.ok && fit.order > 0 && fit.r2 >= 0.8) {
            out.tag = SpaceTag::Schwartz;
            out.t_or_r = fit.order;
        } else {
            out.reason = "log-log fit unstable or non-decaying";
        }
        return out;
    }
    case ClassifyMode::Dual: {
        // Distribution-side tests: polynomial (or exponential) growth is
        // admissible, so the fitted exponents land on the negative side.
        const auto fit = detail::fit_polynomial_order(a);
        const DecayProfile prof = estimate_decay(a, s);
        out.diagnostics["poly_order"] = fit.order;
        out.diagnostics["r2"] = fit.r2;
        out.diagnostics["exp_rate"] = prof.regression_rate;
        if (fit.ok) {
            out.tag = SpaceTag::Dual;
            // |a| ~ <(alpha,beta)>^{-order}: a growing sequence fits a
            // negative order, which is the admissible t < 0 of the dual side
            out.t_or_r = fit.order;
        } else {
            out.reason = "growth fit degenerate";
        }
        return out;
    }
    }
    return out;
}

/// Fitted pointwise envelope |f(x)| <= C e^{-eps |x|^{1/s}} for a synthesized
/// coefficient vector and for its Fourier transform. Diagnostic only.
struct PointwiseDecay {
    double eps_f = 0.0, c_f = 0.0;
    double eps_ft = 0.0, c_ft = 0.0;
};

namespace detail {

struct EnvelopeFit {
    double eps, c;
};

inline EnvelopeFit fit_envelope(const std::vector<Complex>& values,
                                std::span<const double> grid, double s) {
    // Bin |x|^{1/s} and keep the per-bin maximum of log|f|: a least-squares
    // line through the envelope, robust against oscillation nulls.
    double u_max = 0.0;
    for (double x : grid)
        u_max = std::max(u_max, std::pow(std::abs(x), 1.0 / s));
    constexpr int kBins = 12;
    std::vector<double> best_u(kBins, 0.0), best_l(kBins, 0.0);
    std::vector<bool> seen(kBins, false);
    bool any = false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double av = std::abs(values[i]);
        if (av < 1e-300)
            continue;
        any = true;
        const double u = std::pow(std::abs(grid[i]), 1.0 / s);
        int b = u_max > 0 ? std::min(kBins - 1, static_cast<int>(u / u_max * kBins)) : 0;
        const double l = std::log(av);
        if (!seen[static_cast<std::size_t>(b)] || l > best_l[static_cast<std::size_t>(b)]) {
            seen[static_cast<std::size_t>(b)] = true;
            best_l[static_cast<std::size_t>(b)] = l;
            best_u[static_cast<std::size_t>(b)] = u;
        }
    }
    if (!any)
        throw NumericError("pointwise_decay_check: degenerate fit (all samples below 1e-300)");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int b = 0; b < kBins; ++b) {
        if (!seen[static_cast<std::size_t>(b)])
            continue;
        sx += best_u[static_cast<std::size_t>(b)];
        sy += best_l[static_cast<std::size_t>(b)];
        sxx += best_u[static_cast<std::size_t>(b)] * best_u[static_cast<std::size_t>(b)];
        sxy += best_u[static_cast<std::size_t>(b)] * best_l[static_cast<std::size_t>(b)];
        ++m;
    }
    if (m < 2)
        throw NumericError("pointwise_decay_check: degenerate fit (single usable bin)");
    const double det = sxx * m - sx * sx;
    if (det <= 0)
        throw NumericError("pointwise_decay_check: degenerate fit");
    const double slope = (sxy * m - sx * sy) / det;
    const double intercept = (sy * sxx - sx * sxy) / det;
    return {-slope, std::exp(intercept)};
}

} // namespace detail

/// Envelope rates for f = sum c_alpha h_alpha and its Fourier transform on a
/// 1-D grid inside the reliable synthesis range |x| <= sqrt(2(N+1)).
inline PointwiseDecay pointwise_decay_check(const CoeffVector& c, double s,
                                            std::span<const double> grid) {
    require_gs_index(s);
    if (c.basis().dim != 1)
        throw ValidationError("pointwise_decay_check: 1-D coefficients expected");
    const double x_reliable = std::sqrt(2.0 * (c.basis().trunc[0] + 1));
    for (double x : grid)
        if (std::abs(x) > x_reliable + 1e-12)
            throw ValidationError("pointwise_decay_check: grid beyond reliable synthesis range");

    const auto f = synthesize_grid(c, grid);
    const auto fit_f = detail::fit_envelope(f, grid, s);
    const auto ft = synthesize_grid(fourier_coeffs(c), grid);
    const auto fit_ft = detail::fit_envelope(ft, grid, s);
    return {fit_f.eps, fit_f.c, fit_ft.eps, fit_ft.c};
}

} // namespace hermop
