#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <vector>

#include "hermop/coeff_tensor.hpp"
#include "hermop/transforms.hpp"
#include "hermop/weights.hpp"

namespace hermop {

/// ||f||_H = sqrt(sum |c_alpha|^2 w_alpha^2): the norm of a Hermite-type
/// space in the orthonormal basis h_alpha / ||h_alpha||_H.
inline double space_norm(const CoeffVector& c, const HermiteWeight& w) {
    if (w.dim() != c.basis().dim)
        throw ValidationError("space_norm: weight dimension mismatch");
    double acc = 0.0;
    std::size_t flat = 0;
    for_each_index(c.basis().trunc, [&](const MultiIndex& alpha) {
        const double wa = w.at(alpha);
        acc += std::norm(c[flat++]) * wa * wa;
    });
    return std::sqrt(acc);
}

/// Coordinates of T between two weighted spaces: M_{alpha,beta} =
/// w2_alpha a_{alpha,beta} / w1_beta over the truncation box.
struct OperatorMatrix {
    std::vector<MultiIndex> rows; // lexicographic over the left box
    std::vector<MultiIndex> cols; // lexicographic over the right box
    Eigen::MatrixXcd values;
};

inline OperatorMatrix operator_matrix(const CoeffTensor& a, const HermiteWeight& w1,
                                      const HermiteWeight& w2) {
    if (w1.dim() != a.d_right() || w2.dim() != a.d_left())
        throw ValidationError("operator_matrix: weight dimension mismatch");

    OperatorMatrix m;
    for_each_index(a.trunc_left(), [&](const MultiIndex& alpha) { m.rows.push_back(alpha); });
    for_each_index(a.trunc_right(), [&](const MultiIndex& beta) { m.cols.push_back(beta); });

    std::map<MultiIndex, Eigen::Index> col_of;
    for (std::size_t j = 0; j < m.cols.size(); ++j)
        col_of[m.cols[j]] = static_cast<Eigen::Index>(j);
    std::map<MultiIndex, Eigen::Index> row_of;
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        row_of[m.rows[i]] = static_cast<Eigen::Index>(i);

    m.values = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m.rows.size()),
                                      static_cast<Eigen::Index>(m.cols.size()));
    for (const auto& [key, v] : a.entries())
        m.values(row_of[key.first], col_of[key.second]) =
            v * (w2.at(key.first) / w1.at(key.second));
    return m;
}

/// Non-increasing singular values; SVD realizes the inf-over-low-rank
/// definition in the Hilbert model (Eckart-Young-Mirsky).
struct SingularSpectrum {
    std::vector<double> sigma;
};

inline SingularSpectrum singular_values(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    SingularSpectrum out;
    out.sigma.assign(svd.singularValues().data(),
                     svd.singularValues().data() + svd.singularValues().size());
    std::sort(out.sigma.begin(), out.sigma.end(), std::greater<double>());
    return out;
}

inline SingularSpectrum singular_values(const OperatorMatrix& m) {
    return singular_values(m.values);
}

inline double schatten_inf() { return std::numeric_limits<double>::infinity(); }

/// l^p (quasi-)norm of the spectrum; p = inf gives sigma_1.
inline double schatten_norm(const SingularSpectrum& spectrum, double p) {
    if (!(p > 0.0))
        throw ValidationError("schatten_norm: order p must be positive");
    if (spectrum.sigma.empty())
        return 0.0;
    if (std::isinf(p))
        return spectrum.sigma.front();
    double acc = 0.0;
    for (double s : spectrum.sigma)
        acc += std::pow(s, p);
    return std::pow(acc, 1.0 / p);
}

struct HolderReport {
    double p1 = 2, p2 = 2, r = 1;
    double lhs = 0, rhs = 0;
    double constant = 1.0; // Hilbert model
    bool pass = false;
};

/// ||T2 T1||_{I_r} <= C_r ||T1||_{I_p1} ||T2||_{I_p2} with 1/p1 + 1/p2 = 1/r
/// and C_r = 1 between Hilbert spaces.
inline HolderReport holder_check(const CoeffTensor& a1, const CoeffTensor& a2,
                                 const HermiteWeight& w1, const HermiteWeight& w2,
                                 const HermiteWeight& w3, double p1, double p2) {
    if (!(p1 > 0.0) || !(p2 > 0.0))
        throw ValidationError("holder_check: orders must be positive");
    const double inv_r = (std::isinf(p1) ? 0.0 : 1.0 / p1) + (std::isinf(p2) ? 0.0 : 1.0 / p2);
    const double r = inv_r == 0.0 ? schatten_inf() : 1.0 / inv_r;

    const OperatorMatrix m1 = operator_matrix(a1, w1, w2);
    const OperatorMatrix m2 = operator_matrix(a2, w2, w3);
    if (m2.values.cols() != m1.values.rows())
        throw ValidationError("holder_check: operators not composable");

    HolderReport report;
    report.p1 = p1;
    report.p2 = p2;
    report.r = r;
    report.lhs = schatten_norm(singular_values(Eigen::MatrixXcd(m2.values * m1.values)), r);
    report.rhs =
        schatten_norm(singular_values(m1), p1) * schatten_norm(singular_values(m2), p2);
    report.pass = report.lhs <= report.rhs + 1e-10;
    return report;
}

struct HsReport {
    double lhs = 0, rhs = 0, gap = 0;
};

/// ||T||_{I_2(H1,H2)} = ||K_T||_{H2 (x) (H1')^tau}: the Hilbert-Schmidt norm
/// equals the weighted tensor norm of the kernel (dual side carries 1/w1).
inline HsReport hs_identity_check(const CoeffTensor& a, const HermiteWeight& w1,
                                  const HermiteWeight& w2) {
    const OperatorMatrix m = operator_matrix(a, w1, w2);
    HsReport report;
    report.lhs = schatten_norm(singular_values(m), 2.0);
    double frob = 0.0;
    for (const auto& [key, v] : a.entries()) {
        const double scaled = std::abs(v) * (w2.at(key.first) / w1.at(key.second));
        frob += scaled * scaled;
    }
    report.rhs = std::sqrt(frob);
    report.gap = std::abs(report.lhs - report.rhs);
    return report;
}

struct EmbeddingReport {
    double c_a = 1, c_b = 1;
    double max_violation = 0; // max_j sigma_C[j] - Ca*Cb*sigma_B[j]
    bool pass = false;
};

/// Lemma check: with C1 embedded in B1 (constant C_a = sup w_B1/w_C1) and B2
/// embedded in C2 (C_b = sup w_C2/w_B2), singular values between the outer
/// pair are dominated: sigma_j(C1,C2) <= C_a C_b sigma_j(B1,B2) + 1e-10.
inline EmbeddingReport embedding_monotonicity_check(const CoeffTensor& a,
                                                    const HermiteWeight& b1,
                                                    const HermiteWeight& b2,
                                                    const HermiteWeight& c1,
                                                    const HermiteWeight& c2) {
    EmbeddingReport report;
    double ca = 0.0;
    for_each_index(a.trunc_right(), [&](const MultiIndex& beta) {
        ca = std::max(ca, b1.at(beta) / c1.at(beta));
    });
    double cb = 0.0;
    for_each_index(a.trunc_left(), [&](const MultiIndex& alpha) {
        cb = std::max(cb, c2.at(alpha) / b2.at(alpha));
    });
    report.c_a = ca;
    report.c_b = cb;

    const auto sig_b = singular_values(operator_matrix(a, b1, b2));
    const auto sig_c = singular_values(operator_matrix(a, c1, c2));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < sig_b.sigma.size(); ++j)
        worst = std::max(worst, sig_c.sigma[j] - ca * cb * sig_b.sigma[j]);
    report.max_violation = worst;
    report.pass = worst <= 1e-10;
    return report;
}

struct DecayFit {
    double c = 0, rho = 0, r_squared = 0;
};

/// Least-squares fit log sigma_j ~ log c - rho j^{1/(2s)} over the values
/// above 1e-250 (at least 8 required).
inline DecayFit decay_fit(const SingularSpectrum& spectrum, double s) {
    if (!(s >= 0.5))
        throw ValidationError("decay_fit: s must be >= 1/2");
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < spectrum.sigma.size(); ++j) {
        if (spectrum.sigma[j] <= 1e-250)
            break;
        xs.push_back(std::pow(static_cast<double>(j + 1), 1.0 / (2.0 * s)));
        ys.push_back(std::log(spectrum.sigma[j]));
    }
    if (xs.size() < 8)
        throw NumericError("decay_fit: fewer than 8 usable singular values");

    const double m = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double vxx = sxx - sx * sx / m;
    const double vyy = syy - sy * sy / m;
    const double vxy = sxy - sx * sy / m;
    if (vxx <= 0)
        throw NumericError("decay_fit: degenerate abscissas");

    DecayFit fit;
    fit.rho = -vxy / vxx;
    fit.c = std::exp((sy - (-fit.rho) * sx) / m);
    fit.r_squared = vyy > 0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
    return fit;
}

} // namespace hermop
