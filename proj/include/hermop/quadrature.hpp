#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "hermop/errors.hpp"
#include "hermop/hermite.hpp"

namespace hermop {

/// n-point Gauss-Hermite rule for the weight e^{-x^2}: integrates
/// polynomials of degree <= 2n-1 exactly against that weight.
struct QuadratureRule {
    std::vector<double> nodes;   // ascending, symmetric about 0
    std::vector<double> weights; // positive, sum sqrt(pi)

    int order() const { return static_cast<int>(nodes.size()); }

    /// w_i e^{x_i^2}, the compensated weight used against integrands that
    /// carry their own Gaussian decay. Computed directly as the reciprocal
    /// Christoffel sum 1 / sum_{k<n} h_k(x_i)^2, which stays fully accurate
    /// where w_i alone underflows toward the edge nodes.
    double compensated_weight(int i) const {
        const int n = order();
        auto h = hermite_eval_all(n - 1, nodes[static_cast<std::size_t>(i)]);
        double s = 0.0;
        for (double v : h)
            s += v * v;
        return 1.0 / s;
    }
};

/// Golub-Welsch nodes: eigenvalues of the Jacobi matrix of the Hermite
/// polynomials (diagonal 0, off-diagonal sqrt(k/2)), polished by one Newton
/// step on the orthonormal polynomial p_n. The eigenvector route to the
/// weights loses all relative accuracy at the edge nodes, so the weights are
/// taken from the Christoffel identity w_i = e^{-x_i^2} / sum_{k<n} h_k(x_i)^2
/// instead (the e^{x^2/2} factors cancel inside the stable h_k recurrence).
inline QuadratureRule gauss_hermite_rule(int n) {
    if (n < 1)
        throw ValidationError("gauss_hermite_rule: order must be >= 1");

    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));

    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = std::sqrt(M_PI);
        return rule;
    }

    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int k = 1; k < n; ++k)
        sub[k - 1] = std::sqrt(0.5 * k);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("gauss_hermite_rule: eigensolver failed");

    for (int i = 0; i < n; ++i) {
        double x = solver.eigenvalues()[i];
        // Newton on p_n: the Gaussian halves cancel in h_n / h_{n-1}
        for (int pass = 0; pass < 2; ++pass) {
            auto h = hermite_eval_scaled_all(n, x);
            const ScaledValue num = h[static_cast<std::size_t>(n)];
            const ScaledValue den = h[static_cast<std::size_t>(n - 1)];
            if (den.mantissa == 0.0)
                break;
            const double step = num.mantissa / den.mantissa *
                                std::ldexp(1.0, static_cast<int>(num.exponent - den.exponent)) /
                                std::sqrt(2.0 * n);
            x -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x)))
                break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
    }

    // Exact symmetry: average mirrored pairs, pin the middle node at 0.
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        const std::size_t si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
        const double x = 0.5 * (rule.nodes[sj] - rule.nodes[si]);
        rule.nodes[si] = -x;
        rule.nodes[sj] = x;
    }
    if (n % 2 == 1)
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;

    for (int i = 0; i < n; ++i) {
        const double x = rule.nodes[static_cast<std::size_t>(i)];
        rule.weights[static_cast<std::size_t>(i)] =
            std::exp(-x * x) * rule.compensated_weight(i);
    }
    return rule;
}

} // namespace hermop
