#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "hermop/errors.hpp"

namespace hermop {

using Complex = std::complex<double>;

/// One uniform axis [min, max) with n points; the right endpoint is excluded
/// (periodic/FFT convention), spacing h = (max - min) / n.
struct GridAxis {
    double min = -8.0;
    double max = 8.0;
    int n = 256;

    double spacing() const { return (max - min) / n; }
    double point(int i) const { return min + i * spacing(); }

    bool operator==(const GridAxis&) const = default;
};

/// Uniform grid over a phase-space (x, xi) or kernel (x, y) box.
struct PhaseGrid {
    GridAxis axis1;
    GridAxis axis2;

    void validate() const {
        for (const GridAxis& ax : {axis1, axis2}) {
            if (!(ax.max > ax.min))
                throw ValidationError("PhaseGrid: axis max must exceed min");
            if (ax.n < 16 || ax.n % 2 != 0)
                throw ValidationError("PhaseGrid: axis points must be even and >= 16");
        }
    }

    bool operator==(const PhaseGrid&) const = default;
};

inline PhaseGrid square_grid(double min, double max, int n) {
    PhaseGrid g{{min, max, n}, {min, max, n}};
    g.validate();
    return g;
}

namespace detail {

// values laid out axis1-fastest: v[i1 + n1*i2]
inline double boundary_ring_max(const std::vector<Complex>& values, int n1, int n2) {
    double m = 0.0;
    auto look = [&](int i1, int i2) {
        m = std::max(m, std::abs(values[static_cast<std::size_t>(i1) +
                                        static_cast<std::size_t>(n1) *
                                            static_cast<std::size_t>(i2)]));
    };
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 : {0, 1, n2 - 2, n2 - 1})
            look(i1, i2);
    for (int i2 = 0; i2 < n2; ++i2)
        for (int i1 : {0, 1, n1 - 2, n1 - 1})
            look(i1, i2);
    return m;
}

} // namespace detail

inline constexpr double kWindowThreshold = 1e-10;

/// Symbol samples a(x_i, xi_m), axis1 (x) fastest: values[i + n1*m].
struct GridSymbol {
    PhaseGrid grid;
    std::vector<Complex> values;

    Complex& at(int i1, int i2) {
        return values[static_cast<std::size_t>(i1) +
                      static_cast<std::size_t>(grid.axis1.n) * static_cast<std::size_t>(i2)];
    }
    Complex at(int i1, int i2) const {
        return values[static_cast<std::size_t>(i1) +
                      static_cast<std::size_t>(grid.axis1.n) * static_cast<std::size_t>(i2)];
    }

    /// Window adequacy: the outermost two rings must have decayed below the
    /// threshold, otherwise the periodic resampling would alias.
    bool window_adequate() const {
        return detail::boundary_ring_max(values, grid.axis1.n, grid.axis2.n) <=
               kWindowThreshold;
    }

    void validate() const {
        grid.validate();
        if (values.size() != static_cast<std::size_t>(grid.axis1.n) *
                                 static_cast<std::size_t>(grid.axis2.n))
            throw ValidationError("GridSymbol: value count does not match grid");
    }
};

/// Kernel samples K(x_i, y_j), same layout and guards as GridSymbol.
struct GridKernel {
    PhaseGrid grid;
    std::vector<Complex> values;

    Complex& at(int i1, int i2) {
        return values[static_cast<std::size_t>(i1) +
                      static_cast<std::size_t>(grid.axis1.n) * static_cast<std::size_t>(i2)];
    }
    Complex at(int i1, int i2) const {
        return values[static_cast<std::size_t>(i1) +
                      static_cast<std::size_t>(grid.axis1.n) * static_cast<std::size_t>(i2)];
    }

    bool window_adequate() const {
        return detail::boundary_ring_max(values, grid.axis1.n, grid.axis2.n) <=
               kWindowThreshold;
    }

    void validate() const {
        grid.validate();
        if (values.size() != static_cast<std::size_t>(grid.axis1.n) *
                                 static_cast<std::size_t>(grid.axis2.n))
            throw ValidationError("GridKernel: value count does not match grid");
    }
};

/// Quantization parameter: t = 1/2 is Weyl, t = 0 is Kohn-Nirenberg.
struct QuantParam {
    double t = 0.5;

    QuantParam() = default;
    QuantParam(double value) : t(value) {
        if (!std::isfinite(t))
            throw ValidationError("QuantParam: t must be finite");
    }
};

} // namespace hermop
