#pragma once

#include <complex>
#include <vector>

#include "torun/errors.hpp"

namespace torun {

using cd = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Uniform n-by-n sampling of the fundamental square [0, period)^2 of the
// torus. Samples sit at x_j = j * period / n.
struct PeriodicGrid {
    int n = 0;
    double period = kTwoPi;

    PeriodicGrid() = default;
    PeriodicGrid(int n_, double period_);

    double spacing() const { return period / n; }
    double coord(int j) const { return j * spacing(); }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    bool operator==(const PeriodicGrid& o) const {
        return n == o.n && period == o.period;
    }
};

// Complex samples, row-major: values[i1 * n + i2] = v(x_{i1}, x_{i2}).
struct PeriodicField {
    PeriodicGrid grid;
    std::vector<cd> values;

    PeriodicField() = default;
    explicit PeriodicField(const PeriodicGrid& g, cd fill = cd(0.0, 0.0))
        : grid(g), values(g.size(), fill) {}

    cd& at(int i1, int i2) { return values[static_cast<std::size_t>(i1) * grid.n + i2]; }
    cd at(int i1, int i2) const {
        return values[static_cast<std::size_t>(i1) * grid.n + i2];
    }
};

// Fourier coefficients in FFT index order: coeffs[k1 * n + k2] belongs to the
// integer mode m_i = k_i for k_i < n/2 and m_i = k_i - n otherwise, so
// m_i ranges over [-n/2, n/2). The represented function is
//   v(x) = sum_m c_m exp(i (2*pi/period) (m1 x1 + m2 x2)),
// hence the coefficient of the constant is the field average.
struct SpectralField {
    PeriodicGrid grid;
    std::vector<cd> coeffs;

    SpectralField() = default;
    explicit SpectralField(const PeriodicGrid& g, cd fill = cd(0.0, 0.0))
        : grid(g), coeffs(g.size(), fill) {}

    static int mode_of(int k, int n) { return k < n / 2 ? k : k - n; }
    static int index_of(int m, int n) { return m >= 0 ? m : m + n; }

    cd& at_mode(int m1, int m2) {
        return coeffs[static_cast<std::size_t>(index_of(m1, grid.n)) * grid.n +
                      index_of(m2, grid.n)];
    }
    cd at_mode(int m1, int m2) const {
        return coeffs[static_cast<std::size_t>(index_of(m1, grid.n)) * grid.n +
                      index_of(m2, grid.n)];
    }
};

// Throws invalid_input when any sample is non-finite.
void validate_finite(const PeriodicField& f, const char* what);

// Mean of samples, max |value| over samples, and the L2 norms
//   ||v||_L2 = sqrt( (1/n^2) sum |v_j|^2 ) = sqrt( sum_m |c_m|^2 ).
cd field_mean(const PeriodicField& f);
double max_abs(const PeriodicField& f);
double l2_norm(const PeriodicField& f);
double l2_norm(const SpectralField& s);
double l2_diff(const PeriodicField& a, const PeriodicField& b);

} // namespace torun
