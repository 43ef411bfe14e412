#include "torun/grid.hpp"

#include <cmath>
#include <string>

#include "torun/kernels.hpp"

namespace torun {

PeriodicGrid::PeriodicGrid(int n_, double period_) : n(n_), period(period_) {
    if (n < 4 || n % 2 != 0)
        throw invalid_input("grid resolution must be an even integer >= 4, got " +
                            std::to_string(n));
    if (!(period > 0.0) || !std::isfinite(period))
        throw invalid_input("grid period must be positive and finite");
}

void validate_finite(const PeriodicField& f, const char* what) {
    for (const cd& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw invalid_input(std::string(what) + ": non-finite sample");
}

cd field_mean(const PeriodicField& f) {
    // kahan-free sequential sum is fine here: means feed reports, not bounds
    cd s(0.0, 0.0);
    for (const cd& v : f.values) s += v;
    return s / static_cast<double>(f.values.size());
}

double max_abs(const PeriodicField& f) {
    return kernels::active().max_abs(f.values.data(), f.values.size());
}

double l2_norm(const PeriodicField& f) {
    const double sq = kernels::active().norm2_sq(f.values.data(), f.values.size());
    return std::sqrt(sq / static_cast<double>(f.values.size()));
}

double l2_norm(const SpectralField& s) {
    return std::sqrt(kernels::active().norm2_sq(s.coeffs.data(), s.coeffs.size()));
}

double l2_diff(const PeriodicField& a, const PeriodicField& b) {
    if (!(a.grid == b.grid)) throw invalid_input("l2_diff: grid mismatch");
    const double sq =
        kernels::active().diff_norm2_sq(a.values.data(), b.values.data(), a.values.size());
    return std::sqrt(sq / static_cast<double>(a.values.size()));
}

} // namespace torun
