#include "torun/generators.hpp"

#include <cmath>

#include "torun/fft.hpp"
#include "torun/ops.hpp"

namespace torun {

PeriodicField constant_field(const PeriodicGrid& grid, cd value) {
    return PeriodicField(grid, value);
}

PeriodicField mode_field(const PeriodicGrid& grid, const std::vector<ModeAmplitude>& modes) {
    SpectralField spec(grid);
    const int half = grid.n / 2;
    for (const ModeAmplitude& m : modes) {
        if (m.m1 < -half || m.m1 >= half || m.m2 < -half || m.m2 >= half)
            throw invalid_input("mode_field: mode outside representable range");
        spec.at_mode(m.m1, m.m2) += m.amp;
    }
    return to_physical(spec);
}

PeriodicField two_mode_field(const PeriodicGrid& grid, double delta) {
    return mode_field(grid, {{1, 0, cd(0.6 * delta, 0.0)}, {1, 2, cd(0.4 * delta, 0.0)}});
}

PeriodicField radial_bump_field(const PeriodicGrid& grid, double cx, double cy,
                                double radius, double height) {
    if (!(radius > 0.0)) throw invalid_input("radial_bump_field: radius must be positive");
    PeriodicField out(grid);
    const double P = grid.period;
    for (int i1 = 0; i1 < grid.n; ++i1) {
        const double d1raw = std::fabs(grid.coord(i1) - cx);
        const double d1 = std::fmin(std::fmod(d1raw, P), P - std::fmod(d1raw, P));
        for (int i2 = 0; i2 < grid.n; ++i2) {
            const double d2raw = std::fabs(grid.coord(i2) - cy);
            const double d2 = std::fmin(std::fmod(d2raw, P), P - std::fmod(d2raw, P));
            const double s2 = (d1 * d1 + d2 * d2) / (radius * radius);
            if (s2 < 1.0)
                out.at(i1, i2) = cd(height * std::exp(1.0 - 1.0 / (1.0 - s2)), 0.0);
        }
    }
    return out;
}

std::uint64_t Rng::next_u64() {
    // splitmix64 step: simple, fast, reproducible everywhere
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::next_symmetric() { return 2.0 * next_unit() - 1.0; }

PeriodicField random_band_field(const PeriodicGrid& grid, int band, std::uint64_t seed) {
    if (band < 0 || band >= grid.n / 2)
        throw invalid_input("random_band_field: band outside representable range");
    Rng rng(seed);
    SpectralField spec(grid);
    for (int m1 = -band; m1 <= band; ++m1)
        for (int m2 = -band; m2 <= band; ++m2) {
            const double decay =
                1.0 / (1.0 + static_cast<double>(m1) * m1 + static_cast<double>(m2) * m2);
            spec.at_mode(m1, m2) =
                cd(rng.next_symmetric() * decay, rng.next_symmetric() * decay);
        }
    return to_physical(spec);
}

PeriodicField random_band_mu(const PeriodicGrid& grid, int band, double delta_target,
                             std::uint64_t seed) {
    if (!(delta_target > 0.0 && delta_target < 1.0))
        throw invalid_input("random_band_mu: delta target must lie in (0, 1)");
    PeriodicField v = random_band_field(grid, band, seed);
    const double m = max_abs(v);
    const double scale = delta_target / m;
    for (cd& x : v.values) x *= scale;
    return v;
}

} // namespace torun
