#pragma once

#include <cstdint>
#include <vector>

#include "torun/grid.hpp"

namespace torun {

// Builtin coefficient and test-field generators. Everything is deterministic:
// random fields derive from an explicit seed through a fixed-width generator,
// never from library distributions (whose streams vary across standard
// library implementations).

PeriodicField constant_field(const PeriodicGrid& grid, cd value);

struct ModeAmplitude {
    int m1 = 0;
    int m2 = 0;
    cd amp;
};

// sum_k amp_k * exp(i (2pi/period) (m1_k x1 + m2_k x2))
PeriodicField mode_field(const PeriodicGrid& grid, const std::vector<ModeAmplitude>& modes);

// delta * e^{i x1 s} (0.6 + 0.4 e^{2 i x2 s}), s = 2pi/period. Two modes at
// (1,0) and (1,2); sup over the grid is exactly delta. Standard corpus entry.
PeriodicField two_mode_field(const PeriodicGrid& grid, double delta);

// height * exp(1 - 1/(1 - (d/radius)^2)) inside the disc of the given radius
// around (cx, cy), measured in torus distance; zero outside. Smooth on the
// whole torus. Standard corpus entry (center at period/2, radius 2.5).
PeriodicField radial_bump_field(const PeriodicGrid& grid, double cx, double cy,
                                double radius, double height);

// Deterministic 64-bit generator (xorshift-multiply); uniform doubles come
// from the top 53 bits.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next_u64();
    double next_unit();             // [0, 1)
    double next_symmetric();        // [-1, 1)
};

// Random field with coefficients only in modes max(|m1|,|m2|) <= band,
// amplitude ~ 1/(1+|m|^2) so H^1 norms stay moderate. Not normalized.
PeriodicField random_band_field(const PeriodicGrid& grid, int band, std::uint64_t seed);

// random_band_field rescaled so that max |mu| equals delta_target (< 1).
PeriodicField random_band_mu(const PeriodicGrid& grid, int band, double delta_target,
                             std::uint64_t seed);

} // namespace torun
