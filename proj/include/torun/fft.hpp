#pragma once

#include "torun/grid.hpp"

namespace torun {

// Discrete Fourier analysis/synthesis on the torus grid. to_spectral scales
// by 1/n^2 so that the coefficient of mode (0,0) equals the field average;
// to_physical is its exact inverse (unscaled synthesis). Plans are cached per
// resolution and guarded by a mutex; execution is thread-safe.
SpectralField to_spectral(const PeriodicField& field);
PeriodicField to_physical(const SpectralField& spec);

} // namespace torun
