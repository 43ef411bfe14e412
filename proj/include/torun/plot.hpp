#pragma once

#include <string>
#include <vector>

#include "torun/uniformizer.hpp"

namespace torun {

// SVG of the coordinate grid lines pushed through Phi with the lattice
// parallelogram outlined. Byte-deterministic for identical inputs.
std::string render_grid_svg(const UniformizingForm& form, const TorusLattice& lat,
                            int lines = 16, int samples_per_line = 192);

// Binary PPM (P6) heatmap of a row-major nx-by-ny scalar field with a fixed
// colormap; values are clamped to [vmin, vmax]. Byte-deterministic.
std::string render_heatmap_ppm(const std::vector<double>& values, int nx, int ny,
                               double vmin, double vmax);

} // namespace torun
