#pragma once

#include <vector>

#include "torun/grid.hpp"
#include "torun/solver.hpp"

// Shared internals of the Neumann and homotopy paths. Not part of the public
// surface; exposed in a header so both translation units and the contraction
// tests use the identical operator composition.

namespace torun::detail {

// U composed with the 2/3-rule spectral projection, as one fused table.
const std::vector<cd>& masked_u_table(const PeriodicGrid& grid);

// v -> U T(coeff * v): one grid product, one analysis, one fused table
// multiply, one synthesis.
PeriodicField apply_UT(const PeriodicField& coeff, const PeriodicField& v);

int default_max_iter(double tol, double delta);
double min_abs(const PeriodicField& f);
void validate_limits(const SolverLimits& limits, const BeltramiCoefficient& mu);
void append_input_warnings(const BeltramiCoefficient& mu, std::vector<std::string>& w);

} // namespace torun::detail
