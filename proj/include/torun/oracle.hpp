#pragma once

#include "torun/solver.hpp"

namespace torun {

// Independent reference solve of the same discrete fixed-point equation
// f = 1 + U T(mu f) by assembling the dense n^2 x n^2 system
// (Id - A) f_hat = e_0, A[p,q] = U_p [p in band] mu_hat[p - q], and
// eliminating it directly. The Fourier coefficients of mu and the final
// synthesis use direct O(n^4) DFT summation, so no code is shared with the
// FFT path. Grids are capped at n <= 16.
PeriodicField dense_oracle_solve(const BeltramiCoefficient& mu);

} // namespace torun
