#pragma once

#include "torun/grid.hpp"

namespace torun {

// Fourier multiplier operators diagonal in the e^{i(2pi/period)(m,x)} basis.
//   DZ    : lambda_m  = (i/2)(m1 - i m2) * 2pi/period
//   DZBAR : lambda'_m = (i/2)(m1 + i m2) * 2pi/period  ( = -conj(lambda_m) )
//   U     : lambda_m / lambda'_m for m != 0, and 1 at m = 0 (averages pass
//           through unchanged). Unit modulus at every mode.
// DZ and DZBAR zero the asymmetric Nyquist modes (m_i = -n/2); U does not
// touch them (it stays unit-modulus there).
enum class SymbolKind { DZ, DZBAR, U };

struct OperatorSymbol {
    SymbolKind kind;
};

// The multiplier table of a symbol on a grid (cached per kind/resolution/
// period). Row-major in FFT index order, same layout as SpectralField.
const std::vector<cd>& symbol_table(SymbolKind kind, const PeriodicGrid& grid);

// Modewise multiplication by the symbol table.
SpectralField apply_symbol(const SpectralField& spec, OperatorSymbol sym);

// True when mode m survives the 2/3-rule band: 3*max(|m1|,|m2|) <= n.
bool in_keep_band(int m1, int m2, int n);

// Zero every coefficient with max(|m1|,|m2|) > n/3 (in place).
void dealias(SpectralField& spec);

// Pointwise product of samples followed by 2/3-rule truncation of the result.
PeriodicField multiply_dealiased(const PeriodicField& a, const PeriodicField& b);

// sqrt( sum_m (1 + |m|^2)^j |c_m|^2 ), coefficients normalized so that the
// constant field 1 has c_0 = 1. Supported for 0 <= j <= 8.
double sobolev_norm(const PeriodicField& field, int j);
double sobolev_norm(const SpectralField& spec, int j);

// d/dx_axis as a Fourier multiplier (i * m_axis * 2pi/period, Nyquist zeroed).
SpectralField derivative_x(const SpectralField& spec, int axis);

// Fraction of spectral energy above the 2/3 band; 0 for the zero field.
// Used for the under-resolution warning on solver inputs.
double top_band_energy_fraction(const SpectralField& spec);

} // namespace torun
