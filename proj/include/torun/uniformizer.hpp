#pragma once

#include <vector>

#include "torun/grid.hpp"
#include "torun/solver.hpp"

namespace torun {

// Exact trigonometric evaluation of a spectral field at arbitrary points:
// v(x) = sum_m c_m e^{i s (m1 x1 + m2 x2)}, s = 2pi/period, summed over all
// retained modes (asymmetric Nyquist rows are dropped; every object produced
// by the solver pipeline is band-limited well inside them anyway).
class TrigEvaluator {
public:
    TrigEvaluator() = default;
    explicit TrigEvaluator(const SpectralField& spec);

    cd eval(double x1, double x2) const;
    // tensor-product batch: out[i * ys.size() + j] = v(xs[i], ys[j])
    std::vector<cd> eval_grid(const std::vector<double>& xs,
                              const std::vector<double>& ys) const;

    const PeriodicGrid& grid() const { return grid_; }

private:
    std::vector<cd> phase_row(double x) const;

    PeriodicGrid grid_;
    std::vector<cd> coeffs_; // FFT index order, Nyquist zeroed
};

// f multiplied into dz + mu dz~, decomposed as the derivative data of the
// primitive Phi(z) = a z + b conj(z) + psi(z): a = mean f, b = mean(f mu),
// psi periodic with mean zero.
struct UniformizingForm {
    PeriodicField f;
    BeltramiCoefficient mu;
    cd a;
    cd b;
    PeriodicField psi;

    // spectral evaluators for off-grid evaluation of the map and Jacobian
    TrigEvaluator f_eval;
    TrigEvaluator mu_eval;
    TrigEvaluator psi_eval;
    cd psi0; // psi(0, 0) through psi_eval, so Phi(0) = 0 bit-exactly
};

struct TorusLattice {
    cd omega1;
    cd omega2;
    cd tau; // omega2 / omega1, normalized to Im tau > 0
};

struct MapSample {
    cd z;
    cd phi;
    double jac;
};

// Checks closedness (per-mode lambda'_m f_m = lambda_m (f mu)_m within
// 1e-8 * ||f||) and reconstructs psi from the derivative route with the
// larger eigenvalue modulus. Throws inconsistent_form when the input f does
// not satisfy the equation to tolerance.
UniformizingForm build_uniformizing_form(const PeriodicField& f,
                                         const BeltramiCoefficient& mu);

// Periods of Phi over the two torus generators: omega1 = period*(a+b),
// omega2 = i*period*(a-b); orientation-normalized. Throws degenerate_lattice
// when Im(omega2/omega1) vanishes numerically.
TorusLattice lattice(const UniformizingForm& form);

// Phi(z) = a z + b conj(z) + psi(z) - psi(0) and the Jacobian
// |f(z)|^2 (1 - |mu(z)|^2), both spectrally interpolated.
MapSample evaluate_map(const UniformizingForm& form, cd z);

// Phi without the Jacobian (cheaper inner loop for probes and plots).
cd evaluate_phi(const UniformizingForm& form, cd z);

// min over grid samples of |f|^2 (1 - |mu|^2); positive value certifies
// local diffeomorphism on the grid.
double jacobian_min(const UniformizingForm& form);

// Randomized injectivity probe on a disc: returns false if two distinct
// sample points land within 1e-12 * |separation| of each other.
bool local_univalence_check(const UniformizingForm& form, cd z0, double radius,
                            int samples);

} // namespace torun
