#pragma once

#include <functional>
#include <vector>

#include "torun/solver.hpp"
#include "torun/uniformizer.hpp"

namespace torun {

// Beltrami coefficient on the plane, essentially supported in the square
// [-S, S]^2. mu_fn must be evaluable on all of R^2; values outside the
// support square are tapered to zero by the periodization cutoff. The
// constant mode bypasses support handling entirely: mu == const_value on the
// whole plane and periodization is exact at every period.
struct PlanarProblem {
    std::function<cd(double, double)> mu_fn;
    double S = 1.0;
    double delta = 0.0; // certified sup bound, < 1
    bool constant_mode = false;
    cd const_value = cd(0.0, 0.0);

    static PlanarProblem constant(cd value);
    static PlanarProblem compact_support(std::function<cd(double, double)> fn, double S,
                                         double delta);
};

// Resolution rule for the period sequence: n = round(L * density) rounded up
// to even, so the physical mesh spacing L/n stays fixed as L grows.
struct MeshRule {
    double density = 8.0;

    int grid_n(double L) const;
};

// Solution of one periodized problem, normalized to fix 0 and 1:
// Psi(z) = (Phi(z) - Phi(0)) / (Phi(1) - Phi(0)). Psi(0) = 0 and Psi(1) = 1
// hold exactly because both anchors are evaluated through the same code path
// and divided by themselves.
struct NormalizedMap {
    UniformizingForm form;
    double L = 0.0;
    SolveReport solve;
    cd phi0;
    cd phi1;

    cd eval(cd z) const;
    // tensor-product batch over z = xs[p] + i*ys[q], row-major in p
    std::vector<cd> eval_grid(const std::vector<double>& xs,
                              const std::vector<double>& ys) const;
};

struct ConvergenceReport {
    std::vector<double> periods;
    std::vector<int> ns;
    std::vector<cd> taus;
    std::vector<int> iterations;
    std::vector<double> residuals;
    // sup |Psi_{L_i} - Psi_{L_{i+1}}| over the fixed evaluation grid
    std::vector<double> sup_diffs;
    double compact_half_width = 0.0;
};

// Samples mu on the L-square, multiplied by a C-infinity cutoff that is 1 on
// [-S, S]^2 and 0 within `margin` of the square's boundary (max-norm
// distance, profile exp(1 - 1/(1 - s^2))), tiled periodically. Requires
// L >= 2S + 2*margin.
BeltramiCoefficient periodize(const PlanarProblem& problem, double L, double margin,
                              int n);

// Periodize at period L with margin (L - 2S)/4, solve, uniformize, normalize.
NormalizedMap plane_solve_single(const PlanarProblem& problem, double L,
                                 const MeshRule& rule = {},
                                 const SolverLimits& limits = {});

// Runs plane_solve_single over an increasing period sequence and records the
// sup-differences of consecutive normalized maps on a fixed 64x64 grid over
// [-2S, 2S]^2, plus the lattice parameter per period. A failed inner solve
// aborts with the failing period identified.
ConvergenceReport plane_solve_sequence(const PlanarProblem& problem,
                                       const std::vector<double>& periods,
                                       const MeshRule& rule = {},
                                       const SolverLimits& limits = {});

} // namespace torun
