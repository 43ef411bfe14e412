#pragma once

#include <string>
#include <vector>

#include "torun/grid.hpp"

namespace torun {

// Coefficient of the form dz + mu dz~ with certified sup bound delta < 1.
// delta is always recomputed from the samples, never taken from the caller.
struct BeltramiCoefficient {
    PeriodicField mu;
    double delta = 0.0;

    BeltramiCoefficient() = default; // empty placeholder; solvers reject it
    explicit BeltramiCoefficient(PeriodicField samples);
};

enum class SolveMethod { NEUMANN, HOMOTOPY };

struct SolveReport {
    PeriodicField f;
    int iterations = 0;
    double residual_l2 = 0.0;
    double min_abs_f = 0.0;
    SolveMethod method = SolveMethod::NEUMANN;
    double delta = 0.0;
    // max over iterations of ||u_k|| / ||u_{k-1}|| for the Neumann increments
    // (each increment is one application of the contraction, so this ratio is
    // bounded by delta up to rounding)
    double max_step_ratio = 0.0;
    std::vector<std::string> warnings;
};

struct HomotopyConfig {
    int steps = 64; // fixed-step classical RK4; must be >= 4
};

struct SolverLimits {
    double tol = 1e-10;
    int max_iter = 0;              // 0: use ceil(ln(tol(1-delta))/ln(delta)) + 16
    bool allow_large_delta = false; // accept delta in (0.95, 1)
};

// Fixed point of f = 1 + U(mu f), accumulated as the partial sums of the
// Neumann series: u_0 = U(mu * 1), u_k = U(mu u_{k-1}), f = 1 + sum u_k.
// Stops when ||u_k||_L2 <= tol*(1-delta), which bounds the distance to the
// limit by tol via the geometric tail. Warnings (not errors): input spectral
// tail above 1e-8 of total energy; min|f| <= 1e-8.
SolveReport solve_neumann(const BeltramiCoefficient& mu, const SolverLimits& limits = {});

// Integrates df/dt = (Id - U nu)^{-1} (U mu) f, nu = t mu, from f == 1 at
// t = 0 to t = 1 with fixed-step RK4. Inner inverses run the Neumann
// iteration warm-started from the previous step's stage value.
SolveReport solve_homotopy(const BeltramiCoefficient& mu, const HomotopyConfig& cfg = {},
                           const SolverLimits& limits = {});

// || dzbar f - dz (mu f) ||_L2 with the dealiased product.
double beltrami_residual(const PeriodicField& f, const BeltramiCoefficient& mu);

struct TailCheckReport {
    int k = 0;
    int trials = 0;
    // worst observed value of ||(U mu)^j v|| / (delta^j ||v||), j <= k
    double max_l2_ratio = 0.0;
    // worst observed derivative ratio against c_r * j * delta^(j-1) * ||v||_H1
    // with c_r = delta + max |d mu / d x_r|
    double max_h1_ratio = 0.0;
    bool passed = false;
};

// Randomized verification of the contraction and first-derivative tail
// bounds for powers (U mu)^j, j = 1..k. Trial fields are band-limited so the
// discrete operator chain is alias-free. Throws property_failure if a bound
// is exceeded beyond 1e-9 relative slack.
TailCheckReport neumann_tail_check(const BeltramiCoefficient& mu, int k, int trials);

// Cauchy-Riemann defect of t -> f_t at t0 on a stencil of radius h:
//   || (f(t0+h) - f(t0-h)) + i (f(t0+ih) - f(t0-ih)) ||_L2 / (2h).
// Second-order small when f depends holomorphically on t. Requires
// (|t0| + h) * delta < 1 so every stencil coefficient stays admissible.
double parameter_analyticity_check(const BeltramiCoefficient& mu, cd t0, double h);

} // namespace torun
