#include <cmath>
#include <cstdio>
#include <utility>

#include "torun/fft.hpp"
#include "torun/kernels.hpp"
#include "torun/ops.hpp"
#include "torun/solver.hpp"
#include "torun/solver_internal.hpp"

namespace torun {
namespace {

struct InnerSolver {
    const PeriodicField* mu = nullptr;
    double delta_mu = 0.0;
    double tol = 1e-12;
    int max_iter = 0;
    long long applications = 0;
    double max_ratio = 0.0;

    // Solve (Id - U T(t mu .)) h = g by the Neumann iteration on the residual
    // correction, warm-started from `guess`.
    PeriodicField solve(const PeriodicField& g, double t, const PeriodicField* guess) {
        PeriodicField coeff(mu->grid);
        for (std::size_t i = 0; i < coeff.values.size(); ++i)
            coeff.values[i] = t * mu->values[i];
        const double delta_t = t * delta_mu;
        const double stop = tol * (1.0 - delta_t);

        PeriodicField h = guess ? *guess : g;
        // residual increment r = g + A h - h, then h += r, r = A r, ...
        PeriodicField r = detail::apply_UT(coeff, h);
        ++applications;
        for (std::size_t i = 0; i < r.values.size(); ++i)
            r.values[i] += g.values[i] - h.values[i];

        double norm_r = l2_norm(r);
        int iter = 0;
        double prev = 0.0;
        while (norm_r > stop) {
            if (iter >= max_iter) {
                char buf[128];
                std::snprintf(buf, sizeof buf,
                              "homotopy inner solve stalled after %d iterations "
                              "(increment %.3e, threshold %.3e)",
                              iter, norm_r, stop);
                throw convergence_error(buf);
            }
            for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] += r.values[i];
            prev = norm_r;
            r = detail::apply_UT(coeff, r);
            ++applications;
            ++iter;
            norm_r = l2_norm(r);
            if (prev > 0.0 && norm_r / prev > max_ratio) max_ratio = norm_r / prev;
        }
        for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] += r.values[i];
        return h;
    }
};

} // namespace

SolveReport solve_homotopy(const BeltramiCoefficient& mu, const HomotopyConfig& cfg,
                           const SolverLimits& limits) {
    detail::validate_limits(limits, mu);
    if (cfg.steps < 4) throw invalid_input("homotopy steps must be >= 4");

    SolveReport rep;
    rep.method = SolveMethod::HOMOTOPY;
    rep.delta = mu.delta;
    detail::append_input_warnings(mu, rep.warnings);

    InnerSolver inner;
    inner.mu = &mu.mu;
    inner.delta_mu = mu.delta;
    inner.tol = std::fmin(1e-12, limits.tol * 1e-2);
    inner.max_iter =
        (limits.max_iter > 0 ? limits.max_iter : detail::default_max_iter(inner.tol, mu.delta)) * 4;

    // df/dt = (Id - U nu)^{-1} (U mu) f with nu = t mu; RK4 stage values are
    // warm starts for the matching stage of the next step.
    PeriodicField f(mu.mu.grid, cd(1.0, 0.0));
    PeriodicField warm[4];
    bool have_warm = false;
    const double ht = 1.0 / cfg.steps;

    auto rhs = [&](double t, const PeriodicField& fin, int slot) {
        PeriodicField g = detail::apply_UT(mu.mu, fin);
        PeriodicField h = inner.solve(g, t, have_warm ? &warm[slot] : nullptr);
        warm[slot] = h;
        return h;
    };
    auto shifted = [](const PeriodicField& base, double c, const PeriodicField& dir) {
        PeriodicField out = base;
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] += c * dir.values[i];
        return out;
    };

    for (int s = 0; s < cfg.steps; ++s) {
        const double t = s * ht;
        const PeriodicField k1 = rhs(t, f, 0);
        const PeriodicField k2 = rhs(t + ht / 2.0, shifted(f, ht / 2.0, k1), 1);
        const PeriodicField k3 = rhs(t + ht / 2.0, shifted(f, ht / 2.0, k2), 2);
        const PeriodicField k4 = rhs(t + ht, shifted(f, ht, k3), 3);
        have_warm = true;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            f.values[i] += (ht / 6.0) * (k1.values[i] + 2.0 * k2.values[i] +
                                         2.0 * k3.values[i] + k4.values[i]);
    }

    rep.f = std::move(f);
    rep.iterations = static_cast<int>(
        inner.applications > 0x7fffffff ? 0x7fffffff : inner.applications);
    rep.max_step_ratio = inner.max_ratio;
    rep.residual_l2 = beltrami_residual(rep.f, mu);
    if (rep.residual_l2 > limits.tol) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "homotopy residual %.3e exceeds tolerance %.3e; increase steps",
                      rep.residual_l2, limits.tol);
        rep.warnings.emplace_back(buf);
    }
    rep.min_abs_f = detail::min_abs(rep.f);
    if (rep.min_abs_f <= 1e-8) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "nonvanishing violation: min |f| = %.3e",
                      rep.min_abs_f);
        rep.warnings.emplace_back(buf);
    }
    return rep;
}

} // namespace torun
