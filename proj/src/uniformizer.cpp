#include "torun/uniformizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "torun/fft.hpp"
#include "torun/generators.hpp"
#include "torun/kernels.hpp"
#include "torun/ops.hpp"

namespace torun {

TrigEvaluator::TrigEvaluator(const SpectralField& spec)
    : grid_(spec.grid), coeffs_(spec.coeffs) {
    const int n = grid_.n;
    for (int k = 0; k < n; ++k) {
        coeffs_[static_cast<std::size_t>(n / 2) * n + k] = cd(0.0, 0.0); // m1 = -n/2
        coeffs_[static_cast<std::size_t>(k) * n + n / 2] = cd(0.0, 0.0); // m2 = -n/2
    }
}

std::vector<cd> TrigEvaluator::phase_row(double x) const {
    const int n = grid_.n;
    const double s = kTwoPi / grid_.period;
    std::vector<cd> row(n);
    for (int k = 0; k < n; ++k) {
        const double ang = s * SpectralField::mode_of(k, n) * x;
        row[k] = cd(std::cos(ang), std::sin(ang));
    }
    return row;
}

cd TrigEvaluator::eval(double x1, double x2) const {
    const int n = grid_.n;
    const std::vector<cd> e1 = phase_row(x1);
    const std::vector<cd> e2 = phase_row(x2);
    std::vector<cd> inner(n);
    const auto& K = kernels::active();
    for (int k1 = 0; k1 < n; ++k1)
        inner[k1] = K.cdot(coeffs_.data() + static_cast<std::size_t>(k1) * n, e2.data(),
                           static_cast<std::size_t>(n));
    return K.cdot(e1.data(), inner.data(), static_cast<std::size_t>(n));
}

std::vector<cd> TrigEvaluator::eval_grid(const std::vector<double>& xs,
                                         const std::vector<double>& ys) const {
    const int n = grid_.n;
    const std::size_t P = xs.size(), Q = ys.size();
    const auto& K = kernels::active();

    // contract the second index first: mt[q * n + k1] = sum_k2 c[k1,k2] e2_q[k2]
    std::vector<cd> mt(Q * n);
    auto stage = [&](std::size_t q_begin, std::size_t q_end) {
        for (std::size_t q = q_begin; q < q_end; ++q) {
            const std::vector<cd> e2 = phase_row(ys[q]);
            for (int k1 = 0; k1 < n; ++k1)
                mt[q * n + k1] = K.cdot(coeffs_.data() + static_cast<std::size_t>(k1) * n,
                                        e2.data(), static_cast<std::size_t>(n));
        }
    };
    std::vector<cd> out(P * Q);
    auto emit = [&](std::size_t p_begin, std::size_t p_end) {
        for (std::size_t p = p_begin; p < p_end; ++p) {
            const std::vector<cd> e1 = phase_row(xs[p]);
            for (std::size_t q = 0; q < Q; ++q)
                out[p * Q + q] =
                    K.cdot(e1.data(), mt.data() + q * n, static_cast<std::size_t>(n));
        }
    };

    // slices are disjoint, so the result is identical at any worker count
    auto run_sliced = [](std::size_t count, auto&& body) {
        const int workers = kernels::thread_count();
        if (workers <= 1 || count < 2) {
            body(std::size_t{0}, count);
            return;
        }
        const std::size_t slices = std::min<std::size_t>(workers, count);
        std::vector<std::thread> pool;
        pool.reserve(slices);
        for (std::size_t s = 0; s < slices; ++s) {
            const std::size_t b = count * s / slices;
            const std::size_t e = count * (s + 1) / slices;
            pool.emplace_back(body, b, e);
        }
        for (auto& t : pool) t.join();
    };
    run_sliced(Q, stage);
    run_sliced(P, emit);
    return out;
}

UniformizingForm build_uniformizing_form(const PeriodicField& f,
                                         const BeltramiCoefficient& mu) {
    if (!(f.grid == mu.mu.grid))
        throw invalid_input("build_uniformizing_form: grid mismatch");
    validate_finite(f, "uniformizing density");

    const double residual = beltrami_residual(f, mu);
    if (!(residual <= 1e-6)) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "equation residual %.3e exceeds 1e-6: density not converged",
                      residual);
        throw inconsistent_form(buf);
    }

    const SpectralField fc = to_spectral(f);
    const PeriodicField g = multiply_dealiased(mu.mu, f);
    const SpectralField gc = to_spectral(g);
    const std::vector<cd>& lam = symbol_table(SymbolKind::DZ, f.grid);
    const std::vector<cd>& lamp = symbol_table(SymbolKind::DZBAR, f.grid);

    const double closed_tol = 1e-8 * l2_norm(fc);
    const int n = f.grid.n;

    SpectralField psi_hat(f.grid);
    double worst = 0.0;
    for (int k1 = 0; k1 < n; ++k1)
        for (int k2 = 0; k2 < n; ++k2) {
            const std::size_t idx = static_cast<std::size_t>(k1) * n + k2;
            if (idx == 0) continue;
            const cd defect = lamp[idx] * fc.coeffs[idx] - lam[idx] * gc.coeffs[idx];
            const double d = std::abs(defect);
            if (d > worst) worst = d;
            if (lam[idx] == cd(0.0, 0.0)) continue; // Nyquist rows carry no psi
            // both eigenvalue moduli are equal on the square torus; the
            // branch keeps the route rule explicit
            psi_hat.coeffs[idx] = std::abs(lam[idx]) >= std::abs(lamp[idx])
                                      ? fc.coeffs[idx] / lam[idx]
                                      : gc.coeffs[idx] / lamp[idx];
        }
    if (worst > closed_tol) {
        char buf[112];
        std::snprintf(buf, sizeof buf,
                      "closedness defect %.3e exceeds %.3e: form is not closed", worst,
                      closed_tol);
        throw inconsistent_form(buf);
    }

    UniformizingForm form{
        f,
        mu,
        fc.coeffs[0],
        gc.coeffs[0],
        to_physical(psi_hat),
        TrigEvaluator(fc),
        TrigEvaluator(to_spectral(mu.mu)),
        TrigEvaluator(psi_hat),
        cd(0.0, 0.0),
    };
    form.psi0 = form.psi_eval.eval(0.0, 0.0);
    return form;
}

TorusLattice lattice(const UniformizingForm& form) {
    const double P = form.f.grid.period;
    TorusLattice lat;
    lat.omega1 = P * (form.a + form.b);
    lat.omega2 = cd(0.0, P) * (form.a - form.b);
    if (lat.omega1 == cd(0.0, 0.0))
        throw degenerate_lattice("omega1 vanishes");
    cd tau = lat.omega2 / lat.omega1;
    if (std::fabs(tau.imag()) < 1e-12) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "collinear periods: Im(tau) = %.3e", tau.imag());
        throw degenerate_lattice(buf);
    }
    if (tau.imag() < 0.0) {
        lat.omega2 = -lat.omega2;
        tau = -tau;
    }
    lat.tau = tau;
    return lat;
}

cd evaluate_phi(const UniformizingForm& form, cd z) {
    const cd psi = form.psi_eval.eval(z.real(), z.imag());
    return form.a * z + form.b * std::conj(z) + (psi - form.psi0);
}

MapSample evaluate_map(const UniformizingForm& form, cd z) {
    MapSample s;
    s.z = z;
    s.phi = evaluate_phi(form, z);
    const cd fv = form.f_eval.eval(z.real(), z.imag());
    const cd mv = form.mu_eval.eval(z.real(), z.imag());
    s.jac = std::norm(fv) * (1.0 - std::norm(mv));
    return s;
}

double jacobian_min(const UniformizingForm& form) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t count = form.f.values.size();
    for (std::size_t i = 0; i < count; ++i) {
        const double j = std::norm(form.f.values[i]) * (1.0 - std::norm(form.mu.mu.values[i]));
        if (j < best) best = j;
    }
    return best;
}

bool local_univalence_check(const UniformizingForm& form, cd z0, double radius,
                            int samples) {
    const double P = form.f.grid.period;
    if (!(radius > 0.0) || !(radius < P / 4.0))
        throw invalid_input("local_univalence_check: radius must lie in (0, period/4)");
    if (samples < 1) throw invalid_input("local_univalence_check: samples must be >= 1");

    Rng rng(0xd15c0b5eull);
    auto draw = [&] {
        const double r = radius * std::sqrt(rng.next_unit());
        const double ang = kTwoPi * rng.next_unit();
        return z0 + cd(r * std::cos(ang), r * std::sin(ang));
    };
    for (int i = 0; i < samples; ++i) {
        const cd p = draw();
        const cd q = draw();
        const double sep = std::abs(p - q);
        if (sep == 0.0) continue;
        const cd dphi = evaluate_phi(form, p) - evaluate_phi(form, q);
        if (std::abs(dphi) <= 1e-12 * sep) return false;
    }
    return true;
}

} // namespace torun
