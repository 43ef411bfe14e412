// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here and nowhere else.
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "torun/fft.hpp"
#include "torun/generators.hpp"
#include "torun/ops.hpp"
#include "torun/oracle.hpp"
#include "torun/plane.hpp"
#include "torun/qc.hpp"
#include "torun/solver.hpp"
#include "torun/uniformizer.hpp"

namespace {

using namespace torun;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::uint64_t ulps_apart(double a, double b) {
    if (a == b) return 0;
    if (!std::isfinite(a) || !std::isfinite(b)) return ~0ull;
    if (std::signbit(a) != std::signbit(b)) return ~0ull;
    const std::uint64_t ua = std::bit_cast<std::uint64_t>(a);
    const std::uint64_t ub = std::bit_cast<std::uint64_t>(b);
    return ua > ub ? ua - ub : ub - ua;
}

PeriodicField corpus_mu(const PeriodicGrid& grid, bool bump, double delta) {
    if (bump)
        return radial_bump_field(grid, grid.period / 2.0, grid.period / 2.0, 2.5, delta);
    return two_mode_field(grid, delta);
}

// 1. U unitary in L2 and H1 (relative defect <= 1e-12) on 200 random fields
//    at n = 64; table composition U * lambda' matches lambda to <= 2 ulps;
//    lambda' = -conj(lambda) bit-exactly; all under 5 seconds.
Outcome criterion1() {
    const auto start = clock_type::now();
    const PeriodicGrid grid(64, kTwoPi);
    const OperatorSymbol u_sym{SymbolKind::U};

    double worst_l2 = 0.0, worst_h1 = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        PeriodicField v(grid);
        Rng rng(1000 + trial);
        for (cd& s : v.values) s = cd(rng.next_symmetric(), rng.next_symmetric());
        const SpectralField spec = to_spectral(v);
        const SpectralField mapped = apply_symbol(spec, u_sym);
        worst_l2 = std::fmax(worst_l2,
                             std::fabs(l2_norm(mapped) - l2_norm(spec)) / l2_norm(spec));
        worst_h1 = std::fmax(worst_h1, std::fabs(sobolev_norm(mapped, 1) -
                                                 sobolev_norm(spec, 1)) /
                                           sobolev_norm(spec, 1));
    }

    const std::vector<cd>& lam = symbol_table(SymbolKind::DZ, grid);
    const std::vector<cd>& lamp = symbol_table(SymbolKind::DZBAR, grid);
    const std::vector<cd>& u = symbol_table(SymbolKind::U, grid);
    bool conj_exact = true;
    std::uint64_t worst_ulp = 0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (lamp[i] != -std::conj(lam[i])) conj_exact = false;
        const cd comp = u[i] * lamp[i];
        worst_ulp = std::max(worst_ulp, ulps_apart(comp.real(), lam[i].real()));
        worst_ulp = std::max(worst_ulp, ulps_apart(comp.imag(), lam[i].imag()));
    }

    const double secs = seconds_since(start);
    Outcome o;
    o.pass = worst_l2 <= 1e-12 && worst_h1 <= 1e-12 && conj_exact && worst_ulp <= 2 &&
             secs < 5.0;
    o.detail = fmt("L2 defect %.3g, H1 defect %.3g, conjugation %s, composition %llu ulps, "
                   "%.2f s",
                   worst_l2, worst_h1, conj_exact ? "exact" : "BROKEN",
                   static_cast<unsigned long long>(worst_ulp), secs);
    return o;
}

// 2. Constant coefficients: f == 1/(1-c) within 1e-12, tau = i(1-c)/(1+c)
//    within 1e-12, normalized planar map equals (z + c conj z)/(1+c) within
//    1e-10 at 100 random points, for c in {0.1, ..., 0.9}.
Outcome criterion2() {
    const PeriodicGrid grid(16, kTwoPi);
    SolverLimits limits;
    limits.tol = 1e-14;

    double worst_f = 0.0, worst_tau = 0.0, worst_map = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double c = k / 10.0;
        const BeltramiCoefficient mu(constant_field(grid, cd(c, 0.0)));
        const SolveReport rep = solve_neumann(mu, limits);
        const cd target(1.0 / (1.0 - c), 0.0);
        for (const cd& v : rep.f.values) worst_f = std::fmax(worst_f, std::abs(v - target));

        const TorusLattice lat = lattice(build_uniformizing_form(rep.f, mu));
        worst_tau = std::fmax(worst_tau,
                              std::abs(lat.tau - cd(0.0, (1.0 - c) / (1.0 + c))));

        const NormalizedMap map =
            plane_solve_single(PlanarProblem::constant(cd(c, 0.0)), 4.0, MeshRule{}, limits);
        Rng rng(500 + k);
        for (int trial = 0; trial < 100; ++trial) {
            const cd z(2.0 * rng.next_symmetric(), 2.0 * rng.next_symmetric());
            const cd expect = (z + c * std::conj(z)) / (1.0 + c);
            worst_map = std::fmax(worst_map, std::abs(map.eval(z) - expect));
        }
    }

    Outcome o;
    o.pass = worst_f <= 1e-12 && worst_tau <= 1e-12 && worst_map <= 1e-10;
    o.detail = fmt("max |f - 1/(1-c)| = %.3g, max tau error = %.3g, max plane-map error = "
                   "%.3g",
                   worst_f, worst_tau, worst_map);
    return o;
}

// 3. Dense-oracle equivalence: n in {8, 16}, ten band-limited random mu with
//    delta <= 0.6, ||solve_neumann - dense_oracle_solve||_L2 <= 1e-9.
Outcome criterion3() {
    SolverLimits limits;
    limits.tol = 1e-13;
    double worst = 0.0;
    for (int n : {8, 16}) {
        const PeriodicGrid grid(n, kTwoPi);
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const BeltramiCoefficient mu(
                random_band_mu(grid, n / 4, 0.6, 7919 * seed + n));
            const SolveReport rep = solve_neumann(mu, limits);
            worst = std::fmax(worst, l2_diff(rep.f, dense_oracle_solve(mu)));
        }
    }
    Outcome o;
    o.pass = worst <= 1e-9;
    o.detail = fmt("max L2 deviation from the dense solve = %.3g", worst);
    return o;
}

struct CorpusRun {
    double delta;
    SolveReport rep;
};

// 4. Corpus residuals at n = 128, delta in {0.3, 0.5, 0.7}: residual <= 1e-8,
//    min |f| > 1e-3, Jacobian minimum > 0. The solves are kept for 5.
Outcome criterion4(std::vector<CorpusRun>& runs) {
    const PeriodicGrid grid(128, kTwoPi);
    double worst_res = 0.0, worst_min = 1e300, worst_jac = 1e300;
    for (bool bump : {false, true}) {
        for (double delta : {0.3, 0.5, 0.7}) {
            const BeltramiCoefficient mu(corpus_mu(grid, bump, delta));
            SolveReport rep = solve_neumann(mu);
            worst_res = std::fmax(worst_res, beltrami_residual(rep.f, mu));
            worst_min = std::fmin(worst_min, rep.min_abs_f);
            worst_jac = std::fmin(worst_jac, jacobian_min(build_uniformizing_form(rep.f, mu)));
            runs.push_back({mu.delta, std::move(rep)});
        }
    }
    Outcome o;
    o.pass = worst_res <= 1e-8 && worst_min > 1e-3 && worst_jac > 0.0;
    o.detail = fmt("max residual %.3g, min |f| %.3g, min Jacobian %.3g", worst_res,
                   worst_min, worst_jac);
    return o;
}

// 5. Successive-iterate ratio <= delta + 1e-12 on every corpus solve; tail
//    bounds hold for k = 1..10 over 100 random trials at n = 32, delta = 0.5.
Outcome criterion5(const std::vector<CorpusRun>& runs) {
    double worst_excess = -1e300;
    for (const CorpusRun& run : runs)
        worst_excess = std::fmax(worst_excess, run.rep.max_step_ratio - run.delta);

    const PeriodicGrid grid(32, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.5));
    TailCheckReport tail;
    bool tail_ok = true;
    std::string tail_note;
    try {
        tail = neumann_tail_check(mu, 10, 100);
        tail_ok = tail.passed;
    } catch (const property_failure& e) {
        tail_ok = false;
        tail_note = std::string("; ") + e.what();
    }

    Outcome o;
    o.pass = !runs.empty() && worst_excess <= 1e-12 && tail_ok;
    o.detail = fmt("max ratio excess over delta = %.3g, tail ratios L2 %.6f / H1 %.6f%s",
                   worst_excess, tail.max_l2_ratio, tail.max_h1_ratio,
                   tail_note.empty() ? "" : tail_note.c_str());
    return o;
}

// 6. Method agreement on the corpus at n = 64: Neumann vs 64-step RK4
//    homotopy within 1e-6 in L2.
Outcome criterion6() {
    const PeriodicGrid grid(64, kTwoPi);
    double worst = 0.0;
    for (bool bump : {false, true}) {
        for (double delta : {0.3, 0.5, 0.7}) {
            const BeltramiCoefficient mu(corpus_mu(grid, bump, delta));
            const SolveReport a = solve_neumann(mu);
            const SolveReport b = solve_homotopy(mu, HomotopyConfig{});
            worst = std::fmax(worst, l2_diff(a.f, b.f));
        }
    }
    Outcome o;
    o.pass = worst <= 1e-6;
    o.detail = fmt("max L2 method disagreement = %.3g", worst);
    return o;
}

// 7. Analyticity in the parameter: Cauchy-Riemann defect ratio between
//    h = 1e-2 and h = 5e-3 in [3.5, 4.5] for the two-mode mu at t0 = 0.5.
Outcome criterion7() {
    const PeriodicGrid grid(64, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.5));
    const double coarse = parameter_analyticity_check(mu, cd(0.5, 0.0), 1e-2);
    const double fine = parameter_analyticity_check(mu, cd(0.5, 0.0), 5e-3);
    const double ratio = coarse / fine;
    Outcome o;
    o.pass = ratio >= 3.5 && ratio <= 4.5;
    o.detail = fmt("defect %.3g -> %.3g, ratio %.3f", coarse, fine, ratio);
    return o;
}

// 8. Plane pipeline on the radial bump (delta 0.5, support [-1,1]^2), periods
//    8/16/32 at density 8: sup-differences strictly decrease and the L = 32
//    map agrees with the L = 64 oracle within twice the last difference.
//    Under 2 minutes, all grids <= 512.
Outcome criterion8() {
    const auto start = clock_type::now();
    const PlanarProblem prob = PlanarProblem::compact_support(
        [](double x, double y) {
            const double s2 = x * x + y * y;
            if (s2 >= 1.0) return cd(0.0, 0.0);
            return cd(0.5 * std::exp(1.0 - 1.0 / (1.0 - s2)), 0.0);
        },
        1.0, 0.5);
    const ConvergenceReport rep =
        plane_solve_sequence(prob, {8.0, 16.0, 32.0, 64.0});
    const double secs = seconds_since(start);

    int max_n = 0;
    for (int n : rep.ns) max_n = std::max(max_n, n);
    const std::vector<double>& d = rep.sup_diffs;
    Outcome o;
    o.pass = d.size() == 3 && d[1] < d[0] && d[2] <= 2.0 * d[1] && max_n <= 512 &&
             secs < 120.0;
    o.detail = fmt("sup diffs %.3g > %.3g, oracle gap %.3g <= 2x%.3g, n <= %d, %.1f s",
                   d.size() > 0 ? d[0] : -1.0, d.size() > 1 ? d[1] : -1.0,
                   d.size() > 2 ? d[2] : -1.0, d.size() > 1 ? d[1] : -1.0, max_n, secs);
    return o;
}

// 9. Length-area certificates on a 256x256 cylinder grid: identity, affine
//    family c <= 0.8, and a smooth perturbation with measured K <= 2, all
//    with slack <= 1e-3; moduli reproduce m(ROUND(e^{-2pi})) = 1 and
//    m(CYLINDER(2pi)) = 1.
Outcome criterion9() {
    const double R = kTwoPi;
    const int nx = 256, nphi = 256;
    bool all_certified = true;
    double worst_slack = 0.0;

    const auto certify = [&](const std::function<cd(double, double)>& w, double K) {
        const CylinderMapSamples s = CylinderMapSamples::from_function(w, R, nx, nphi);
        const double K_used =
            K > 0.0 ? K : map_dilatation_field(s).max_dilatation;
        const GrotzschReport rep = grotzsch_area_certify(s, K_used);
        all_certified = all_certified && rep.certified && rep.slack <= 1e-3;
        worst_slack = std::fmax(worst_slack, rep.slack);
        return rep;
    };

    certify([](double x, double phi) { return cd(x, phi); }, 0.0);
    for (int k = 0; k <= 8; ++k) {
        const double c = k / 10.0;
        certify(
            [c](double x, double phi) {
                const cd z(x, phi);
                return z + c * std::conj(z);
            },
            0.0);
    }
    const GrotzschReport pert = certify(
        [R](double x, double phi) {
            const double b = 0.1 * std::sin(kTwoPi * x / R);
            return cd(x + b * std::cos(phi), phi + b * std::sin(phi));
        },
        0.0);

    const double round_mod = annulus_modulus(Annulus::round(std::exp(-kTwoPi)));
    const double cyl_mod = annulus_modulus(Annulus::cylinder(kTwoPi));
    const bool moduli_ok = std::fabs(round_mod - 1.0) <= 4.5e-16 && cyl_mod == 1.0;

    Outcome o;
    o.pass = all_certified && pert.max_dilatation <= 2.0 && moduli_ok;
    o.detail = fmt("all certified %s, worst slack %.3g, perturbation K %.4f, "
                   "|m_round - 1| = %.3g, m_cyl = %g",
                   all_certified ? "yes" : "NO", worst_slack, pert.max_dilatation,
                   std::fabs(round_mod - 1.0), cyl_mod);
    return o;
}

// 10. Performance: full solve + uniformize at n = 256, delta = 0.5 in <= 5 s
//     single-threaded; iterations <= ceil(ln(1e-10 (1-delta))/ln delta) + 16.
Outcome criterion10() {
    const PeriodicGrid grid(256, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.5));

    const auto start = clock_type::now();
    const SolveReport rep = solve_neumann(mu);
    const UniformizingForm form = build_uniformizing_form(rep.f, mu);
    const TorusLattice lat = lattice(form);
    const double jac = jacobian_min(form);
    const double secs = seconds_since(start);

    const int bound =
        static_cast<int>(std::ceil(std::log(1e-10 * (1.0 - rep.delta)) /
                                   std::log(rep.delta))) +
        16;
    Outcome o;
    o.pass = secs <= 5.0 && rep.iterations <= bound && jac > 0.0 && lat.tau.imag() > 0.0;
    o.detail = fmt("%.2f s, %d iterations (cap %d), residual %.3g", secs, rep.iterations,
                   bound, rep.residual_l2);
    return o;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* label;
        std::function<Outcome()> run;
    };

    std::vector<CorpusRun> corpus_runs;
    const std::vector<Entry> entries = {
        {1, "operator unitarity and symbol identities", criterion1},
        {2, "constant-coefficient closed forms", criterion2},
        {3, "dense-oracle equivalence at small n", criterion3},
        {4, "corpus residuals, nonvanishing, and Jacobian positivity",
         [&] { return criterion4(corpus_runs); }},
        {5, "contraction ratio and tail bounds",
         [&] { return criterion5(corpus_runs); }},
        {6, "Neumann and homotopy method agreement", criterion6},
        {7, "parameter analyticity defect decay", criterion7},
        {8, "planar period-sequence convergence", criterion8},
        {9, "length-area certificates and annulus moduli", criterion9},
        {10, "solve + uniformize performance at n = 256", criterion10},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        Outcome o;
        try {
            o = entry.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", entry.id,
                    entry.label, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }

    std::printf("acceptance: %d/%d criteria passed\n",
                static_cast<int>(entries.size()) - failures,
                static_cast<int>(entries.size()));
    return failures == 0 ? 0 : 1;
}
