#include "torun/solver.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <string>

#include "torun/fft.hpp"
#include "torun/generators.hpp"
#include "torun/kernels.hpp"
#include "torun/ops.hpp"
#include "torun/solver_internal.hpp"

namespace torun {

BeltramiCoefficient::BeltramiCoefficient(PeriodicField samples) : mu(std::move(samples)) {
    validate_finite(mu, "beltrami coefficient");
    if (mu.values.size() != mu.grid.size())
        throw invalid_input("beltrami coefficient: sample count does not match grid");
    delta = max_abs(mu);
    if (!(delta < 1.0)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", delta);
        throw invalid_input(std::string("delta >= 1: sup |mu| = ") + buf);
    }
}

namespace detail {

const std::vector<cd>& masked_u_table(const PeriodicGrid& grid) {
    // U composed with the 2/3-rule projection; diagonal operators commute, so
    // one fused table per grid covers the solver's U T(...) applications.
    struct Key {
        int n;
        double period;
        bool operator<(const Key& o) const {
            return n != o.n ? n < o.n : period < o.period;
        }
    };
    static std::mutex mtx;
    static std::map<Key, std::vector<cd>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    const Key key{grid.n, grid.period};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<cd> table = symbol_table(SymbolKind::U, grid);
    const int n = grid.n;
    for (int k1 = 0; k1 < n; ++k1) {
        const int m1 = SpectralField::mode_of(k1, n);
        for (int k2 = 0; k2 < n; ++k2) {
            const int m2 = SpectralField::mode_of(k2, n);
            if (!in_keep_band(m1, m2, n))
                table[static_cast<std::size_t>(k1) * n + k2] = cd(0.0, 0.0);
        }
    }
    return cache.emplace(key, std::move(table)).first->second;
}

PeriodicField apply_UT(const PeriodicField& coeff, const PeriodicField& v) {
    PeriodicField prod(coeff.grid);
    kernels::active().cmul(coeff.values.data(), v.values.data(), prod.values.data(),
                           prod.values.size());
    SpectralField spec = to_spectral(prod);
    const std::vector<cd>& table = masked_u_table(coeff.grid);
    kernels::active().cmul(spec.coeffs.data(), table.data(), spec.coeffs.data(),
                           spec.coeffs.size());
    return to_physical(spec);
}

int default_max_iter(double tol, double delta) {
    if (delta <= 0.0) return 17;
    const double base = std::ceil(std::log(tol * (1.0 - delta)) / std::log(delta));
    const int b = base > 1.0 ? static_cast<int>(base) : 1;
    return b + 16;
}

double min_abs(const PeriodicField& f) {
    double best_sq = std::numeric_limits<double>::infinity();
    for (const cd& v : f.values) {
        const double sq = v.real() * v.real() + v.imag() * v.imag();
        if (sq < best_sq) best_sq = sq;
    }
    return std::sqrt(best_sq);
}

void validate_limits(const SolverLimits& limits, const BeltramiCoefficient& mu) {
    if (mu.mu.grid.n == 0) throw invalid_input("coefficient carries no samples");
    if (!(limits.tol > 0.0)) throw invalid_input("solver tolerance must be positive");
    if (limits.max_iter < 0) throw invalid_input("max_iter must be >= 1 (or 0 for default)");
    if (mu.delta > 0.95 && !limits.allow_large_delta) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", mu.delta);
        throw invalid_input(std::string("delta = ") + buf +
                            " exceeds 0.95; enable the large-delta override to proceed");
    }
}

void append_input_warnings(const BeltramiCoefficient& mu, std::vector<std::string>& w) {
    const double frac = top_band_energy_fraction(to_spectral(mu.mu));
    if (frac > 1e-8) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "aliasing: top-third spectral energy fraction of mu is %.3e", frac);
        w.emplace_back(buf);
    }
}

} // namespace detail

SolveReport solve_neumann(const BeltramiCoefficient& mu, const SolverLimits& limits) {
    detail::validate_limits(limits, mu);
    const double tol = limits.tol;
    const double delta = mu.delta;
    const int max_iter =
        limits.max_iter > 0 ? limits.max_iter : detail::default_max_iter(tol, delta);
    const double stop = tol * (1.0 - delta);

    SolveReport rep;
    rep.method = SolveMethod::NEUMANN;
    rep.delta = delta;
    detail::append_input_warnings(mu, rep.warnings);

    PeriodicField f = PeriodicField(mu.mu.grid, cd(1.0, 0.0));
    PeriodicField u = detail::apply_UT(mu.mu, f);
    rep.iterations = 1;
    double norm_u = l2_norm(u);

    auto advance = [&] {
        if (rep.iterations >= max_iter) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "no convergence after %d iterations; increment %.3e, "
                          "threshold %.3e",
                          rep.iterations, norm_u, stop);
            throw convergence_error(buf);
        }
        for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += u.values[i];
        u = detail::apply_UT(mu.mu, u);
        ++rep.iterations;
        const double next = l2_norm(u);
        if (norm_u > 0.0) {
            const double ratio = next / norm_u;
            if (ratio > rep.max_step_ratio) rep.max_step_ratio = ratio;
        }
        norm_u = next;
    };

    while (norm_u > stop) advance();

    // Distance to the limit is now <= tol; fold in the last increment and
    // verify the equation residual, iterating further if the derivative
    // amplifies the tail above the requested tolerance.
    PeriodicField cand = f;
    for (std::size_t i = 0; i < cand.values.size(); ++i) cand.values[i] += u.values[i];
    double res = beltrami_residual(cand, mu);
    while (res > tol) {
        advance();
        cand = f;
        for (std::size_t i = 0; i < cand.values.size(); ++i) cand.values[i] += u.values[i];
        res = beltrami_residual(cand, mu);
    }

    rep.f = std::move(cand);
    rep.residual_l2 = res;
    rep.min_abs_f = detail::min_abs(rep.f);
    if (rep.min_abs_f <= 1e-8) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "nonvanishing violation: min |f| = %.3e",
                      rep.min_abs_f);
        rep.warnings.emplace_back(buf);
    }
    return rep;
}

double beltrami_residual(const PeriodicField& f, const BeltramiCoefficient& mu) {
    if (!(f.grid == mu.mu.grid)) throw invalid_input("beltrami_residual: grid mismatch");
    const SpectralField fc = to_spectral(f);
    const SpectralField gc = to_spectral(multiply_dealiased(mu.mu, f));
    const std::vector<cd>& dzbar = symbol_table(SymbolKind::DZBAR, f.grid);
    const std::vector<cd>& dz = symbol_table(SymbolKind::DZ, f.grid);
    const std::size_t count = fc.coeffs.size();
    std::vector<cd> lhs(count), rhs(count);
    kernels::active().cmul(fc.coeffs.data(), dzbar.data(), lhs.data(), count);
    kernels::active().cmul(gc.coeffs.data(), dz.data(), rhs.data(), count);
    return std::sqrt(kernels::active().diff_norm2_sq(lhs.data(), rhs.data(), count));
}

namespace {

// H1 norm with physical derivative weights sqrt(sum (1+|s m|^2)|c_m|^2),
// s = 2pi/period. Coincides with sobolev_norm(.,1) at the default period and
// keeps the tail bound dimensionally consistent at any other period.
double h1_physical(const SpectralField& spec) {
    const int n = spec.grid.n;
    const double s = kTwoPi / spec.grid.period;
    std::vector<double> w(spec.grid.size());
    for (int k1 = 0; k1 < n; ++k1) {
        const int m1 = SpectralField::mode_of(k1, n);
        for (int k2 = 0; k2 < n; ++k2) {
            const int m2 = SpectralField::mode_of(k2, n);
            const double sm1 = s * m1, sm2 = s * m2;
            w[static_cast<std::size_t>(k1) * n + k2] = 1.0 + sm1 * sm1 + sm2 * sm2;
        }
    }
    return std::sqrt(
        kernels::active().wnorm2_sq(w.data(), spec.coeffs.data(), spec.coeffs.size()));
}

} // namespace

TailCheckReport neumann_tail_check(const BeltramiCoefficient& mu, int k, int trials) {
    if (k < 1) throw invalid_input("neumann_tail_check: k must be >= 1");
    if (trials < 1) throw invalid_input("neumann_tail_check: trials must be >= 1");
    const PeriodicGrid& grid = mu.mu.grid;
    const double delta = mu.delta;

    // c_r = delta + max |d mu / d x_r| (spectral derivative, grid max)
    const SpectralField mu_spec = to_spectral(mu.mu);
    double c_axis[2];
    for (int axis = 0; axis < 2; ++axis)
        c_axis[axis] = delta + max_abs(to_physical(derivative_x(mu_spec, axis)));

    constexpr double kSlack = 1e-9;
    TailCheckReport rep;
    rep.k = k;
    rep.trials = trials;

    const int band = grid.n / 3;
    for (int trial = 0; trial < trials; ++trial) {
        const PeriodicField v =
            random_band_field(grid, band, 0x7a11c4ecull + static_cast<std::uint64_t>(trial));
        const double l2_v = l2_norm(v);
        const double h1_v = h1_physical(to_spectral(v));
        PeriodicField w = v;
        double delta_pow = 1.0; // delta^j
        for (int j = 1; j <= k; ++j) {
            w = detail::apply_UT(mu.mu, w);
            delta_pow *= delta;
            const SpectralField wc = to_spectral(w);

            const double lhs_l2 = l2_norm(w);
            const double bound_l2 = delta_pow * l2_v;
            double ratio = 0.0;
            if (bound_l2 > 0.0) ratio = lhs_l2 / bound_l2;
            else if (lhs_l2 > 0.0) ratio = std::numeric_limits<double>::infinity();
            if (ratio > rep.max_l2_ratio) rep.max_l2_ratio = ratio;

            const double delta_pow_prev = j == 1 ? 1.0 : delta_pow / delta;
            for (int axis = 0; axis < 2; ++axis) {
                const double lhs = l2_norm(to_physical(derivative_x(wc, axis)));
                const double bound = c_axis[axis] * j * delta_pow_prev * h1_v;
                double r = 0.0;
                if (bound > 0.0) r = lhs / bound;
                else if (lhs > 0.0) r = std::numeric_limits<double>::infinity();
                if (r > rep.max_h1_ratio) rep.max_h1_ratio = r;
            }
        }
    }

    if (rep.max_l2_ratio > 1.0 + kSlack || rep.max_h1_ratio > 1.0 + kSlack) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "tail bound violated: L2 ratio %.12g, derivative ratio %.12g "
                      "(allowed 1 + 1e-9)",
                      rep.max_l2_ratio, rep.max_h1_ratio);
        throw property_failure(buf);
    }
    rep.passed = true;
    return rep;
}

double parameter_analyticity_check(const BeltramiCoefficient& mu, cd t0, double h) {
    if (!(h > 0.0)) throw invalid_input("parameter_analyticity_check: h must be positive");
    if ((std::abs(t0) + h) * mu.delta >= 1.0)
        throw invalid_input(
            "parameter_analyticity_check: stencil point violates |t mu| < 1");

    auto solve_at = [&](cd t) {
        PeriodicField scaled = mu.mu;
        for (cd& v : scaled.values) v *= t;
        SolverLimits limits;
        limits.tol = 1e-13;
        limits.allow_large_delta = true; // admissibility already checked above
        return solve_neumann(BeltramiCoefficient(std::move(scaled)), limits).f;
    };

    const PeriodicField fp = solve_at(t0 + h);
    const PeriodicField fm = solve_at(t0 - h);
    const PeriodicField fip = solve_at(t0 + cd(0.0, h));
    const PeriodicField fim = solve_at(t0 - cd(0.0, h));

    PeriodicField combo(mu.mu.grid);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = (fp.values[i] - fm.values[i]) +
                          cd(0.0, 1.0) * (fip.values[i] - fim.values[i]);
    return l2_norm(combo) / (2.0 * h);
}

} // namespace torun
