#include "torun/plane.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "torun/generators.hpp"

namespace torun {

PlanarProblem PlanarProblem::constant(cd value) {
    if (!(std::abs(value) < 1.0))
        throw invalid_input("PlanarProblem::constant: |value| must be < 1");
    PlanarProblem p;
    p.S = 1.0;
    p.delta = std::abs(value);
    p.constant_mode = true;
    p.const_value = value;
    return p;
}

PlanarProblem PlanarProblem::compact_support(std::function<cd(double, double)> fn,
                                             double S, double delta) {
    if (!fn) throw invalid_input("PlanarProblem: mu_fn must be callable");
    if (!(S > 0.0)) throw invalid_input("PlanarProblem: S must be positive");
    if (!(delta >= 0.0 && delta < 1.0))
        throw invalid_input("PlanarProblem: delta must lie in [0, 1)");
    PlanarProblem p;
    p.mu_fn = std::move(fn);
    p.S = S;
    p.delta = delta;
    return p;
}

int MeshRule::grid_n(double L) const {
    if (!(density > 0.0)) throw invalid_input("MeshRule: density must be positive");
    long n = std::lround(L * density);
    if (n % 2 != 0) ++n;
    if (n < 4) n = 4;
    if (n > (1 << 14)) throw invalid_input("MeshRule: grid size exceeds 16384");
    return static_cast<int>(n);
}

namespace {

double cutoff(double d, double S, double half_clear) {
    if (d <= S) return 1.0;
    if (d >= half_clear) return 0.0;
    const double width = half_clear - S;
    if (!(width > 0.0)) return 0.0;
    const double s = (d - S) / width;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

} // namespace

BeltramiCoefficient periodize(const PlanarProblem& problem, double L, double margin,
                              int n) {
    if (!(L > 0.0)) throw invalid_input("periodize: period must be positive");
    PeriodicGrid grid(n, L);
    if (problem.constant_mode)
        return BeltramiCoefficient(constant_field(grid, problem.const_value));

    if (!problem.mu_fn) throw invalid_input("periodize: mu_fn must be callable");
    if (!(margin >= 0.0)) throw invalid_input("periodize: margin must be >= 0");
    if (!(L >= 2.0 * problem.S + 2.0 * margin)) {
        char buf[112];
        std::snprintf(buf, sizeof buf,
                      "periodize: period %.6g too small for support %.6g and margin %.6g",
                      L, problem.S, margin);
        throw invalid_input(buf);
    }

    const double half_clear = 0.5 * L - margin;
    PeriodicField out(grid);
    for (int i1 = 0; i1 < n; ++i1) {
        const double x1 = grid.coord(i1);
        const double y1 = x1 - L * std::round(x1 / L);
        for (int i2 = 0; i2 < n; ++i2) {
            const double x2 = grid.coord(i2);
            const double y2 = x2 - L * std::round(x2 / L);
            const double d = std::fmax(std::fabs(y1), std::fabs(y2));
            const double w = cutoff(d, problem.S, half_clear);
            out.at(i1, i2) = w == 0.0 ? cd(0.0, 0.0) : w * problem.mu_fn(y1, y2);
        }
    }
    BeltramiCoefficient mu(std::move(out));
    if (mu.delta > problem.delta) {
        char buf[112];
        std::snprintf(buf, sizeof buf,
                      "periodize: sampled sup |mu| = %.6g exceeds the certified bound %.6g",
                      mu.delta, problem.delta);
        throw invalid_input(buf);
    }
    return mu;
}

cd NormalizedMap::eval(cd z) const {
    return (evaluate_phi(form, z) - phi0) / (phi1 - phi0);
}

std::vector<cd> NormalizedMap::eval_grid(const std::vector<double>& xs,
                                         const std::vector<double>& ys) const {
    const std::size_t P = xs.size(), Q = ys.size();
    std::vector<cd> out = form.psi_eval.eval_grid(xs, ys);
    const cd denom = phi1 - phi0;
    for (std::size_t p = 0; p < P; ++p)
        for (std::size_t q = 0; q < Q; ++q) {
            const cd z(xs[p], ys[q]);
            const cd phi = form.a * z + form.b * std::conj(z) +
                           (out[p * Q + q] - form.psi0);
            out[p * Q + q] = (phi - phi0) / denom;
        }
    return out;
}

NormalizedMap plane_solve_single(const PlanarProblem& problem, double L,
                                 const MeshRule& rule, const SolverLimits& limits) {
    const double margin = problem.constant_mode ? 0.0 : (L - 2.0 * problem.S) / 4.0;
    if (!problem.constant_mode && !(margin > 0.0))
        throw invalid_input("plane_solve_single: period must exceed twice the support");
    const int n = rule.grid_n(L);
    BeltramiCoefficient mu = periodize(problem, L, margin, n);
    SolveReport rep = solve_neumann(mu, limits);

    NormalizedMap map;
    map.form = build_uniformizing_form(rep.f, mu);
    map.L = L;
    map.solve = std::move(rep);
    map.phi0 = evaluate_phi(map.form, cd(0.0, 0.0));
    map.phi1 = evaluate_phi(map.form, cd(1.0, 0.0));
    if (map.phi1 == map.phi0)
        throw degenerate_lattice("normalization degenerate: Phi(1) equals Phi(0)");
    return map;
}

ConvergenceReport plane_solve_sequence(const PlanarProblem& problem,
                                       const std::vector<double>& periods,
                                       const MeshRule& rule,
                                       const SolverLimits& limits) {
    if (periods.empty()) throw invalid_input("plane_solve_sequence: empty period list");
    for (std::size_t i = 1; i < periods.size(); ++i)
        if (!(periods[i] > periods[i - 1]))
            throw invalid_input("plane_solve_sequence: periods must be increasing");

    ConvergenceReport report;
    report.compact_half_width = problem.S;
    const double eval_half_width = 2.0 * problem.S;
    const int kEvalN = 64;
    std::vector<double> coords(kEvalN);
    for (int i = 0; i < kEvalN; ++i) {
        const double t = static_cast<double>(i) / (kEvalN - 1);
        coords[i] = eval_half_width * (2.0 * t - 1.0);
    }

    std::vector<cd> prev;
    for (double L : periods) {
        NormalizedMap map;
        try {
            map = plane_solve_single(problem, L, rule, limits);
        } catch (const convergence_error& e) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "period L = %.6g: %s", L, e.what());
            throw convergence_error(buf);
        }
        report.periods.push_back(L);
        report.ns.push_back(map.form.f.grid.n);
        report.taus.push_back(lattice(map.form).tau);
        report.iterations.push_back(map.solve.iterations);
        report.residuals.push_back(map.solve.residual_l2);

        std::vector<cd> values = map.eval_grid(coords, coords);
        if (!prev.empty()) {
            double sup = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double d = std::abs(values[i] - prev[i]);
                if (d > sup) sup = d;
            }
            report.sup_diffs.push_back(sup);
        }
        prev = std::move(values);
    }
    return report;
}

} // namespace torun
