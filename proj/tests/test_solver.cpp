#include <cmath>

#include "doctest.h"
#include "torun/generators.hpp"
#include "torun/oracle.hpp"
#include "torun/solver.hpp"

using namespace torun;

namespace {

double max_pointwise_error(const PeriodicField& f, cd expect) {
    double worst = 0.0;
    for (const cd& v : f.values) worst = std::max(worst, std::abs(v - expect));
    return worst;
}

} // namespace

TEST_CASE("coefficient construction recomputes and validates the bound") {
    const PeriodicGrid grid(16, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.5));
    CHECK(mu.delta == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(BeltramiCoefficient(constant_field(grid, cd(1.0, 0.0))),
                    invalid_input);
    CHECK_THROWS_AS(BeltramiCoefficient(constant_field(grid, cd(1.2, 0.0))),
                    invalid_input);

    PeriodicField bad = constant_field(grid, cd(0.5, 0.0));
    bad.values[3] = cd(std::nan(""), 0.0);
    CHECK_THROWS_AS(BeltramiCoefficient(std::move(bad)), invalid_input);
}

TEST_CASE("zero coefficient solves to the constant one immediately") {
    const PeriodicGrid grid(16, kTwoPi);
    const BeltramiCoefficient mu(constant_field(grid, cd(0.0, 0.0)));
    const SolveReport rep = solve_neumann(mu);
    CHECK(max_pointwise_error(rep.f, cd(1.0, 0.0)) == 0.0);
    CHECK(rep.residual_l2 == 0.0);
    CHECK(rep.max_step_ratio == 0.0);
}

TEST_CASE("constant coefficient solves to the closed form") {
    const PeriodicGrid grid(16, kTwoPi);
    for (double c : {0.1, 0.5, 0.9}) {
        CAPTURE(c);
        const BeltramiCoefficient mu(constant_field(grid, cd(c, 0.0)));
        SolverLimits limits;
        limits.tol = 1e-14;
        const SolveReport rep = solve_neumann(mu, limits);
        CHECK(max_pointwise_error(rep.f, cd(1.0 / (1.0 - c), 0.0)) <= 1e-12);
        CHECK(rep.residual_l2 <= 1e-14);
        CHECK(rep.max_step_ratio <= c + 1e-12);
        CHECK(rep.min_abs_f == doctest::Approx(1.0 / (1.0 - c)).epsilon(1e-10));
    }
}

TEST_CASE("solver enforces the zero-mode normalization") {
    const PeriodicGrid grid(32, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.6));
    const SolveReport rep = solve_neumann(mu);

    PeriodicField mu_f(grid);
    for (std::size_t i = 0; i < mu_f.values.size(); ++i)
        mu_f.values[i] = mu.mu.values[i] * rep.f.values[i];
    const cd anchor = field_mean(rep.f) - field_mean(mu_f);
    CHECK(std::abs(anchor - cd(1.0, 0.0)) <= 1e-10);
}

TEST_CASE("converged solves satisfy the equation and the contraction bound") {
    const PeriodicGrid grid(64, kTwoPi);
    for (int which : {0, 1}) {
        const PeriodicField field =
            which == 0 ? two_mode_field(grid, 0.7)
                       : radial_bump_field(grid, kTwoPi / 2.0, kTwoPi / 2.0, 2.5, 0.7);
        CAPTURE(which);
        const BeltramiCoefficient mu(field);
        const SolveReport rep = solve_neumann(mu);
        CHECK(rep.residual_l2 <= 1e-10);
        CHECK(beltrami_residual(rep.f, mu) == doctest::Approx(rep.residual_l2));
        CHECK(rep.max_step_ratio <= mu.delta + 1e-12);
        CHECK(rep.min_abs_f > 1e-3);
    }
}

TEST_CASE("residual grows when the solution is wrong") {
    const PeriodicGrid grid(32, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.5));
    const PeriodicField one = constant_field(grid, cd(1.0, 0.0));
    CHECK(beltrami_residual(one, mu) > 0.1);
}

TEST_CASE("neumann matches the dense oracle") {
    for (int n : {8, 16}) {
        CAPTURE(n);
        const PeriodicGrid grid(n, kTwoPi);
        for (std::uint64_t seed : {41ull, 42ull}) {
            const BeltramiCoefficient mu(random_band_mu(grid, n / 4, 0.6, seed));
            SolverLimits limits;
            limits.tol = 1e-13;
            const SolveReport rep = solve_neumann(mu, limits);
            const PeriodicField oracle = dense_oracle_solve(mu);
            CHECK(l2_diff(rep.f, oracle) <= 1e-9);
        }
    }
}

TEST_CASE("dense oracle caps the resolution") {
    const PeriodicGrid grid(32, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.3));
    CHECK_THROWS_AS(dense_oracle_solve(mu), invalid_input);
}

TEST_CASE("iteration cap raises a convergence error") {
    const PeriodicGrid grid(16, kTwoPi);
    const BeltramiCoefficient mu(constant_field(grid, cd(0.5, 0.0)));
    SolverLimits limits;
    limits.tol = 1e-12;
    limits.max_iter = 2;
    CHECK_THROWS_AS(solve_neumann(mu, limits), convergence_error);
}

TEST_CASE("large delta needs the explicit override") {
    const PeriodicGrid grid(8, kTwoPi);
    const BeltramiCoefficient mu(constant_field(grid, cd(0.96, 0.0)));
    CHECK_THROWS_AS(solve_neumann(mu), invalid_input);

    SolverLimits limits;
    limits.tol = 1e-6;
    limits.allow_large_delta = true;
    const SolveReport rep = solve_neumann(mu, limits);
    CHECK(max_pointwise_error(rep.f, cd(25.0, 0.0)) <= 1e-3);
}

TEST_CASE("under-resolved coefficients carry an aliasing warning") {
    const PeriodicGrid grid(16, kTwoPi);
    const BeltramiCoefficient smooth(two_mode_field(grid, 0.5));
    CHECK(solve_neumann(smooth).warnings.empty());

    const BeltramiCoefficient rough(random_band_mu(grid, 7, 0.5, 99));
    const SolveReport rep = solve_neumann(rough);
    REQUIRE(!rep.warnings.empty());
    CHECK(rep.warnings[0].find("aliasing") != std::string::npos);
}

TEST_CASE("homotopy agrees with neumann and the closed form") {
    const PeriodicGrid grid(32, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.5));
    const SolveReport direct = solve_neumann(mu);
    const SolveReport flowed = solve_homotopy(mu);
    CHECK(flowed.method == SolveMethod::HOMOTOPY);
    CHECK(l2_diff(direct.f, flowed.f) <= 1e-6);

    const BeltramiCoefficient constant(constant_field(grid, cd(0.4, 0.0)));
    const SolveReport rep = solve_homotopy(constant);
    CHECK(max_pointwise_error(rep.f, cd(1.0 / 0.6, 0.0)) <= 1e-6);
}

TEST_CASE("homotopy validates its step count") {
    const PeriodicGrid grid(8, kTwoPi);
    const BeltramiCoefficient mu(constant_field(grid, cd(0.3, 0.0)));
    HomotopyConfig cfg;
    cfg.steps = 2;
    CHECK_THROWS_AS(solve_homotopy(mu, cfg), invalid_input);
}

TEST_CASE("tail check passes on the corpus and validates arguments") {
    const PeriodicGrid grid(32, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.5));
    const TailCheckReport rep = neumann_tail_check(mu, 5, 10);
    CHECK(rep.passed);
    CHECK(rep.max_l2_ratio <= 1.0 + 1e-9);
    CHECK(rep.max_h1_ratio <= 1.0 + 1e-9);

    CHECK_THROWS_AS(neumann_tail_check(mu, 0, 10), invalid_input);
    CHECK_THROWS_AS(neumann_tail_check(mu, 5, 0), invalid_input);
}

TEST_CASE("parameter dependence is holomorphic to second order") {
    const PeriodicGrid grid(16, kTwoPi);
    const BeltramiCoefficient mu(two_mode_field(grid, 0.5));
    const double coarse = parameter_analyticity_check(mu, cd(0.5, 0.0), 1e-2);
    const double fine = parameter_analyticity_check(mu, cd(0.5, 0.0), 5e-3);
    CHECK(coarse < 1e-3);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.2));

    CHECK_THROWS_AS(parameter_analyticity_check(mu, cd(0.5, 0.0), 0.0), invalid_input);
    // stencil would leave the admissible disc: (|t0| + h) * delta >= 1
    CHECK_THROWS_AS(parameter_analyticity_check(mu, cd(1.9, 0.0), 0.2), invalid_input);
}
