#include "torun/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "torun/ops.hpp"

namespace torun {
namespace {

// e^{-2 pi i r / n} for r = 0..n-1
std::vector<cd> twiddle(int n, double sign) {
    std::vector<cd> w(n);
    for (int r = 0; r < n; ++r) {
        const double ang = sign * kTwoPi * r / n;
        w[r] = cd(std::cos(ang), std::sin(ang));
    }
    return w;
}

} // namespace

PeriodicField dense_oracle_solve(const BeltramiCoefficient& mu) {
    const PeriodicGrid& grid = mu.mu.grid;
    const int n = grid.n;
    if (n > 16)
        throw invalid_input("dense_oracle_solve: grid capped at n = 16 (dense system)");
    const int nn = n * n;

    // Analysis by plain DFT summation.
    const std::vector<cd> wm = twiddle(n, -1.0);
    std::vector<cd> mu_hat(nn, cd(0.0, 0.0));
    for (int k1 = 0; k1 < n; ++k1)
        for (int k2 = 0; k2 < n; ++k2) {
            cd acc(0.0, 0.0);
            for (int j1 = 0; j1 < n; ++j1)
                for (int j2 = 0; j2 < n; ++j2)
                    acc += mu.mu.at(j1, j2) * wm[(k1 * j1 + k2 * j2) % n];
            mu_hat[k1 * n + k2] = acc / static_cast<double>(nn);
        }

    // (Id - A) f_hat = e_0 over all n^2 modes; multiplication by mu is a
    // convolution (cyclic in FFT index space, which is exactly what the grid
    // product aliases to), then the 2/3 projection and the U multiplier.
    const std::vector<cd>& u_table = symbol_table(SymbolKind::U, grid);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(nn, nn);
    for (int p1 = 0; p1 < n; ++p1)
        for (int p2 = 0; p2 < n; ++p2) {
            const int row = p1 * n + p2;
            const int m1 = SpectralField::mode_of(p1, n);
            const int m2 = SpectralField::mode_of(p2, n);
            if (!in_keep_band(m1, m2, n)) continue;
            const cd u = u_table[row];
            for (int q1 = 0; q1 < n; ++q1)
                for (int q2 = 0; q2 < n; ++q2) {
                    const int col = q1 * n + q2;
                    const int d1 = (p1 - q1 + n) % n;
                    const int d2 = (p2 - q2 + n) % n;
                    A(row, col) = u * mu_hat[d1 * n + d2];
                }
        }

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(nn, nn) - A;
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(nn);
    e0(0) = cd(1.0, 0.0);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    Eigen::VectorXcd f_hat = lu.solve(e0);

    const double rel = (M * f_hat - e0).norm() / f_hat.norm();
    if (!(rel < 1e-9))
        throw convergence_error(
            "dense oracle system numerically singular (discretization bug): "
            "relative solve residual " +
            std::to_string(rel));

    // Synthesis by plain DFT summation.
    const std::vector<cd> wp = twiddle(n, 1.0);
    PeriodicField f(grid);
    for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2) {
            cd acc(0.0, 0.0);
            for (int k1 = 0; k1 < n; ++k1)
                for (int k2 = 0; k2 < n; ++k2)
                    acc += f_hat(k1 * n + k2) * wp[(k1 * j1 + k2 * j2) % n];
            f.at(j1, j2) = acc;
        }
    return f;
}

} // namespace torun
