#include "torun/ops.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>

#include "torun/fft.hpp"
#include "torun/kernels.hpp"

namespace torun {
namespace {

std::vector<cd> build_table(SymbolKind kind, const PeriodicGrid& grid) {
    const int n = grid.n;
    const double s = kTwoPi / grid.period;
    std::vector<cd> table(grid.size());
    for (int k1 = 0; k1 < n; ++k1) {
        const int m1 = SpectralField::mode_of(k1, n);
        for (int k2 = 0; k2 < n; ++k2) {
            const int m2 = SpectralField::mode_of(k2, n);
            cd mult;
            switch (kind) {
            case SymbolKind::DZ:
                // (i/2)(m1 - i m2) * s = s*(m2 + i m1)/2
                mult = (m1 == -n / 2 || m2 == -n / 2)
                           ? cd(0.0, 0.0)
                           : cd(s * m2 / 2.0, s * m1 / 2.0);
                break;
            case SymbolKind::DZBAR:
                // (i/2)(m1 + i m2) * s = s*(-m2 + i m1)/2 = -conj(DZ entry)
                mult = (m1 == -n / 2 || m2 == -n / 2)
                           ? cd(0.0, 0.0)
                           : cd(-(s * m2 / 2.0), s * m1 / 2.0);
                break;
            case SymbolKind::U:
                // (m1 - i m2)/(m1 + i m2); the rational component form
                // ((m1^2-m2^2) - 2i m1 m2)/(m1^2+m2^2) keeps each component
                // within half an ulp, so composing with DZBAR reproduces DZ
                // to < 2 ulps per mode. Identity at the zero mode.
                if (m1 == 0 && m2 == 0) {
                    mult = cd(1.0, 0.0);
                } else {
                    const double den = static_cast<double>(m1) * m1 +
                                       static_cast<double>(m2) * m2;
                    mult = cd((static_cast<double>(m1) * m1 -
                               static_cast<double>(m2) * m2) / den,
                              -2.0 * m1 * m2 / den);
                }
                break;
            }
            table[static_cast<std::size_t>(k1) * n + k2] = mult;
        }
    }
    return table;
}

} // namespace

const std::vector<cd>& symbol_table(SymbolKind kind, const PeriodicGrid& grid) {
    using Key = std::tuple<int, int, std::uint64_t>;
    static std::mutex mtx;
    static std::map<Key, std::vector<cd>> cache;
    const Key key{static_cast<int>(kind), grid.n, std::bit_cast<std::uint64_t>(grid.period)};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_table(kind, grid)).first;
    return it->second;
}

SpectralField apply_symbol(const SpectralField& spec, OperatorSymbol sym) {
    if (spec.coeffs.size() != spec.grid.size())
        throw invalid_input("apply_symbol: coefficient count does not match grid");
    const std::vector<cd>& table = symbol_table(sym.kind, spec.grid);
    SpectralField out(spec.grid);
    kernels::active().cmul(spec.coeffs.data(), table.data(), out.coeffs.data(),
                           spec.coeffs.size());
    return out;
}

bool in_keep_band(int m1, int m2, int n) {
    const int a1 = m1 < 0 ? -m1 : m1;
    const int a2 = m2 < 0 ? -m2 : m2;
    return 3 * (a1 > a2 ? a1 : a2) <= n;
}

void dealias(SpectralField& spec) {
    const int n = spec.grid.n;
    for (int k1 = 0; k1 < n; ++k1) {
        const int m1 = SpectralField::mode_of(k1, n);
        for (int k2 = 0; k2 < n; ++k2) {
            const int m2 = SpectralField::mode_of(k2, n);
            if (!in_keep_band(m1, m2, n))
                spec.coeffs[static_cast<std::size_t>(k1) * n + k2] = cd(0.0, 0.0);
        }
    }
}

PeriodicField multiply_dealiased(const PeriodicField& a, const PeriodicField& b) {
    if (!(a.grid == b.grid)) throw invalid_input("multiply_dealiased: grid mismatch");
    PeriodicField prod(a.grid);
    kernels::active().cmul(a.values.data(), b.values.data(), prod.values.data(),
                           prod.values.size());
    SpectralField spec = to_spectral(prod);
    dealias(spec);
    return to_physical(spec);
}

double sobolev_norm(const SpectralField& spec, int j) {
    if (j < 0 || j > 8)
        throw invalid_input("sobolev_norm: order must be in [0, 8]");
    const int n = spec.grid.n;
    std::vector<double> w(spec.grid.size());
    for (int k1 = 0; k1 < n; ++k1) {
        const int m1 = SpectralField::mode_of(k1, n);
        for (int k2 = 0; k2 < n; ++k2) {
            const int m2 = SpectralField::mode_of(k2, n);
            const double base = 1.0 + static_cast<double>(m1) * m1 +
                                static_cast<double>(m2) * m2;
            double weight = 1.0;
            for (int t = 0; t < j; ++t) weight *= base;
            w[static_cast<std::size_t>(k1) * n + k2] = weight;
        }
    }
    return std::sqrt(
        kernels::active().wnorm2_sq(w.data(), spec.coeffs.data(), spec.coeffs.size()));
}

double sobolev_norm(const PeriodicField& field, int j) {
    return sobolev_norm(to_spectral(field), j);
}

SpectralField derivative_x(const SpectralField& spec, int axis) {
    if (axis != 0 && axis != 1) throw invalid_input("derivative_x: axis must be 0 or 1");
    const int n = spec.grid.n;
    const double s = kTwoPi / spec.grid.period;
    SpectralField out(spec.grid);
    for (int k1 = 0; k1 < n; ++k1) {
        const int m1 = SpectralField::mode_of(k1, n);
        for (int k2 = 0; k2 < n; ++k2) {
            const int m2 = SpectralField::mode_of(k2, n);
            const int m = axis == 0 ? m1 : m2;
            const std::size_t idx = static_cast<std::size_t>(k1) * n + k2;
            if (m1 == -n / 2 || m2 == -n / 2) continue;
            out.coeffs[idx] = spec.coeffs[idx] * cd(0.0, s * m);
        }
    }
    return out;
}

double top_band_energy_fraction(const SpectralField& spec) {
    const int n = spec.grid.n;
    double total = 0.0, top = 0.0;
    for (int k1 = 0; k1 < n; ++k1) {
        const int m1 = SpectralField::mode_of(k1, n);
        for (int k2 = 0; k2 < n; ++k2) {
            const int m2 = SpectralField::mode_of(k2, n);
            const cd c = spec.coeffs[static_cast<std::size_t>(k1) * n + k2];
            const double e = c.real() * c.real() + c.imag() * c.imag();
            total += e;
            if (!in_keep_band(m1, m2, n)) top += e;
        }
    }
    return total > 0.0 ? top / total : 0.0;
}

} // namespace torun
