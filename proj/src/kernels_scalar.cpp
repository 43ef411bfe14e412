#include "torun/kernels.hpp"

#include <cmath>

// Scalar reference backend. The arithmetic below intentionally mirrors the
// AVX2 backend instruction by instruction:
//   - complex multiply is (re = a.re*b.re - a.im*b.im, im = a.im*b.re + a.re*b.im)
//     with one rounding per multiply/add and no FMA contraction;
//   - reductions run in 1024-element chunks; inside a chunk, four
//     accumulators take the elements with index = 0,1,2,3 (mod 4);
//   - real reductions combine lanes as (l0+l1)+(l2+l3), complex dot combines
//     as (l0+l2)+(l1+l3) (the layout the vector registers impose), and chunk
//     tails are folded in element order after the lane combine;
//   - chunk partial sums are added sequentially.
// Any change here must be replicated in kernels_avx2.cpp or the equivalence
// tests will fail.

namespace torun::kernels {
namespace {

constexpr std::size_t kChunk = 1024;

inline cd mul1(cd a, cd b) {
    const double x = a.real(), y = a.imag();
    const double c = b.real(), d = b.imag();
    return cd(x * c - y * d, y * c + x * d);
}

void s_cmul(const cd* a, const cd* b, cd* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = mul1(a[i], b[i]);
}

void s_cmul_real(const cd* a, const double* w, cd* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = cd(a[i].real() * w[i], a[i].imag() * w[i]);
}

void s_caxpy(cd s, const cd* a, cd* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const cd p = mul1(a[i], s);
        out[i] = cd(out[i].real() + p.real(), out[i].imag() + p.imag());
    }
}

template <typename Term>
double reduce_real(std::size_t n, Term term) {
    double total = 0.0;
    for (std::size_t base = 0; base < n; base += kChunk) {
        const std::size_t len = (n - base < kChunk) ? n - base : kChunk;
        const std::size_t len4 = len & ~std::size_t{3};
        double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
        for (std::size_t i = 0; i < len4; i += 4) {
            l0 += term(base + i);
            l1 += term(base + i + 1);
            l2 += term(base + i + 2);
            l3 += term(base + i + 3);
        }
        double chunk = (l0 + l1) + (l2 + l3);
        for (std::size_t i = len4; i < len; ++i) chunk += term(base + i);
        total += chunk;
    }
    return total;
}

double s_norm2_sq(const cd* a, std::size_t n) {
    return reduce_real(n, [a](std::size_t i) {
        const double r = a[i].real(), m = a[i].imag();
        return r * r + m * m;
    });
}

double s_diff_norm2_sq(const cd* a, const cd* b, std::size_t n) {
    return reduce_real(n, [a, b](std::size_t i) {
        const double r = a[i].real() - b[i].real();
        const double m = a[i].imag() - b[i].imag();
        return r * r + m * m;
    });
}

double s_wnorm2_sq(const double* w, const cd* a, std::size_t n) {
    return reduce_real(n, [w, a](std::size_t i) {
        const double r = a[i].real(), m = a[i].imag();
        return w[i] * (r * r + m * m);
    });
}

double s_max_abs(const cd* a, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = a[i].real(), m = a[i].imag();
        const double sq = r * r + m * m;
        if (sq > best) best = sq;
    }
    return std::sqrt(best);
}

cd s_cdot(const cd* a, const cd* b, std::size_t n) {
    double tre = 0.0, tim = 0.0;
    for (std::size_t base = 0; base < n; base += kChunk) {
        const std::size_t len = (n - base < kChunk) ? n - base : kChunk;
        const std::size_t len4 = len & ~std::size_t{3};
        double re0 = 0, im0 = 0, re1 = 0, im1 = 0;
        double re2 = 0, im2 = 0, re3 = 0, im3 = 0;
        for (std::size_t i = 0; i < len4; i += 4) {
            cd p = mul1(a[base + i], b[base + i]);
            re0 += p.real(); im0 += p.imag();
            p = mul1(a[base + i + 1], b[base + i + 1]);
            re1 += p.real(); im1 += p.imag();
            p = mul1(a[base + i + 2], b[base + i + 2]);
            re2 += p.real(); im2 += p.imag();
            p = mul1(a[base + i + 3], b[base + i + 3]);
            re3 += p.real(); im3 += p.imag();
        }
        double cre = (re0 + re2) + (re1 + re3);
        double cim = (im0 + im2) + (im1 + im3);
        for (std::size_t i = len4; i < len; ++i) {
            const cd p = mul1(a[base + i], b[base + i]);
            cre += p.real();
            cim += p.imag();
        }
        tre += cre;
        tim += cim;
    }
    return cd(tre, tim);
}

const Backend kScalar = {
    "scalar", s_cmul,      s_cmul_real, s_caxpy, s_norm2_sq,
    s_diff_norm2_sq, s_wnorm2_sq, s_max_abs,  s_cdot,
};

} // namespace

const Backend& scalar_backend() { return kScalar; }

} // namespace torun::kernels
