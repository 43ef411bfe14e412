#include "torun/kernels.hpp"

// AVX2 backend. Compiled with -mavx2 (and only this translation unit is).
// Mirrors kernels_scalar.cpp exactly: same rounding events, same lane
// residues, same combine order. FMA is deliberately not enabled; enabling it
// would contract mul+add pairs and break bit-equality with the scalar path.

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

namespace torun::kernels {
namespace {

constexpr std::size_t kChunk = 1024;

// [a0.re*b0.re - a0.im*b0.im, a0.im*b0.re + a0.re*b0.im, same for slot 1]
inline __m256d cmul2(__m256d va, __m256d vb) {
    const __m256d b_re = _mm256_movedup_pd(vb);
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);
    const __m256d a_sw = _mm256_permute_pd(va, 0x5);
    const __m256d t1 = _mm256_mul_pd(va, b_re);
    const __m256d t2 = _mm256_mul_pd(a_sw, b_im);
    return _mm256_addsub_pd(t1, t2);
}

void v_cmul(const cd* a, const cd* b, cd* out, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double* po = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        _mm256_storeu_pd(po + 2 * i, cmul2(va, vb));
    }
    for (; i < n; ++i) {
        const double x = a[i].real(), y = a[i].imag();
        const double c = b[i].real(), d = b[i].imag();
        out[i] = cd(x * c - y * d, y * c + x * d);
    }
}

void v_cmul_real(const cd* a, const double* w, cd* out, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    double* po = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m128d w2 = _mm_loadu_pd(w + i);
        const __m256d vw =
            _mm256_permute4x64_pd(_mm256_castpd128_pd256(w2), 0x50); // w0 w0 w1 w1
        _mm256_storeu_pd(po + 2 * i, _mm256_mul_pd(va, vw));
    }
    for (; i < n; ++i) out[i] = cd(a[i].real() * w[i], a[i].imag() * w[i]);
}

void v_caxpy(cd s, const cd* a, cd* out, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    double* po = reinterpret_cast<double*>(out);
    const __m256d vs = _mm256_setr_pd(s.real(), s.imag(), s.real(), s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vo = _mm256_loadu_pd(po + 2 * i);
        _mm256_storeu_pd(po + 2 * i, _mm256_add_pd(vo, cmul2(va, vs)));
    }
    for (; i < n; ++i) {
        const double x = a[i].real(), y = a[i].imag();
        const cd p(x * s.real() - y * s.imag(), y * s.real() + x * s.imag());
        out[i] = cd(out[i].real() + p.real(), out[i].imag() + p.imag());
    }
}

// Lanes of the running sum hold index residues [0, 2, 1, 3] (hadd order);
// combining lo128+hi128 then elem0+elem1 yields (l0+l1)+(l2+l3), matching
// the scalar combine.
inline double combine_0213(__m256d acc) {
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

// per-element |z|^2 for 4 consecutive complex values, in lane order 0,2,1,3
inline __m256d abs2_4(const double* p) {
    const __m256d v1 = _mm256_loadu_pd(p);
    const __m256d v2 = _mm256_loadu_pd(p + 4);
    return _mm256_hadd_pd(_mm256_mul_pd(v1, v1), _mm256_mul_pd(v2, v2));
}

double v_norm2_sq(const cd* a, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    double total = 0.0;
    for (std::size_t base = 0; base < n; base += kChunk) {
        const std::size_t len = (n - base < kChunk) ? n - base : kChunk;
        const std::size_t len4 = len & ~std::size_t{3};
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < len4; i += 4)
            acc = _mm256_add_pd(acc, abs2_4(pa + 2 * (base + i)));
        double chunk = combine_0213(acc);
        for (std::size_t i = len4; i < len; ++i) {
            const double r = a[base + i].real(), m = a[base + i].imag();
            chunk += r * r + m * m;
        }
        total += chunk;
    }
    return total;
}

double v_diff_norm2_sq(const cd* a, const cd* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double total = 0.0;
    for (std::size_t base = 0; base < n; base += kChunk) {
        const std::size_t len = (n - base < kChunk) ? n - base : kChunk;
        const std::size_t len4 = len & ~std::size_t{3};
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < len4; i += 4) {
            const double* qa = pa + 2 * (base + i);
            const double* qb = pb + 2 * (base + i);
            const __m256d d1 =
                _mm256_sub_pd(_mm256_loadu_pd(qa), _mm256_loadu_pd(qb));
            const __m256d d2 =
                _mm256_sub_pd(_mm256_loadu_pd(qa + 4), _mm256_loadu_pd(qb + 4));
            acc = _mm256_add_pd(
                acc, _mm256_hadd_pd(_mm256_mul_pd(d1, d1), _mm256_mul_pd(d2, d2)));
        }
        double chunk = combine_0213(acc);
        for (std::size_t i = len4; i < len; ++i) {
            const double r = a[base + i].real() - b[base + i].real();
            const double m = a[base + i].imag() - b[base + i].imag();
            chunk += r * r + m * m;
        }
        total += chunk;
    }
    return total;
}

double v_wnorm2_sq(const double* w, const cd* a, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    double total = 0.0;
    for (std::size_t base = 0; base < n; base += kChunk) {
        const std::size_t len = (n - base < kChunk) ? n - base : kChunk;
        const std::size_t len4 = len & ~std::size_t{3};
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t i = 0; i < len4; i += 4) {
            const __m256d sq = abs2_4(pa + 2 * (base + i));
            const __m256d vw = _mm256_permute4x64_pd(
                _mm256_loadu_pd(w + base + i), 0xD8); // w0 w2 w1 w3
            acc = _mm256_add_pd(acc, _mm256_mul_pd(vw, sq));
        }
        double chunk = combine_0213(acc);
        for (std::size_t i = len4; i < len; ++i) {
            const double r = a[base + i].real(), m = a[base + i].imag();
            chunk += w[base + i] * (r * r + m * m);
        }
        total += chunk;
    }
    return total;
}

double v_max_abs(const cd* a, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    __m256d vbest = _mm256_setzero_pd();
    std::size_t i = 0;
    const std::size_t n4 = n & ~std::size_t{3};
    for (; i < n4; i += 4) vbest = _mm256_max_pd(vbest, abs2_4(pa + 2 * i));
    const __m128d m2 = _mm_max_pd(_mm256_castpd256_pd128(vbest),
                                  _mm256_extractf128_pd(vbest, 1));
    double best = _mm_cvtsd_f64(_mm_max_sd(m2, _mm_unpackhi_pd(m2, m2)));
    for (; i < n; ++i) {
        const double r = a[i].real(), m = a[i].imag();
        const double sq = r * r + m * m;
        if (sq > best) best = sq;
    }
    return std::sqrt(best);
}

cd v_cdot(const cd* a, const cd* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double tre = 0.0, tim = 0.0;
    for (std::size_t base = 0; base < n; base += kChunk) {
        const std::size_t len = (n - base < kChunk) ? n - base : kChunk;
        const std::size_t len4 = len & ~std::size_t{3};
        __m256d accA = _mm256_setzero_pd(); // complex lanes: residues 0 and 1
        __m256d accB = _mm256_setzero_pd(); // complex lanes: residues 2 and 3
        for (std::size_t i = 0; i < len4; i += 4) {
            const double* qa = pa + 2 * (base + i);
            const double* qb = pb + 2 * (base + i);
            accA = _mm256_add_pd(
                accA, cmul2(_mm256_loadu_pd(qa), _mm256_loadu_pd(qb)));
            accB = _mm256_add_pd(
                accB, cmul2(_mm256_loadu_pd(qa + 4), _mm256_loadu_pd(qb + 4)));
        }
        // (l0+l2, l1+l3) then lane0+lane1, per component
        const __m256d s = _mm256_add_pd(accA, accB);
        const __m128d lo = _mm256_castpd256_pd128(s);
        const __m128d hi = _mm256_extractf128_pd(s, 1);
        const __m128d c = _mm_add_pd(lo, hi);
        double cre = _mm_cvtsd_f64(c);
        double cim = _mm_cvtsd_f64(_mm_unpackhi_pd(c, c));
        for (std::size_t i = len4; i < len; ++i) {
            const double x = a[base + i].real(), y = a[base + i].imag();
            const double cc = b[base + i].real(), d = b[base + i].imag();
            cre += x * cc - y * d;
            cim += y * cc + x * d;
        }
        tre += cre;
        tim += cim;
    }
    return cd(tre, tim);
}

const Backend kAvx2 = {
    "avx2",  v_cmul,      v_cmul_real, v_caxpy, v_norm2_sq,
    v_diff_norm2_sq, v_wnorm2_sq, v_max_abs,  v_cdot,
};

} // namespace

const Backend* avx2_backend_impl() { return &kAvx2; }

} // namespace torun::kernels

#else // !__AVX2__

namespace torun::kernels {
const Backend* avx2_backend_impl() { return nullptr; }
} // namespace torun::kernels

#endif
