#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops of the spectral pipeline. Every routine exists in
// a scalar reference version and (on x86-64 with AVX2) a vectorized version.
// The two are bit-identical by construction: the scalar code mirrors the lane
// structure, rounding order, and combine order of the vector code, and no FMA
// contraction is permitted in either. Reductions accumulate per 4-element
// residue lane inside fixed 1024-element chunks, combine lanes as
// (l0+l1)+(l2+l3), then sum chunk results in order; this keeps the result
// independent of the selected backend and bounds worst-case rounding noise.
namespace torun::kernels {

using cd = std::complex<double>;

struct Backend {
    const char* name;

    // out[i] = a[i] * b[i], components (ac - bd, ad + bc)
    void (*cmul)(const cd* a, const cd* b, cd* out, std::size_t n);
    // out[i] = a[i] * w[i], w real
    void (*cmul_real)(const cd* a, const double* w, cd* out, std::size_t n);
    // out[i] += s * a[i]
    void (*caxpy)(cd s, const cd* a, cd* out, std::size_t n);
    // sum_i |a[i]|^2
    double (*norm2_sq)(const cd* a, std::size_t n);
    // sum_i |a[i] - b[i]|^2
    double (*diff_norm2_sq)(const cd* a, const cd* b, std::size_t n);
    // sum_i w[i] * |a[i]|^2, w real
    double (*wnorm2_sq)(const double* w, const cd* a, std::size_t n);
    // max_i sqrt(re^2 + im^2)
    double (*max_abs)(const cd* a, std::size_t n);
    // sum_i a[i] * b[i] (unconjugated)
    cd (*cdot)(const cd* a, const cd* b, std::size_t n);
};

// Scalar reference backend (always available).
const Backend& scalar_backend();

// AVX2 backend, or nullptr when unsupported by the build or the CPU.
const Backend* avx2_backend();

// Active backend: AVX2 when available, overridable with TORUN_SIMD=scalar or
// TORUN_SIMD=avx2 (the latter fails hard if AVX2 is missing).
const Backend& active();

// Worker count for batched point evaluation, from TORUN_THREADS (default 1,
// clamped to [1, 256]). Parallel slices are disjoint, so results stay
// byte-identical at any setting.
int thread_count();

} // namespace torun::kernels
