#include "torun/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace torun::kernels {

// defined in kernels_avx2.cpp (nullptr when that TU was built without AVX2)
const Backend* avx2_backend_impl();

const Backend* avx2_backend() {
#if defined(__x86_64__) || defined(_M_X64)
    static const Backend* cached = [] {
        const Backend* impl = avx2_backend_impl();
        if (!impl) return static_cast<const Backend*>(nullptr);
        return __builtin_cpu_supports("avx2") ? impl
                                              : static_cast<const Backend*>(nullptr);
    }();
    return cached;
#else
    return nullptr;
#endif
}

const Backend& active() {
    static const Backend& chosen = [&]() -> const Backend& {
        const char* env = std::getenv("TORUN_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return scalar_backend();
        if (env && std::strcmp(env, "avx2") == 0) {
            const Backend* v = avx2_backend();
            if (!v) throw std::runtime_error("TORUN_SIMD=avx2 but AVX2 is unavailable");
            return *v;
        }
        const Backend* v = avx2_backend();
        return v ? *v : scalar_backend();
    }();
    return chosen;
}

int thread_count() {
    static const int cached = [] {
        const char* env = std::getenv("TORUN_THREADS");
        if (!env || !*env) return 1;
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) return 1;
        return v > 256 ? 256 : static_cast<int>(v);
    }();
    return cached;
}

} // namespace torun::kernels
