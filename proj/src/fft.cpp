#include "torun/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace torun {
namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// FFTW planning is not thread-safe; new-array execution is. Plans are created
// once per resolution against a scratch buffer and reused via
// fftw_execute_dft, which FFTW_UNALIGNED makes legal for any array.
const PlanPair& plans_for(int n) {
    static std::mutex mtx;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    const std::size_t count = static_cast<std::size_t>(n) * n;
    fftw_complex* in = fftw_alloc_complex(count);
    fftw_complex* out = fftw_alloc_complex(count);
    PlanPair p;
    p.fwd = fftw_plan_dft_2d(n, n, in, out, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_2d(n, n, in, out, FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    return cache.emplace(n, p).first->second;
}

fftw_complex* as_fftw(std::vector<cd>& v) {
    return reinterpret_cast<fftw_complex*>(v.data());
}

} // namespace

SpectralField to_spectral(const PeriodicField& field) {
    validate_finite(field, "to_spectral");
    const int n = field.grid.n;
    SpectralField spec(field.grid);
    std::vector<cd> in = field.values; // fftw_execute_dft may scribble on input
    fftw_execute_dft(plans_for(n).fwd, as_fftw(in), as_fftw(spec.coeffs));
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (cd& c : spec.coeffs) c *= scale;
    return spec;
}

PeriodicField to_physical(const SpectralField& spec) {
    const int n = spec.grid.n;
    if (spec.coeffs.size() != spec.grid.size())
        throw invalid_input("to_physical: coefficient count does not match grid");
    PeriodicField field(spec.grid);
    std::vector<cd> in = spec.coeffs;
    fftw_execute_dft(plans_for(n).bwd, as_fftw(in), as_fftw(field.values));
    return field;
}

} // namespace torun
