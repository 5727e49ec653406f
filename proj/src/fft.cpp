#include "specwarp/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <memory>
#include <mutex>

namespace specwarp::fft {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;
using RealBuffer = std::unique_ptr<double[], FftwFree>;

ComplexBuffer alloc_complex(std::size_t n) {
    return ComplexBuffer(fftw_alloc_complex(n));
}

std::vector<std::complex<double>> transform_c2c(std::span<const std::complex<double>> in,
                                                int sign) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    if (n == 0) return out;

    ComplexBuffer buf_in = alloc_complex(n);
    ComplexBuffer buf_out = alloc_complex(n);

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf_in.get(), buf_out.get(), sign,
                                FFTW_ESTIMATE);
    }
    std::memcpy(buf_in.get(), in.data(), n * sizeof(fftw_complex));
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    // std::complex<double> is layout-compatible with fftw_complex.
    std::memcpy(static_cast<void*>(out.data()), buf_out.get(), n * sizeof(fftw_complex));
    return out;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) {
    return transform_c2c(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in) {
    auto out = transform_c2c(in, FFTW_BACKWARD);
    const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v *= scale;
    return out;
}

std::vector<std::complex<double>> forward_real(std::span<const double> in) {
    const std::size_t n = in.size();
    const std::size_t nbins = n / 2 + 1;
    std::vector<std::complex<double>> out(nbins);
    if (n == 0) return out;

    RealBuffer buf_in(fftw_alloc_real(n));
    ComplexBuffer buf_out = alloc_complex(nbins);

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf_in.get(), buf_out.get(),
                                    FFTW_ESTIMATE);
    }
    std::memcpy(buf_in.get(), in.data(), n * sizeof(double));
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    std::memcpy(static_cast<void*>(out.data()), buf_out.get(), nbins * sizeof(fftw_complex));
    return out;
}

}  // namespace specwarp::fft
