#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace snslab::fft {
namespace {

// FFTW's planner is not thread safe; execution with new-array functions is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Plan {
    int n = 0;
    double* real = nullptr;
    fftw_complex* complex = nullptr;
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    explicit Plan(int size) : n(size) {
        const std::size_t nr = static_cast<std::size_t>(n) * n;
        const std::size_t nc = static_cast<std::size_t>(n) * (n / 2 + 1);
        std::lock_guard lock(planner_mutex());
        real = fftw_alloc_real(nr);
        complex = fftw_alloc_complex(nc);
        r2c = fftw_plan_dft_r2c_2d(n, n, real, complex, FFTW_ESTIMATE);
        c2r = fftw_plan_dft_c2r_2d(n, n, complex, real, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
        fftw_free(real);
        fftw_free(complex);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

Plan& plan_for(int n) {
    thread_local std::map<int, std::unique_ptr<Plan>> plans;
    auto& slot = plans[n];
    if (!slot) slot = std::make_unique<Plan>(n);
    return *slot;
}

}  // namespace

void forward(int n, const double* physical, std::complex<double>* spectral) {
    Plan& p = plan_for(n);
    const std::size_t nr = static_cast<std::size_t>(n) * n;
    const std::size_t nc = static_cast<std::size_t>(n) * (n / 2 + 1);
    std::memcpy(p.real, physical, nr * sizeof(double));
    fftw_execute(p.r2c);
    const double scale = 1.0 / static_cast<double>(nr);
    for (std::size_t i = 0; i < nc; ++i) {
        spectral[i] = std::complex<double>(p.complex[i][0] * scale, p.complex[i][1] * scale);
    }
}

void backward(int n, const std::complex<double>* spectral, double* physical) {
    Plan& p = plan_for(n);
    const std::size_t nr = static_cast<std::size_t>(n) * n;
    const std::size_t nc = static_cast<std::size_t>(n) * (n / 2 + 1);
    // c2r overwrites its input, hence the copy into the plan's buffer.
    std::memcpy(p.complex, spectral, nc * sizeof(fftw_complex));
    fftw_execute(p.c2r);
    std::memcpy(physical, p.real, nr * sizeof(double));
}

}  // namespace snslab::fft
