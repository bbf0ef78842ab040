#include "ellwave/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include "ellwave/errors.hpp"

namespace ellwave::spectral {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

}  // namespace

struct Fft::Plans {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

Fft::Fft(int n) : n_(n), p_(std::make_unique<Plans>())
{
    if (n < 2) throw UsageError("transform size must be at least 2");
    std::lock_guard<std::mutex> lock(planner_mutex());
    p_->in = fftw_alloc_complex(n);
    p_->out = fftw_alloc_complex(n);
    p_->fwd = fftw_plan_dft_1d(n, p_->in, p_->out, FFTW_FORWARD, FFTW_ESTIMATE);
    p_->bwd = fftw_plan_dft_1d(n, p_->in, p_->out, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(p_->fwd);
    fftw_destroy_plan(p_->bwd);
    fftw_free(p_->in);
    fftw_free(p_->out);
}

void Fft::forward(const std::vector<cplx>& in, std::vector<cplx>& out)
{
    if (static_cast<int>(in.size()) != n_) throw UsageError("transform input has the wrong length");
    std::memcpy(p_->in, in.data(), sizeof(fftw_complex) * n_);
    fftw_execute(p_->fwd);
    out.resize(n_);
    std::memcpy(static_cast<void*>(out.data()), p_->out, sizeof(fftw_complex) * n_);
}

void Fft::inverse(const std::vector<cplx>& in, std::vector<cplx>& out)
{
    if (static_cast<int>(in.size()) != n_) throw UsageError("transform input has the wrong length");
    std::memcpy(p_->in, in.data(), sizeof(fftw_complex) * n_);
    fftw_execute(p_->bwd);
    out.resize(n_);
    std::memcpy(static_cast<void*>(out.data()), p_->out, sizeof(fftw_complex) * n_);
    for (auto& v : out) v /= static_cast<double>(n_);
}

std::vector<double> wavenumbers(int n, double length)
{
    std::vector<double> k(n);
    const double base = 2.0 * std::numbers::pi / length;
    for (int j = 0; j < n; ++j) k[j] = base * (j <= n / 2 - (n % 2 == 0 ? 1 : 0) ? j : j - n);
    if (n % 2 == 0) k[n / 2] = base * (n / 2);
    return k;
}

std::vector<cplx> derivative(Fft& fft, const std::vector<cplx>& f, double length, int order)
{
    const int n = fft.size();
    std::vector<cplx> hat;
    fft.forward(f, hat);
    const auto k = wavenumbers(n, length);
    const cplx I{0.0, 1.0};
    for (int j = 0; j < n; ++j) {
        if (n % 2 == 0 && j == n / 2 && order % 2 == 1) {
            hat[j] = 0.0;
            continue;
        }
        hat[j] *= std::pow(I * k[j], order);
    }
    std::vector<cplx> out;
    fft.inverse(hat, out);
    return out;
}

}  // namespace ellwave::spectral
