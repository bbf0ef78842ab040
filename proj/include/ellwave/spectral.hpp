#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace ellwave::spectral {

using cplx = std::complex<double>;

// Unnormalised forward transform, normalised inverse. One instance per thread.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }
    void forward(const std::vector<cplx>& in, std::vector<cplx>& out);
    void inverse(const std::vector<cplx>& in, std::vector<cplx>& out);

private:
    struct Plans;
    int n_;
    std::unique_ptr<Plans> p_;
};

// Angular wavenumbers 2 pi j / L in FFT order.
std::vector<double> wavenumbers(int n, double length);

// d^order/dx^order of a periodic sample; the Nyquist mode is dropped for odd orders.
std::vector<cplx> derivative(Fft& fft, const std::vector<cplx>& f, double length, int order);

}  // namespace ellwave::spectral
