#pragma once

#include <vector>

#include "vortexlab/grid.hpp"

namespace vortexlab {

/// In-place 2D FFT pair on a fixed nx-by-ny shape, row-major with x fastest.
/// Plans use FFTW_ESTIMATE so results do not depend on timing.
class Fft2D {
public:
    Fft2D(int nx, int ny);
    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    void forward(std::vector<cplx>& data);
    /// Inverse transform including the 1/(nx*ny) factor.
    void backward(std::vector<cplx>& data);

    int nx() const { return nx_; }
    int ny() const { return ny_; }

private:
    void run(void* plan, std::vector<cplx>& data);

    int nx_, ny_;
    cplx* buf_;
    void* fwd_;
    void* bwd_;
};

/// Angular wavenumbers 2*pi*fftfreq(n, d).
std::vector<double> angular_frequencies(int n, double d);

struct Gradient {
    std::vector<cplx> dx;
    std::vector<cplx> dy;
};

/// Spectral derivative; the Nyquist bin is dropped so that real fields map
/// to real derivatives.
Gradient spectral_gradient(const std::vector<cplx>& f, const TransverseGrid& g);
Gradient spectral_gradient(const std::vector<cplx>& f, const TransverseGrid& g, Fft2D& fft);

/// Fourth-order central differences with periodic wrap at the borders.
Gradient fd4_gradient(const std::vector<cplx>& f, const TransverseGrid& g);

}  // namespace vortexlab
