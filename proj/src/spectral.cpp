#include "vortexlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <numbers>

namespace vortexlab {

Fft2D::Fft2D(int nx, int ny) : nx_(nx), ny_(ny) {
    const auto n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    buf_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buf_) throw std::bad_alloc();
    auto* b = reinterpret_cast<fftw_complex*>(buf_);
    // FFTW takes (slow, fast) dimensions.
    fwd_ = fftw_plan_dft_2d(ny, nx, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(ny, nx, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2D::~Fft2D() {
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
    fftw_free(buf_);
}

void Fft2D::run(void* plan, std::vector<cplx>& data) {
    const auto n = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
    if (data.size() != n) throw GridMismatch("FFT buffer has the wrong size");
    std::copy(data.begin(), data.end(), buf_);
    fftw_execute(static_cast<fftw_plan>(plan));
    std::copy(buf_, buf_ + n, data.begin());
}

void Fft2D::forward(std::vector<cplx>& data) { run(fwd_, data); }

void Fft2D::backward(std::vector<cplx>& data) {
    run(bwd_, data);
    const double s = 1.0 / (static_cast<double>(nx_) * static_cast<double>(ny_));
    for (auto& v : data) v *= s;
}

std::vector<double> angular_frequencies(int n, double d) {
    std::vector<double> k(static_cast<std::size_t>(n));
    const double base = 2.0 * std::numbers::pi / (n * d);
    for (int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = base * (i <= (n - 1) / 2 ? i : i - n);
    return k;
}

Gradient spectral_gradient(const std::vector<cplx>& f, const TransverseGrid& g) {
    Fft2D fft(g.nx, g.ny);
    return spectral_gradient(f, g, fft);
}

Gradient spectral_gradient(const std::vector<cplx>& f, const TransverseGrid& g, Fft2D& fft) {
    std::vector<cplx> spec = f;
    fft.forward(spec);
    auto kx = angular_frequencies(g.nx, g.dx);
    auto ky = angular_frequencies(g.ny, g.dy);
    if (g.nx % 2 == 0) kx[static_cast<std::size_t>(g.nx / 2)] = 0.0;
    if (g.ny % 2 == 0) ky[static_cast<std::size_t>(g.ny / 2)] = 0.0;
    Gradient out{spec, spec};
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            out.dx[k] *= cplx{0.0, kx[static_cast<std::size_t>(i)]};
            out.dy[k] *= cplx{0.0, ky[static_cast<std::size_t>(j)]};
        }
    }
    fft.backward(out.dx);
    fft.backward(out.dy);
    return out;
}

Gradient fd4_gradient(const std::vector<cplx>& f, const TransverseGrid& g) {
    Gradient out{std::vector<cplx>(f.size()), std::vector<cplx>(f.size())};
    const int nx = g.nx, ny = g.ny;
    auto at = [&](int i, int j) { return f[g.index((i + nx) % nx, (j + ny) % ny)]; };
    const double cx = 1.0 / (12.0 * g.dx);
    const double cy = 1.0 / (12.0 * g.dy);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t k = g.index(i, j);
            out.dx[k] = cx * (at(i - 2, j) - 8.0 * at(i - 1, j) + 8.0 * at(i + 1, j) - at(i + 2, j));
            out.dy[k] = cy * (at(i, j - 2) - 8.0 * at(i, j - 1) + 8.0 * at(i, j + 1) - at(i, j + 2));
        }
    }
    return out;
}

}  // namespace vortexlab
