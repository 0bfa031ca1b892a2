#include "vortexlab/observables.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "vortexlab/spectral.hpp"

namespace vortexlab {

Densities densities(const SpinorField& f) {
    Densities d{ScalarField(f.grid), ScalarField(f.grid)};
    for (std::size_t k = 0; k < f.grid.size(); ++k) {
        const double a = std::norm(f.plus[k]);
        const double b = std::norm(f.minus[k]);
        d.pnd.values[k] = a + b;
        d.helicity.values[k] = a - b;
    }
    return d;
}

Currents currents(const SpinorField& f, GradientMethod method) {
    const TransverseGrid& g = f.grid;
    Currents c{VectorField2D(g), VectorField2D(g)};
    const double inv_k0 = 1.0 / g.k0();
    std::unique_ptr<Fft2D> fft;
    if (method == GradientMethod::spectral) fft = std::make_unique<Fft2D>(g.nx, g.ny);
    for (int lambda : {+1, -1}) {
        const auto& psi = f.component(lambda);
        const Gradient grad = method == GradientMethod::spectral ? spectral_gradient(psi, g, *fft)
                                                                 : fd4_gradient(psi, g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double jx = inv_k0 * (std::conj(psi[k]) * grad.dx[k]).imag();
            const double jy = inv_k0 * (std::conj(psi[k]) * grad.dy[k]).imag();
            c.j_n.vx[k] += jx;
            c.j_n.vy[k] += jy;
            c.j_h.vx[k] += lambda * jx;
            c.j_h.vy[k] += lambda * jy;
        }
    }
    return c;
}

Velocities velocities(const Densities& d, const Currents& c, double mask_threshold) {
    if (!(mask_threshold > 0.0 && mask_threshold < 1.0))
        throw InvalidArgument("mask_threshold must lie in (0, 1)");
    const TransverseGrid& g = d.pnd.grid;
    Velocities v{VectorField2D(g), VectorField2D(g)};
    const double peak = *std::max_element(d.pnd.values.begin(), d.pnd.values.end());
    const double floor = mask_threshold * peak;
    v.v_n.mask.assign(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double n = d.pnd.values[k];
        if (!(n >= floor) || n <= 0.0) {
            v.v_n.mask[k] = 1;
            continue;
        }
        v.v_n.vx[k] = c.j_n.vx[k] / n;
        v.v_n.vy[k] = c.j_n.vy[k] / n;
        v.v_h.vx[k] = c.j_h.vx[k] / n;
        v.v_h.vy[k] = c.j_h.vy[k] / n;
    }
    v.v_h.mask = v.v_n.mask;
    return v;
}

Velocities velocities(const SpinorField& f, double mask_threshold, GradientMethod method) {
    return velocities(densities(f), currents(f, method), mask_threshold);
}

ObservableSet compute_observables(const SpinorField& f, double mask_threshold, GradientMethod method) {
    Densities d = densities(f);
    Currents c = currents(f, method);
    Velocities v = velocities(d, c, mask_threshold);
    ObservableSet o;
    o.pnd = std::move(d.pnd);
    o.helicity = std::move(d.helicity);
    o.j_n = std::move(c.j_n);
    o.j_h = std::move(c.j_h);
    o.v_n = std::move(v.v_n);
    o.v_h = std::move(v.v_h);
    o.mask_threshold = mask_threshold;
    return o;
}

OamExpectation oam_expectation(const SpinorField& f_minus, const SpinorField& f, const SpinorField& f_plus,
                               double dz) {
    const TransverseGrid& g = f.grid;
    if (!f_minus.grid.same_plane(g) || !f_plus.grid.same_plane(g))
        throw GridMismatch("oam_expectation: slices differ in geometry");
    if (!(dz > 0.0)) throw InvalidArgument("dz must be positive");
    const double tol = 1e-9 * std::max(1.0, std::abs(g.z)) + 1e-6 * dz;
    if (std::abs(f_minus.grid.z - (g.z - dz)) > tol || std::abs(f_plus.grid.z - (g.z + dz)) > tol)
        throw InvalidArgument("oam_expectation: slices are not at z - dz, z, z + dz");

    const double k0 = g.k0();
    const double z = g.z;
    const cplx fwd = std::polar(1.0, k0 * dz);
    const cplx bwd = std::conj(fwd);
    const cplx minus_i{0.0, -1.0};
    Fft2D fft(g.nx, g.ny);
    cplx lx{0.0, 0.0}, ly{0.0, 0.0}, lz{0.0, 0.0};
    double norm = 0.0;
    for (int lambda : {+1, -1}) {
        const auto& psi = f.component(lambda);
        const auto& pm = f_minus.component(lambda);
        const auto& pp = f_plus.component(lambda);
        const Gradient grad = spectral_gradient(psi, g, fft);
        for (int j = 0; j < g.ny; ++j) {
            const double y = g.y(j);
            for (int i = 0; i < g.nx; ++i) {
                const double x = g.x(i);
                const std::size_t k = g.index(i, j);
                const cplx c = std::conj(psi[k]);
                // d/dz of the full field, divided by the midpoint carrier.
                const cplx dpz = (pp[k] * fwd - pm[k] * bwd) / (2.0 * dz);
                lx += c * minus_i * (y * dpz - z * grad.dy[k]);
                ly += c * minus_i * (z * grad.dx[k] - x * dpz);
                lz += c * minus_i * (x * grad.dy[k] - y * grad.dx[k]);
                norm += std::norm(psi[k]);
            }
        }
    }
    if (!(norm > 0.0)) throw ZeroField("oam_expectation: zero field");
    return {lx.real() / norm, ly.real() / norm, lz.real() / norm};
}

}  // namespace vortexlab
