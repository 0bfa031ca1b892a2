#include "vortexlab/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vortexlab/spectral.hpp"

namespace vortexlab::checks {

namespace {

// Partial derivatives of psi, indexed by the number of x and y derivatives.
struct Partials {
    std::array<std::vector<cplx>, 10> d;  // 0, x, y, xx, xy, yy, xxx, xxy, xyy, yyy

    const std::vector<cplx>& at(int ax, int ay) const {
        static constexpr int slot[4][4] = {{0, 2, 5, 9}, {1, 4, 8, -1}, {3, 7, -1, -1}, {6, -1, -1, -1}};
        return d[static_cast<std::size_t>(slot[ax][ay])];
    }
};

Partials partials(const std::vector<cplx>& psi, const TransverseGrid& g, Fft2D& fft, int order) {
    std::vector<double> kx = angular_frequencies(g.nx, g.dx);
    std::vector<double> ky = angular_frequencies(g.ny, g.dy);
    if (g.nx % 2 == 0) kx[static_cast<std::size_t>(g.nx / 2)] = 0.0;
    if (g.ny % 2 == 0) ky[static_cast<std::size_t>(g.ny / 2)] = 0.0;
    std::vector<cplx> spec = psi;
    fft.forward(spec);

    Partials p;
    static constexpr int pairs[10][2] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
    for (int s = 0; s < 10; ++s) {
        const int ax = pairs[s][0], ay = pairs[s][1];
        if (ax + ay > order) continue;
        std::vector<cplx> t(spec.size());
        for (int j = 0; j < g.ny; ++j) {
            const cplx fy = std::pow(cplx{0.0, ky[static_cast<std::size_t>(j)]}, ay);
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                t[k] = spec[k] * std::pow(cplx{0.0, kx[static_cast<std::size_t>(i)]}, ax) * fy;
            }
        }
        fft.backward(t);
        p.d[static_cast<std::size_t>(s)] = std::move(t);
    }
    return p;
}

struct Flow {
    std::vector<double> vx, vy;
};

// v = Im(conj(psi) grad psi) / (k0 n).
Flow flow(const Partials& p, double k0) {
    const auto& f = p.at(0, 0);
    Flow v{std::vector<double>(f.size(), 0.0), std::vector<double>(f.size(), 0.0)};
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double n = std::norm(f[k]);
        if (!(n > 0.0)) continue;
        v.vx[k] = (std::conj(f[k]) * p.at(1, 0)[k]).imag() / (k0 * n);
        v.vy[k] = (std::conj(f[k]) * p.at(0, 1)[k]).imag() / (k0 * n);
    }
    return v;
}

}  // namespace

EulerResidual euler_residual(const SpinorField& f_minus, const SpinorField& f, const SpinorField& f_plus, double dz,
                             int lambda, double amp_fraction) {
    const TransverseGrid& g = f.grid;
    if (!f_minus.grid.same_plane(g) || !f_plus.grid.same_plane(g))
        throw GridMismatch("euler_residual: slices differ in geometry");
    if (!(dz > 0.0)) throw InvalidArgument("dz must be positive");
    const double k0 = g.k0();
    Fft2D fft(g.nx, g.ny);
    const Flow vm = flow(partials(f_minus.component(lambda), g, fft, 1), k0);
    const Flow vp = flow(partials(f_plus.component(lambda), g, fft, 1), k0);
    const Partials p = partials(f.component(lambda), g, fft, 3);
    const auto& psi = p.at(0, 0);

    double peak = 0.0;
    for (const cplx& v : psi) peak = std::max(peak, std::norm(v));
    const double floor = amp_fraction * amp_fraction * peak;

    EulerResidual out;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const double n = std::norm(psi[k]);
        if (!(n > floor)) continue;
        auto d = [&](int ax, int ay) { return p.at(ax, ay)[k]; };
        const cplx c = std::conj(psi[k]);
        // Derivatives of n up to third order.
        auto n1 = [&](int a) { return 2.0 * (c * d(a == 0, a == 1)).real(); };
        auto n2 = [&](int a, int b) {
            const int ax = (a == 0) + (b == 0), ay = 2 - ax;
            return 2.0 * (std::conj(d(a == 0, a == 1)) * d(b == 0, b == 1) + c * d(ax, ay)).real();
        };
        auto n3 = [&](int a, int b, int e) {
            const int idx[3] = {a, b, e};
            cplx s = 0.0;
            // d_e [conj(psi_a) psi_b + conj(psi) psi_ab]
            auto first = [&](int u) { return d(u == 0, u == 1); };
            auto second = [&](int u, int w) {
                const int ax = (u == 0) + (w == 0);
                return d(ax, 2 - ax);
            };
            s += std::conj(second(idx[0], idx[2])) * first(idx[1]);
            s += std::conj(first(idx[0])) * second(idx[1], idx[2]);
            s += std::conj(first(idx[2])) * second(idx[0], idx[1]);
            const int ax = (a == 0) + (b == 0) + (e == 0);
            s += c * d(ax, 3 - ax);
            return 2.0 * s.real();
        };
        const double gn[2] = {n1(0), n1(1)};
        const double lap = n2(0, 0) + n2(1, 1);
        const double gn2 = gn[0] * gn[0] + gn[1] * gn[1];
        double grad_q[2];
        for (int a = 0; a < 2; ++a) {
            const double dlap = n3(0, 0, a) + n3(1, 1, a);
            const double dgn2 = 2.0 * (gn[0] * n2(0, a) + gn[1] * n2(1, a));
            grad_q[a] = (dlap / (2.0 * n) - lap * gn[a] / (2.0 * n * n) - dgn2 / (4.0 * n * n) +
                         gn2 * gn[a] / (2.0 * n * n * n)) /
                        (2.0 * k0 * k0);
        }
        // grad v from psi: d_a v_b = [Im(conj(psi_a) psi_b + conj(psi) psi_ab) - k0 v_b d_a n] / (k0 n)
        const double v[2] = {(c * d(1, 0)).imag() / (k0 * n), (c * d(0, 1)).imag() / (k0 * n)};
        double conv[2];
        for (int b = 0; b < 2; ++b) {
            conv[b] = 0.0;
            for (int a = 0; a < 2; ++a) {
                const int ax = (a == 0) + (b == 0);
                const double im = (std::conj(d(a == 0, a == 1)) * d(b == 0, b == 1) + c * d(ax, 2 - ax)).imag();
                conv[b] += v[a] * (im - k0 * v[b] * gn[a]) / (k0 * n);
            }
        }
        const double dzx = (vp.vx[k] - vm.vx[k]) / (2.0 * dz);
        const double dzy = (vp.vy[k] - vm.vy[k]) / (2.0 * dz);
        const double rx = dzx + conv[0] - grad_q[0];
        const double ry = dzy + conv[1] - grad_q[1];
        out.max_residual = std::max(out.max_residual, std::hypot(rx, ry));
        out.max_dz_v = std::max(out.max_dz_v, std::hypot(dzx, dzy));
        ++out.samples;
    }
    out.relative = out.max_dz_v > 0.0 ? out.max_residual / out.max_dz_v : 0.0;
    return out;
}

}  // namespace vortexlab::checks
