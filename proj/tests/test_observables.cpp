#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vortexlab/beam.hpp"
#include "vortexlab/observables.hpp"

using namespace vortexlab;

namespace {

constexpr double pi = std::numbers::pi;

SpinorField plane_wave(const TransverseGrid& g, double kx, double ky, cplx cp, cplx cm) {
    SpinorField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const cplx e = std::polar(1.0, kx * g.x(i) + ky * g.y(j));
            f.plus[g.index(i, j)] = cp * e;
            f.minus[g.index(i, j)] = cm * e;
        }
    return f;
}

SpinorField beam(int p, int m, PolKind pol, const TransverseGrid& g) {
    BeamComponent c;
    c.p = p;
    c.m = m;
    c.pol.kind = pol;
    return synthesize(BeamSpec{{c}}, g);
}

}  // namespace

TEST(Observables, PlaneWaveCurrents) {
    const auto g = TransverseGrid::centered(32, 32, 0.5, 0.5);
    const double kx = 2.0 * pi * 2.0 / 16.0, ky = 2.0 * pi * 1.0 / 16.0;
    for (auto [cp, cm] : {std::pair<cplx, cplx>{1.0, 0.0}, {0.0, 1.0}, {0.6, cplx{0.0, 0.8}}}) {
        const SpinorField f = plane_wave(g, kx, ky, cp, cm);
        for (auto method : {GradientMethod::spectral, GradientMethod::fd4}) {
            const Currents c = currents(f, method);
            const Densities d = densities(f);
            const double hel = std::norm(cp) - std::norm(cm);
            const double tol = method == GradientMethod::spectral ? 1e-13 : 2e-3;
            for (std::size_t k = 0; k < g.size(); k += 37) {
                EXPECT_NEAR(d.pnd.values[k], 1.0, 1e-14);
                EXPECT_NEAR(d.helicity.values[k], hel, 1e-14);
                EXPECT_NEAR(c.j_n.vx[k], kx / g.k0(), tol * kx / g.k0());
                EXPECT_NEAR(c.j_n.vy[k], ky / g.k0(), tol * kx / g.k0());
                EXPECT_NEAR(c.j_h.vx[k], hel * kx / g.k0(), tol * kx / g.k0());
            }
        }
    }
}

TEST(Observables, LinearPolarizationCarriesNoHelicity) {
    const auto g = TransverseGrid::centered(128, 128, 0.6, 0.6);
    for (auto pol : {PolKind::linear_x, PolKind::linear_y}) {
        const SpinorField f = beam(0, 2, pol, g);
        const ObservableSet o = compute_observables(f);
        double jh = 0.0, nh = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            jh = std::max(jh, std::hypot(o.j_h.vx[k], o.j_h.vy[k]));
            nh = std::max(nh, std::abs(o.helicity.values[k]));
        }
        EXPECT_LT(jh, 1e-16);
        EXPECT_LT(nh, 1e-16);
    }
}

TEST(Observables, AzimuthalVelocityOfLaguerreGauss) {
    // v_phi = m / (k0 rho) at the waist, independent of p.
    const auto g = TransverseGrid::centered(256, 256, 0.45, 0.45);
    for (int m : {-2, 1, 3}) {
        const SpinorField f = beam(1, m, PolKind::circular_plus, g);
        const Velocities v = velocities(f, 1e-3);
        int checked = 0;
        for (int j = 0; j < g.ny; j += 7) {
            for (int i = 0; i < g.nx; i += 7) {
                const std::size_t k = g.index(i, j);
                if (v.v_n.masked(k)) continue;
                const double x = g.x(i), y = g.y(j), rho = std::hypot(x, y);
                if (rho < 2.0 || rho > 25.0) continue;
                const double vphi = (-y * v.v_n.vx[k] + x * v.v_n.vy[k]) / rho;
                const double vrho = (x * v.v_n.vx[k] + y * v.v_n.vy[k]) / rho;
                EXPECT_NEAR(vphi, m / (g.k0() * rho), 1e-8);
                EXPECT_NEAR(vrho, 0.0, 1e-8);
                ++checked;
            }
        }
        EXPECT_GT(checked, 100);
    }
}

TEST(Observables, VelocityMaskFollowsThreshold) {
    const auto g = TransverseGrid::centered(64, 64, 1.0, 1.0);
    const SpinorField f = beam(0, 1, PolKind::circular_plus, g);
    const Densities d = densities(f);
    const double peak = *std::max_element(d.pnd.values.begin(), d.pnd.values.end());
    const Velocities v = velocities(f, 1e-2);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(v.v_n.masked(k), d.pnd.values[k] < 1e-2 * peak);
}

TEST(Observables, SpectralAndFd4Agree) {
    const auto g = TransverseGrid::centered(256, 256, 0.45, 0.45);
    const SpinorField f = beam(1, 2, PolKind::linear_x, g);
    const Currents a = currents(f, GradientMethod::spectral);
    const Currents b = currents(f, GradientMethod::fd4);
    double diff = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        diff = std::max(diff, std::hypot(a.j_n.vx[k] - b.j_n.vx[k], a.j_n.vy[k] - b.j_n.vy[k]));
        scale = std::max(scale, std::hypot(a.j_n.vx[k], a.j_n.vy[k]));
    }
    EXPECT_LT(diff / scale, 1e-4);
}

TEST(Oam, LaguerreGaussExpectations) {
    const auto g = TransverseGrid::centered(256, 256, 0.45, 0.45);
    const double dz = rayleigh_length(10.0, 1.0) / 200.0;
    for (int m : {-3, 0, 2}) {
        for (auto pol : {PolKind::circular_minus, PolKind::linear_y}) {
            const OamExpectation l =
                oam_expectation(beam(1, m, pol, g.at_z(-dz)), beam(1, m, pol, g), beam(1, m, pol, g.at_z(dz)), dz);
            EXPECT_NEAR(l.lz, m, 1e-8);
            EXPECT_NEAR(l.lx, 0.0, 1e-8);
            EXPECT_NEAR(l.ly, 0.0, 1e-8);
        }
    }
}

TEST(Oam, SuperpositionAveragesCharges) {
    const auto g = TransverseGrid::centered(256, 256, 0.45, 0.45);
    BeamComponent a, b;
    a.m = 1;
    b.m = -2;
    a.amplitude = std::sqrt(0.25);
    b.amplitude = {0.0, std::sqrt(0.75)};
    const BeamSpec s{{a, b}};
    const double dz = 1.0;
    const OamExpectation l = oam_expectation(synthesize(s, g.at_z(-dz)), synthesize(s, g), synthesize(s, g.at_z(dz)), dz);
    EXPECT_NEAR(l.lz, 0.25 * 1 + 0.75 * -2, 1e-8);
}

TEST(Oam, RejectsMismatchedSlices) {
    const auto g = TransverseGrid::centered(32, 32, 1.0, 1.0);
    const SpinorField f = beam(0, 1, PolKind::circular_plus, g);
    const SpinorField h = beam(0, 1, PolKind::circular_plus, TransverseGrid::centered(32, 32, 0.9, 1.0));
    EXPECT_THROW(oam_expectation(f, f, h, 1.0), GridMismatch);
}
