#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vortexlab/beam.hpp"
#include "vortexlab/observables.hpp"
#include "vortexlab/propagator.hpp"

using namespace vortexlab;

namespace {

constexpr double pi = std::numbers::pi;

SpinorField lg(int p, int m, const TransverseGrid& g) {
    BeamComponent c;
    c.p = p;
    c.m = m;
    c.pol.kind = PolKind::linear_x;
    return synthesize(BeamSpec{{c}}, g);
}

}  // namespace

TEST(Propagator, PlaneWaveAcquiresExactPhase) {
    const auto g = TransverseGrid::centered(32, 16, 0.5, 0.5);
    const double kx = 2.0 * pi * 3.0 / (32 * 0.5), ky = -2.0 * pi * 2.0 / (16 * 0.5);
    SpinorField f(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) f.plus[g.index(i, j)] = std::polar(1.0, kx * g.x(i) + ky * g.y(j));
    const double dz = 37.0;
    const SpinorField out = propagate(f, {dz, 1, 0.1}).field;
    const cplx phase = std::polar(1.0, -(kx * kx + ky * ky) * dz / (2.0 * g.k0()));
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_LE(std::abs(out.plus[k] - f.plus[k] * phase), 1e-12);
}

TEST(Propagator, ForwardThenBackIsIdentity) {
    const auto g = TransverseGrid::centered(128, 128, 0.6, 0.6);
    const SpinorField f = lg(1, 2, g);
    const SpinorField there = propagate(f, {40.0, 3, 0.1}).field;
    const SpinorField back = propagate(there, {-40.0, 3, 0.1}).field;
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_LE(std::abs(back.plus[k] - f.plus[k]), 1e-13);
        EXPECT_LE(std::abs(back.minus[k] - f.minus[k]), 1e-13);
    }
    EXPECT_DOUBLE_EQ(back.grid.z, 0.0);
    EXPECT_DOUBLE_EQ(there.grid.z, 120.0);
}

TEST(Propagator, NormIsConserved) {
    const auto g = TransverseGrid::centered(64, 64, 1.0, 1.0);
    SpinorField f(g);
    // not a beam, just a smooth bump with structure
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            f.plus[g.index(i, j)] = std::exp(-(x * x + y * y) / 50.0) * std::polar(1.0, 0.3 * x * y / 10.0);
            f.minus[g.index(i, j)] = 0.5 * std::exp(-((x - 4) * (x - 4) + y * y) / 30.0);
        }
    const double n0 = slice_norm(f);
    const PropagationResult r = propagate(f, {25.0, 8, 0.1});
    EXPECT_NEAR(slice_norm(r.field), n0, 1e-12 * n0);
}

TEST(Propagator, MatchesClosedFormGaussian) {
    const auto g = TransverseGrid::centered(256, 256, 0.5, 0.5);
    const double zr = rayleigh_length(10.0, 1.0);
    const SpinorField out = propagate(lg(0, 1, g), {0.5 * zr, 1, 0.1}).field;
    const SpinorField ref = lg(0, 1, g.at_z(0.5 * zr));
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(out.plus[k] - ref.plus[k]));
    EXPECT_LT(err, 1e-10);
}

TEST(Propagator, BorderEnergyWarning) {
    const auto g = TransverseGrid::centered(64, 64, 0.5, 0.5);
    SpinorField tight = lg(0, 0, g);  // w0 = 10 on a 32-wide window
    const PropagationResult r = propagate(tight, {10.0, 1, 0.1});
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_EQ(r.warnings[0].code, "BorderEnergy");
    EXPECT_GT(r.max_border_fraction, 1e-6);
    EXPECT_NEAR(border_fraction(tight, 0.1), r.max_border_fraction, 0.5);

    const auto wide = TransverseGrid::centered(256, 256, 0.5, 0.5);
    EXPECT_TRUE(propagate(lg(0, 0, wide), {10.0, 1, 0.1}).warnings.empty());
}

TEST(Propagator, RejectsBadPlans) {
    const auto g = TransverseGrid::centered(16, 16, 1.0, 1.0);
    SpinorField f(g);
    f.plus[0] = 1.0;
    EXPECT_THROW(propagate(f, {1.0, 0, 0.1}), InvalidArgument);
    EXPECT_THROW(propagate(f, {1.0, 1, 0.6}), InvalidArgument);
    f.plus[1] = {std::nan(""), 0.0};
    EXPECT_THROW(propagate(f, {1.0, 1, 0.1}), InvalidArgument);
}

TEST(Continuity, DefectIsSmallForExactSlices) {
    const auto g = TransverseGrid::centered(256, 256, 0.45, 0.45, 100.0);
    const double dz = 2.0;
    const SpinorField fm = lg(1, 1, g.at_z(g.z - 0.5 * dz));
    const SpinorField f0 = lg(1, 1, g);
    const SpinorField fp = lg(1, 1, g.at_z(g.z + 0.5 * dz));
    const Currents c = currents(f0);
    EXPECT_LT(continuity_defect(fm, fp, c.j_n, dz), 1e-3);
    // a wrong slice spacing breaks the balance
    EXPECT_GT(continuity_defect(fm, fp, c.j_n, 2.0 * dz), 0.1);
}

TEST(Continuity, EdgeCases) {
    const auto g = TransverseGrid::centered(16, 16, 1.0, 1.0);
    const ScalarField n(g);
    const VectorField2D j(g);
    EXPECT_EQ(continuity_defect(n, n, j, 1.0), 0.0);
    EXPECT_THROW(continuity_defect(n, n, j, 0.0), InvalidArgument);
    const ScalarField other(TransverseGrid::centered(16, 16, 0.5, 1.0));
    EXPECT_THROW(continuity_defect(other, n, j, 1.0), GridMismatch);
}
