#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vortexlab/beam.hpp"
#include "vortexlab/vortex.hpp"

using namespace vortexlab;

namespace {

constexpr double pi = std::numbers::pi;

BeamComponent lg(int p, int m, double w0 = 10.0, cplx amp = 1.0) {
    BeamComponent c;
    c.p = p;
    c.m = m;
    c.w0 = w0;
    c.amplitude = amp;
    return c;
}

BeamComponent bg(int m, cplx amp) {
    BeamComponent c;
    c.profile = ProfileKind::bg;
    c.p = 1;
    c.m = m;
    c.theta_p = 0.05 * pi;
    c.amplitude = amp;
    return c;
}

BeamSpec mixed(int m1, int m2) {
    const double a = 1.0 / std::sqrt(2.0);
    return {{bg(m1, a), bg(m2, a)}};
}

}  // namespace

TEST(Loop, CircleAndPolygonGeometry) {
    const LoopSpec c = LoopSpec::circle(1.0, -2.0, 3.0, 128);
    EXPECT_NEAR(c.length(), 6.0 * pi, 1e-12);
    EXPECT_NEAR(c.point(0.25).x, 1.0, 1e-12);
    EXPECT_NEAR(c.point(0.25).y, 1.0, 1e-12);

    const LoopSpec sq = LoopSpec::polygon({{0, 0}, {2, 0}, {2, 2}, {0, 2}}, 128);
    EXPECT_DOUBLE_EQ(sq.length(), 8.0);
    EXPECT_DOUBLE_EQ(sq.point(0.375).x, 2.0);
    EXPECT_DOUBLE_EQ(sq.point(0.375).y, 1.0);
    EXPECT_DOUBLE_EQ(sq.point(1.0).x, 0.0);
    const LoopSpec big = sq.scaled(2.0);
    EXPECT_DOUBLE_EQ(big.point(0.0).x, -1.0);

    EXPECT_THROW(LoopSpec::circle(0, 0, -1.0), InvalidArgument);
    EXPECT_THROW(LoopSpec::circle(0, 0, 1.0, 8), InvalidArgument);
    EXPECT_THROW(LoopSpec::polygon({{0, 0}, {1, 0}}), InvalidArgument);
    // clockwise polygons are rejected
    EXPECT_THROW(LoopSpec::polygon({{0, 0}, {0, 2}, {2, 2}, {2, 0}}), InvalidArgument);
}

TEST(Winding, LaguerreGaussChargeAnalyticAndSampled) {
    const auto g = TransverseGrid::centered(128, 128, 0.6, 0.6);
    for (int m = -3; m <= 3; ++m) {
        const BeamSpec s{{lg(0, m)}};
        const LoopSpec loop = LoopSpec::circle(0.0, 0.0, 8.0, 512);
        EXPECT_EQ(loop_winding(FieldSource::analytic(s, 1.0), FieldComponent::plus, loop).winding, m);
        EXPECT_EQ(loop_winding(FieldSource::sampled(synthesize(s, g)), FieldComponent::plus, loop).winding, m);
        // a loop that does not enclose the axis
        EXPECT_EQ(loop_winding(FieldSource::analytic(s, 1.0), FieldComponent::plus, LoopSpec::circle(12, 0, 3, 512))
                      .winding,
                  0);
    }
}

TEST(Winding, MixedBesselParityRule) {
    const LoopSpec loop = LoopSpec::circle(0.0, 0.0, 10.0, 2048);
    for (int m1 = 0; m1 <= 3; ++m1) {
        for (int m2 = 0; m2 <= 4; ++m2) {
            const FieldSource src = FieldSource::analytic(mixed(m1, m2), 1.0);
            const WindingResult a = loop_winding(src, FieldComponent::plus, loop, JumpConvention::plus_first);
            const WindingResult b = loop_winding(src, FieldComponent::plus, loop, JumpConvention::minus_first);
            const int d = std::abs(m1 - m2);
            const int want = m1 == m2 ? m1 : (d % 2 == 0 ? (m1 + m2) / 2 : (m1 + m2 + 1) / 2);
            EXPECT_EQ(a.winding, want) << m1 << "," << m2;
            EXPECT_EQ(static_cast<int>(a.jumps.size()), d);
            EXPECT_EQ(b.winding, d % 2 == 0 ? want : want - 1);
        }
    }
}

TEST(Winding, ZeroCircleUsesNeighbouringLoops) {
    // LG p=1, m=0 vanishes on rho = w0 / sqrt(2)
    const BeamSpec s{{lg(1, 0)}};
    const WindingResult r = loop_winding(FieldSource::analytic(s, 1.0), FieldComponent::plus,
                                         LoopSpec::circle(0.0, 0.0, 10.0 / std::sqrt(2.0), 512));
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.winding, 0);
}

TEST(Berry, FractionalChargeOfMixedBeam) {
    const FieldSource src = FieldSource::analytic(mixed(1, 4), 1.0);
    const LoopSpec loop = LoopSpec::circle(0.0, 0.0, 10.0, 4096);
    EXPECT_NEAR(berry_tc(src, FieldComponent::plus, loop, BerryVariant::field), 2.5, 1e-3);
    const FieldSource lg2 = FieldSource::analytic(BeamSpec{{lg(0, 2)}}, 1.0);
    EXPECT_NEAR(berry_tc(lg2, FieldComponent::plus, loop, BerryVariant::arg), 2.0, 1e-9);
    EXPECT_NEAR(berry_tc(lg2, FieldComponent::plus, loop, BerryVariant::field), 2.0, 1e-6);
}

TEST(Circulation, QuantizedForUniformPolarization) {
    for (int m : {-2, 1, 3}) {
        BeamComponent c = lg(1, m);
        c.pol.kind = PolKind::circular_minus;
        const FieldSource src = FieldSource::analytic(BeamSpec{{c}}, 1.0);
        const LoopSpec loop = LoopSpec::circle(0.5, -0.3, 5.0, 1024);
        const CirculationResult n = loop_circulation(src, loop, CurrentKind::photon);
        const CirculationResult h = loop_circulation(src, loop, CurrentKind::helicity);
        EXPECT_NEAR(n.kappa, m, 1e-9);
        EXPECT_NEAR(h.kappa, -m, 1e-9);
        EXPECT_FALSE(n.from_winding);
    }
}

TEST(Circulation, MaskedLoopFallbackAndFailure) {
    // far outside the beam every sample is masked, yet the phase is still defined
    const LoopSpec far = LoopSpec::circle(0.0, 0.0, 35.0, 256);
    const FieldSource uniform = FieldSource::analytic(BeamSpec{{lg(0, 2)}}, 1.0);
    const CirculationResult r = loop_circulation(uniform, far, CurrentKind::photon);
    EXPECT_TRUE(r.from_winding);
    EXPECT_DOUBLE_EQ(r.kappa, 2.0);

    BeamComponent other = lg(0, 0, 6.0);
    other.pol.kind = PolKind::circular_minus;
    const FieldSource mixed_pol = FieldSource::analytic(BeamSpec{{lg(0, 2), other}}, 1.0);
    EXPECT_FALSE(mixed_pol.uniformly_polarized());
    EXPECT_THROW(loop_circulation(mixed_pol, far, CurrentKind::photon), MaskedLoop);
}

TEST(Census, ChargesOfSingleAndMixedModes) {
    const auto g = TransverseGrid::centered(128, 128, 0.6, 0.6);
    for (int m : {-3, 0, 2}) {
        const Census c = singularity_census(synthesize(BeamSpec{{lg(0, m)}}, g), FieldComponent::plus);
        EXPECT_EQ(c.net_charge, m);
        EXPECT_EQ(net_charge_within(c, 0.0, 0.0, 2.0), m);
    }
    // displaced unit vortices: one +1 and one -1 away from the axis
    const BeamSpec s{{lg(0, 0, 10.0, 1.0), lg(0, 1, 10.0, 0.5), lg(0, -1, 10.0, cplx{0.0, 0.3})}};
    const Census c = singularity_census(synthesize(s, g), FieldComponent::plus);
    int pos = 0, neg = 0;
    for (const auto& q : c.charges) (q.charge > 0 ? pos : neg) += std::abs(q.charge);
    EXPECT_EQ(pos - neg, c.net_charge);
    EXPECT_THROW(singularity_census(synthesize(s, g), FieldComponent::plus, 0.0), InvalidArgument);
}

TEST(Census, NetChargeEqualsBoundaryWinding) {
    const auto g = TransverseGrid::centered(96, 96, 0.7, 0.7);
    const cplx amps[] = {{1.0, 0.0}, {0.4, -0.7}, {-0.2, 0.5}};
    for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; b += 2) {
            const BeamSpec s{{lg(0, a, 9.0, amps[0]), lg(1, b, 11.0, amps[1]), lg(0, a + b, 8.0, amps[2])}};
            const SpinorField f = synthesize(s, g);
            const Census c = singularity_census(f, FieldComponent::plus);
            const int w = loop_winding(FieldSource::sampled(f), FieldComponent::plus, grid_boundary_loop(g)).winding;
            EXPECT_EQ(c.net_charge, w) << a << "," << b;
        }
    }
}

TEST(Analyze, ReportIsConsistent) {
    const FieldSource src = FieldSource::analytic(BeamSpec{{lg(1, 2)}}, 1.0);
    const VortexReport r = analyze_loop(src, FieldComponent::plus, LoopSpec::circle(0, 0, 4.0, 1024));
    EXPECT_EQ(r.winding, 2);
    EXPECT_NEAR(r.total_phase, 4.0 * pi, 1e-9);
    EXPECT_NEAR(r.kappa_n, 2.0, 1e-9);
    EXPECT_NEAR(r.kappa_h, 2.0, 1e-9);
    EXPECT_NEAR(r.tc_berry_arg, 2.0, 1e-9);
    EXPECT_EQ(r.samples.size(), 1024u);
}
