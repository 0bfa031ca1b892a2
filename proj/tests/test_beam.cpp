#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vortexlab/beam.hpp"
#include "vortexlab/propagator.hpp"
#include "vortexlab/special.hpp"

using namespace vortexlab;

namespace {

constexpr double pi = std::numbers::pi;

BeamComponent comp(ProfileKind kind, int p, int m, double w0 = 10.0, double theta_p = 0.0) {
    BeamComponent c;
    c.profile = kind;
    c.p = p;
    c.m = m;
    c.w0 = w0;
    c.theta_p = theta_p;
    return c;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// Textbook LG mode written with w(z), R(z) and the Gouy phase.
cplx lg_textbook(int p, int m, double w0, double x, double y, double z) {
    const double k0 = 2.0 * pi, zr = pi * w0 * w0;
    const int a = std::abs(m);
    const double w = w0 * std::sqrt(1.0 + z * z / (zr * zr));
    const double rho = std::hypot(x, y), phi = std::atan2(y, x);
    const double c = std::sqrt(2.0 * factorial(p) / (pi * factorial(p + a))) / w;
    const double r = std::sqrt(2.0) * rho / w;
    const double amp = c * std::pow(r, a) * assoc_laguerre(p, a, r * r) * std::exp(-rho * rho / (w * w));
    const double curv = z == 0.0 ? 0.0 : k0 * rho * rho * z / (2.0 * (z * z + zr * zr));
    const double gouy = (2 * p + a + 1) * std::atan(z / zr);
    return amp * std::polar(1.0, m * phi + curv - gouy);
}

}  // namespace

TEST(Beam, RayleighLength) { EXPECT_DOUBLE_EQ(rayleigh_length(10.0, 1.0), 100.0 * pi); }

TEST(Beam, LaguerreGaussMatchesTextbookForm) {
    for (int p : {0, 1, 2}) {
        for (int m : {-2, 0, 1, 3}) {
            const ProfileEvaluator ev(ProfileKind::lg, p, m, 10.0, 0.0, 1.0);
            for (double z : {0.0, 0.7 * 100.0 * pi, -250.0}) {
                for (auto [x, y] : {std::pair{3.0, -1.0}, std::pair{-7.5, 8.0}, std::pair{0.2, 14.0}}) {
                    const cplx want = lg_textbook(p, m, 10.0, x, y, z);
                    EXPECT_LE(std::abs(ev(x, y, z) - want), 1e-13) << p << " " << m << " " << z;
                }
            }
        }
    }
}

TEST(Beam, SynthesizedProfilesAreNormalized) {
    const auto g = TransverseGrid::centered(256, 256, 0.5, 0.5);
    for (auto c : {comp(ProfileKind::lg, 1, 2), comp(ProfileKind::bg, 1, 1, 10.0, 0.05 * pi),
                   comp(ProfileKind::bg, 2, -2, 12.0, 0.04 * pi)}) {
        BeamSpec s{{c}};
        EXPECT_NEAR(slice_norm(synthesize(s, g)), 1.0, 1e-9);
    }
}

TEST(Beam, BesselGaussAtWaist) {
    const double theta = 0.05 * pi, beta = 2.0 * pi * std::sin(theta);
    const ProfileEvaluator ev(ProfileKind::bg, 1, 1, 10.0, theta, 1.0);
    const cplx ref = ev(2.0, 0.0, 0.0);
    for (auto [x, y] : {std::pair{0.0, 5.0}, std::pair{-3.0, -4.0}, std::pair{9.0, 1.0}}) {
        const double rho = std::hypot(x, y), phi = std::atan2(y, x);
        const cplx want = ref / (std::cyl_bessel_j(1, 2.0 * beta) * std::exp(-0.04)) * std::cyl_bessel_j(1, beta * rho) *
                          std::exp(-rho * rho / 100.0) * std::polar(1.0, phi);
        EXPECT_LE(std::abs(ev(x, y, 0.0) - want), 1e-14);
    }
    // zero ring at the first root of J_1
    const double r1 = bessel_j_root(1, 1) / beta;
    EXPECT_LE(std::abs(ev(r1, 0.0, 0.0)), 1e-14);
}

TEST(Beam, BesselGaussSolvesParaxialEquation) {
    // p = |m| profiles are exact paraxial solutions: propagating the waist
    // slice must reproduce the closed form downstream.
    const auto g = TransverseGrid::centered(256, 256, 0.5, 0.5);
    BeamSpec s{{comp(ProfileKind::bg, 2, 2, 10.0, 0.05 * pi)}};
    const SpinorField f0 = synthesize(s, g);
    const double dz = 60.0;
    const SpinorField prop = propagate(f0, {dz, 1, 0.1}).field;
    const SpinorField ref = synthesize(s, g.at_z(dz));
    double err = 0.0, peak = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        err = std::max(err, std::abs(prop.plus[k] - ref.plus[k]));
        peak = std::max(peak, std::abs(ref.plus[k]));
    }
    EXPECT_LT(err / peak, 1e-8);
}

TEST(Beam, ValidationAndWarnings) {
    EXPECT_THROW(validate_component(comp(ProfileKind::lg, 0, 1, 0.0), 1.0), InvalidArgument);
    EXPECT_THROW(validate_component(comp(ProfileKind::lg, -1, 1), 1.0), InvalidArgument);
    EXPECT_THROW(validate_component(comp(ProfileKind::bg, 1, 1, 10.0, 0.0), 1.0), InvalidArgument);
    EXPECT_THROW(validate_component(comp(ProfileKind::lg, 0, 31), 1.0), InvalidArgument);
    EXPECT_THROW(validate_spec(BeamSpec{}, 1.0), InvalidArgument);

    Warnings w;
    validate_component(comp(ProfileKind::bg, 0, 2, 10.0, 0.05 * pi), 1.0, &w);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0].code, "DivergentKineticEnergy");
    w.clear();
    validate_component(comp(ProfileKind::bg, 1, 1, 10.0, 0.2 * pi), 1.0, &w);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0].code, "ParaxialValidity");
    w.clear();
    validate_component(comp(ProfileKind::lg, 0, 0, 1.0), 1.0, &w);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0].code, "ParaxialValidity");
}

TEST(Beam, BlochSpinorsAreOrthonormal) {
    for (double tb : {0.0, 0.3, pi / 4.0, 2.0, pi}) {
        for (double pb : {0.0, 1.1, -2.5}) {
            const Spinor u = bloch_spinor(tb, pb, BlochState::up);
            const Spinor d = bloch_spinor(tb, pb, BlochState::down);
            EXPECT_NEAR(std::norm(u.plus) + std::norm(u.minus), 1.0, 1e-15);
            EXPECT_NEAR(std::norm(d.plus) + std::norm(d.minus), 1.0, 1e-15);
            EXPECT_LE(std::abs(std::conj(u.plus) * d.plus + std::conj(u.minus) * d.minus), 1e-15);
            EXPECT_NEAR(std::norm(u.plus) - std::norm(u.minus), std::cos(tb), 1e-15);
        }
    }
}

TEST(Beam, HelicityVortexPhaseOffset) {
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(helicity_vortex_phi0(r, r), pi, 1e-15);
    EXPECT_NEAR(helicity_vortex_phi0(cplx{0.0, r}, r), 1.5 * pi, 1e-15);
    EXPECT_NEAR(helicity_vortex_phi0(-r, r), 0.0, 1e-15);

    const BeamSpec s = helicity_vortex_spec(r, r, pi / 4.0, 0.0, 1, 1, 10.0, 0.05 * pi);
    ASSERT_EQ(s.components.size(), 2u);
    EXPECT_EQ(s.components[0].m, 1);
    EXPECT_EQ(s.components[1].m, -1);
    EXPECT_EQ(s.components[1].pol.kind, PolKind::bloch_down);
}

TEST(Beam, OverlapSumVanishesForOrthogonalModes) {
    const auto g = TransverseGrid::centered(128, 128, 0.6, 0.6);
    const SpinorField a = synthesize(BeamSpec{{comp(ProfileKind::lg, 0, 1)}}, g);
    const SpinorField b = synthesize(BeamSpec{{comp(ProfileKind::lg, 0, -1)}}, g);
    EXPECT_NEAR(superposition_log_norm({1.0, cplx{0.0, 2.0}}, {a, b}), 0.0, 1e-12);
    // identical fields overlap fully: 2 Re(conj(a0) a1) <f|f>
    EXPECT_NEAR(superposition_log_norm({1.0, 0.5}, {a, a}), 1.0 * slice_norm(a) * slice_norm(a), 1e-12);
}

TEST(Beam, EvaluatorAgreesWithSynthesis) {
    BeamSpec s{{comp(ProfileKind::lg, 1, 1), comp(ProfileKind::bg, 1, -1, 9.0, 0.05 * pi)}};
    s.components[1].pol.kind = PolKind::linear_x;
    s.components[1].amplitude = {0.3, -0.4};
    const auto g = TransverseGrid::centered(16, 16, 1.0, 1.0, 20.0);
    const SpinorField f = synthesize(s, g);
    const BeamEvaluator ev(s, 1.0);
    for (int j = 0; j < 16; j += 5) {
        for (int i = 0; i < 16; i += 3) {
            const Spinor v = ev.at(g.x(i), g.y(j), g.z);
            EXPECT_EQ(v.plus, f.plus[g.index(i, j)]);
            EXPECT_EQ(v.minus, f.minus[g.index(i, j)]);
        }
    }
}
