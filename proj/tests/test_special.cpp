#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "vortexlab/special.hpp"

using namespace vortexlab;
using cd = std::complex<double>;

namespace {

// Bessel integral J_n(w) = (1/pi) int_0^pi cos(n t - w sin t) dt, valid for complex w.
// The integrand is smooth and periodic after extension, so the trapezoid rule converges fast.
cd bessel_integral(int n, cd w) {
    const int N = 4096;
    cd sum = 0.0;
    for (int k = 0; k < N; ++k) {
        const double t = 2.0 * std::numbers::pi * k / N;
        sum += std::exp(cd{0.0, 1.0} * (w * std::sin(t) - static_cast<double>(n) * t));
    }
    return sum / static_cast<double>(N);
}

}  // namespace

TEST(Laguerre, LowDegreeClosedForms) {
    for (int a : {0, 1, 3}) {
        for (double x : {0.0, 0.7, 2.5, 9.0}) {
            EXPECT_DOUBLE_EQ(assoc_laguerre(0, a, x), 1.0);
            EXPECT_NEAR(assoc_laguerre(1, a, x), 1.0 + a - x, 1e-13);
            const double l2 = 0.5 * (x * x - 2.0 * (a + 2) * x + (a + 1) * (a + 2));
            EXPECT_NEAR(assoc_laguerre(2, a, x), l2, 1e-12 * std::max(1.0, std::abs(l2)));
        }
    }
    EXPECT_THROW(assoc_laguerre(-1, 0, 1.0), std::invalid_argument);
}

TEST(Bessel, RealArgumentsMatchStd) {
    for (int n : {0, 1, 2, 5}) {
        for (double x : {0.1, 1.0, 3.7, 20.0, 80.0}) {
            EXPECT_NEAR(bessel_j(n, cd{x, 0.0}).real(), std::cyl_bessel_j(n, x), 1e-14);
            EXPECT_NEAR(bessel_j(n, cd{-x, 0.0}).real(), (n % 2 ? -1.0 : 1.0) * std::cyl_bessel_j(n, x), 1e-14);
        }
    }
}

TEST(Bessel, ComplexArgumentsMatchIntegral) {
    const cd ws[] = {{0.3, 0.2}, {1.0, -1.4}, {5.0, 2.0}, {12.0, -0.8}, {40.0, 3.0}, {60.0, -6.0}};
    for (int n : {0, 1, 3, 4}) {
        for (cd w : ws) {
            const cd want = bessel_integral(n, w);
            const cd got = bessel_j(n, w);
            EXPECT_LE(std::abs(got - want), 1e-11 * std::max(1.0, std::abs(want))) << "n=" << n << " w=" << w;
        }
    }
}

TEST(Bessel, NegativeOrderReflection) {
    const cd w{2.3, 0.9};
    EXPECT_LE(std::abs(bessel_j(-3, w) + bessel_j(3, w)), 1e-15);
    EXPECT_LE(std::abs(bessel_j(-2, w) - bessel_j(2, w)), 1e-15);
}

TEST(Bessel, RecurrenceProperty) {
    // J_{n-1} + J_{n+1} = (2n / w) J_n
    for (cd w : {cd{3.0, 1.0}, cd{25.0, -2.0}, cd{0.8, 0.4}}) {
        for (int n = 1; n < 6; ++n) {
            const cd lhs = bessel_j(n - 1, w) + bessel_j(n + 1, w);
            const cd rhs = 2.0 * static_cast<double>(n) / w * bessel_j(n, w);
            EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST(Bessel, KnownRoots) {
    EXPECT_NEAR(bessel_j_root(0, 1), 2.404825557695773, 1e-12);
    EXPECT_NEAR(bessel_j_root(1, 1), 3.831705970207512, 1e-12);
    EXPECT_NEAR(bessel_j_root(1, 2), 7.015586669815619, 1e-12);
    EXPECT_NEAR(bessel_j_root(4, 1), 7.588342434503805, 1e-12);
    EXPECT_THROW(bessel_j_root(1, 0), std::invalid_argument);
}
