#include "vortexlab/special.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace vortexlab {

double assoc_laguerre(int p, int a, double x) {
    if (p < 0) throw std::invalid_argument("assoc_laguerre: negative degree");
    double prev = 1.0;
    if (p == 0) return prev;
    double cur = 1.0 + a - x;
    for (int k = 1; k < p; ++k) {
        const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

using cd = std::complex<double>;

cd bessel_series(int n, cd w) {
    const cd h = 0.5 * w;
    const cd h2 = -h * h;
    cd term = 1.0;
    for (int k = 1; k <= n; ++k) term *= h / static_cast<double>(k);
    cd sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= h2 / (static_cast<double>(k) * static_cast<double>(k + n));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

cd bessel_miller(int n, cd w) {
    const double aw = std::abs(w);
    const double top = std::max(static_cast<double>(n), aw);
    int start = static_cast<int>(top + 30.0 + 2.0 * std::sqrt(40.0 * top));
    start += start & 1;

    // Normalization through the generating function at tau = -pi/2 or +pi/2,
    // whichever sum has no cancellation for this sign of Im w.
    const bool upper = w.imag() >= 0.0;
    const cd unit = upper ? cd{0.0, -1.0} : cd{0.0, 1.0};
    const cd unit_pow[4] = {1.0, unit, unit * unit, unit * unit * unit};

    cd jp1 = 0.0;
    cd j = 1e-300;
    cd norm = 0.0;
    cd want = 0.0;
    const cd two_over_w = 2.0 / w;
    for (int k = start; k >= 1; --k) {
        if (k == n) want = j;
        norm += 2.0 * unit_pow[k & 3] * j;
        const cd jm1 = static_cast<double>(k) * two_over_w * j - jp1;
        jp1 = j;
        j = jm1;
        if (std::abs(j) > 1e250) {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            want *= 1e-250;
        }
    }
    if (n == 0) want = j;
    norm += j;
    const cd target = upper ? std::exp(cd{0.0, -1.0} * w) : std::exp(cd{0.0, 1.0} * w);
    return want * (target / norm);
}

}  // namespace

std::complex<double> bessel_j(int n, std::complex<double> w) {
    if (n < 0) {
        const cd v = bessel_j(-n, w);
        return (n % 2 == 0) ? v : -v;
    }
    if (w == cd{0.0, 0.0}) return n == 0 ? 1.0 : 0.0;
    if (w.imag() == 0.0) {
        const double v = std::cyl_bessel_j(static_cast<double>(n), std::abs(w.real()));
        return (w.real() < 0.0 && n % 2 == 1) ? -v : v;
    }
    if (std::abs(w) < 1.5) return bessel_series(n, w);
    return bessel_miller(n, w);
}

double bessel_j_root(int n, int k) {
    if (k < 1) throw std::invalid_argument("bessel_j_root: k must be positive");
    auto f = [n](double x) { return std::cyl_bessel_j(static_cast<double>(n), x); };
    double a = (n == 0) ? 1e-6 : static_cast<double>(n) * 0.5 + 1e-3;
    if (n > 0) a = std::max(a, 1e-3);
    const double step = 0.05;
    int found = 0;
    double fa = f(a);
    for (double b = a + step;; b += step) {
        const double fb = f(b);
        if ((fa < 0.0) != (fb < 0.0)) {
            if (++found == k) {
                double lo = b - step, hi = b;
                double flo = fa;
                for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = f(mid);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        fa = fb;
        if (b > 1e4) throw std::runtime_error("bessel_j_root: no root found");
    }
}

}  // namespace vortexlab
