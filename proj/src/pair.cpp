#include "vortexlab/pair.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "vortexlab/errors.hpp"

namespace vortexlab {

namespace {

constexpr double pi = std::numbers::pi;

double trapezoid_weight(std::size_t k, std::size_t n) { return (k == 0 || k + 1 == n) ? 0.5 : 1.0; }

cplx i_pow(int m) {
    switch (((m % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

double bessel_real(int m, double x) {
    const int n = std::abs(m);
    const double v = std::cyl_bessel_j(static_cast<double>(n), x);
    return (m < 0 && (n % 2 == 1)) ? -v : v;
}

// Uniform nodes covering [lo, hi] with spacing fine enough for a kernel of
// frequency `freq` times a Gaussian of standard deviation `sigma` (of |eta|^2).
std::vector<double> nodes(double lo, double hi, double freq, double sigma) {
    const double band = std::abs(freq) + 8.0 / sigma;
    const auto n = static_cast<std::size_t>(std::max(257.0, std::ceil((hi - lo) * 2.0 * band) + 1.0));
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    return out;
}

double ring_mass(double a, double s) {
    // int_0^inf x exp(-(x-a)^2 / (2 s^2)) dx
    return s * s * std::exp(-a * a / (2.0 * s * s)) +
           a * s * std::sqrt(pi / 2.0) * (1.0 + std::erf(a / (s * std::numbers::sqrt2)));
}

}  // namespace

RadialProfile RadialProfile::gaussian_ring(double kz0, double sigma_z, double rho_k0, double sigma_rho) {
    if (!(sigma_z > 0.0) || !(sigma_rho > 0.0) || !(rho_k0 >= 0.0) || !std::isfinite(kz0))
        throw InvalidArgument("gaussian_ring: widths must be positive and rho_k0 non-negative");
    RadialProfile r;
    r.kz0 = kz0;
    r.sigma_z = sigma_z;
    r.rho_k0 = rho_k0;
    r.sigma_rho = sigma_rho;
    r.amp_z_ = std::pow(2.0 * pi * sigma_z * sigma_z, -0.25);
    r.amp_rho_ = 1.0 / std::sqrt(2.0 * pi * ring_mass(rho_k0, sigma_rho));
    return r;
}

RadialProfile RadialProfile::default_profile(double lambda0, double theta_p) {
    const double k0 = 2.0 * pi / lambda0;
    const double ring = k0 * std::sin(theta_p);
    return gaussian_ring(k0, 0.01 * k0, ring, 0.1 * ring);
}

RadialProfile RadialProfile::tabulated(std::vector<double> kz, std::vector<double> rho_k, std::vector<cplx> eta) {
    if (kz.size() < 2 || rho_k.size() < 2 || eta.size() != kz.size() * rho_k.size())
        throw InvalidArgument("tabulated profile: table shape does not match axes");
    for (std::size_t k = 1; k < kz.size(); ++k)
        if (!(kz[k] > kz[k - 1])) throw InvalidArgument("tabulated profile: k_z must increase");
    for (std::size_t k = 1; k < rho_k.size(); ++k)
        if (!(rho_k[k] > rho_k[k - 1])) throw InvalidArgument("tabulated profile: rho_k must increase");
    if (rho_k.front() < 0.0) throw InvalidArgument("tabulated profile: rho_k must be non-negative");
    RadialProfile r;
    r.tabulated_ = true;
    r.kz_ = std::move(kz);
    r.rho_k_ = std::move(rho_k);
    r.table_ = std::move(eta);
    const double norm = r.k_norm();
    if (std::abs(norm - 1.0) > 1e-10)
        throw InvalidArgument("tabulated profile is not normalized: integral of |eta|^2 = " + std::to_string(norm));
    return r;
}

cplx RadialProfile::eta(double kz, double rho_k) const {
    if (!tabulated_) {
        if (rho_k < 0.0) return {0.0, 0.0};
        const double a = (kz - kz0) / sigma_z;
        const double b = (rho_k - rho_k0) / sigma_rho;
        return {amp_z_ * amp_rho_ * std::exp(-0.25 * (a * a + b * b)), 0.0};
    }
    if (kz < kz_.front() || kz > kz_.back() || rho_k < rho_k_.front() || rho_k > rho_k_.back()) return {0.0, 0.0};
    const auto locate = [](const std::vector<double>& axis, double v, std::size_t& i, double& f) {
        auto it = std::upper_bound(axis.begin(), axis.end(), v);
        i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - axis.begin()) - 1));
        i = std::min(i, axis.size() - 2);
        f = (v - axis[i]) / (axis[i + 1] - axis[i]);
    };
    std::size_t ia = 0, ib = 0;
    double fa = 0.0, fb = 0.0;
    locate(kz_, kz, ia, fa);
    locate(rho_k_, rho_k, ib, fb);
    const std::size_t nr = rho_k_.size();
    const auto at = [&](std::size_t a, std::size_t b) { return table_[a * nr + b]; };
    return (1.0 - fa) * ((1.0 - fb) * at(ia, ib) + fb * at(ia, ib + 1)) +
           fa * ((1.0 - fb) * at(ia + 1, ib) + fb * at(ia + 1, ib + 1));
}

double RadialProfile::k_norm() const {
    if (tabulated_) {
        const std::size_t na = kz_.size(), nb = rho_k_.size();
        double total = 0.0;
        for (std::size_t a = 0; a < na; ++a) {
            const double ha = a == 0 ? 0.5 * (kz_[1] - kz_[0])
                              : a + 1 == na ? 0.5 * (kz_[a] - kz_[a - 1])
                                            : 0.5 * (kz_[a + 1] - kz_[a - 1]);
            for (std::size_t b = 0; b < nb; ++b) {
                const double hb = b == 0 ? 0.5 * (rho_k_[1] - rho_k_[0])
                                  : b + 1 == nb ? 0.5 * (rho_k_[b] - rho_k_[b - 1])
                                                : 0.5 * (rho_k_[b + 1] - rho_k_[b - 1]);
                total += ha * hb * rho_k_[b] * std::norm(table_[a * nb + b]);
            }
        }
        return 2.0 * pi * total;
    }
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const auto fz = [&](double k) {
        const double a = (k - kz0) / sigma_z;
        return amp_z_ * amp_z_ * std::exp(-0.5 * a * a);
    };
    const double iz = GK::integrate(fz, kz0 - 14.0 * sigma_z, kz0 + 14.0 * sigma_z, 15, 1e-15);
    const auto fr = [&](double r) {
        const double b = (r - rho_k0) / sigma_rho;
        return r * amp_rho_ * amp_rho_ * std::exp(-0.5 * b * b);
    };
    const double lo = std::max(0.0, rho_k0 - 14.0 * sigma_rho);
    const double ir = GK::integrate(fr, lo, rho_k0 + 14.0 * sigma_rho, 15, 1e-15);
    return 2.0 * pi * iz * ir;
}

namespace {

cplx separable_kz_factor(const RadialProfile& eta, double z, double amp_z) {
    const auto kz = nodes(eta.kz0 - 10.0 * eta.sigma_z, eta.kz0 + 10.0 * eta.sigma_z, z, eta.sigma_z);
    const double hz = kz[1] - kz[0];
    cplx total{0.0, 0.0};
    for (std::size_t a = 0; a < kz.size(); ++a) {
        const double d = (kz[a] - eta.kz0) / eta.sigma_z;
        total += trapezoid_weight(a, kz.size()) * hz * amp_z * std::exp(-0.25 * d * d) * std::polar(1.0, kz[a] * z);
    }
    return total;
}

double separable_radial_factor(const RadialProfile& eta, double rho, int m, double amp_rho) {
    const double lo = std::max(0.0, eta.rho_k0 - 10.0 * eta.sigma_rho);
    const double hi = eta.rho_k0 + 10.0 * eta.sigma_rho;
    const auto rk = nodes(lo, hi, rho, eta.sigma_rho);
    const double h = rk[1] - rk[0];
    double total = 0.0;
    for (std::size_t b = 0; b < rk.size(); ++b) {
        const double d = (rk[b] - eta.rho_k0) / eta.sigma_rho;
        total += trapezoid_weight(b, rk.size()) * h * rk[b] * amp_rho * std::exp(-0.25 * d * d) *
                 bessel_real(m, rho * rk[b]);
    }
    return total;
}

}  // namespace

std::vector<cplx> hankel_profile(const RadialProfile& eta, const std::vector<double>& rho, double z, int m) {
    if (!eta.tabulated_ && !(eta.amp_z_ > 0.0 && eta.amp_rho_ > 0.0))
        throw InvalidArgument("hankel_profile: profile is not normalized");
    for (double r : rho)
        if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("hankel_profile: rho must be finite and >= 0");
    const cplx prefactor = i_pow(m) / std::sqrt(2.0 * pi);
    std::vector<cplx> out(rho.size());

    if (eta.tabulated_) {
        const std::size_t na = eta.kz_.size(), nb = eta.rho_k_.size();
        const double ha = (eta.kz_.back() - eta.kz_.front()) / static_cast<double>(na - 1);
        const double hb = (eta.rho_k_.back() - eta.rho_k_.front()) / static_cast<double>(nb - 1);
        std::vector<cplx> phase(na);
        for (std::size_t a = 0; a < na; ++a) phase[a] = std::polar(trapezoid_weight(a, na) * ha, eta.kz_[a] * z);
        std::vector<double> kernel(nb);
        for (std::size_t r = 0; r < rho.size(); ++r) {
            for (std::size_t b = 0; b < nb; ++b)
                kernel[b] = trapezoid_weight(b, nb) * hb * eta.rho_k_[b] * bessel_real(m, rho[r] * eta.rho_k_[b]);
            cplx total{0.0, 0.0};
            for (std::size_t a = 0; a < na; ++a) {
                cplx row{0.0, 0.0};
                for (std::size_t b = 0; b < nb; ++b) row += kernel[b] * eta.table_[a * nb + b];
                total += phase[a] * row;
            }
            out[r] = prefactor * total;
        }
        return out;
    }

    const cplx kz_factor = separable_kz_factor(eta, z, eta.amp_z_);
    for (std::size_t r = 0; r < rho.size(); ++r)
        out[r] = prefactor * kz_factor * separable_radial_factor(eta, rho[r], m, eta.amp_rho_);
    return out;
}

double parseval_norm(const RadialProfile& eta, int m) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const auto radial_integral = [](const std::function<double(double)>& f, double rho_max, int panels) {
        double total = 0.0;
        for (int p = 0; p < panels; ++p)
            total += GK::integrate(f, rho_max * p / panels, rho_max * (p + 1) / panels, 0);
        return total;
    };

    if (!eta.tabulated_) {
        // |eta_tilde|^2 = |K(z)|^2 |P(rho)|^2 / (2 pi); integrate each factor on its own.
        const double z_max = 7.0 / eta.sigma_z;
        const int nz = 141;
        const double hz = 2.0 * z_max / (nz - 1);
        double iz = 0.0;
        for (int k = 0; k < nz; ++k)
            iz += trapezoid_weight(static_cast<std::size_t>(k), nz) * hz *
                  std::norm(separable_kz_factor(eta, -z_max + hz * k, eta.amp_z_));
        const double rho_max = 7.0 / eta.sigma_rho;
        const int panels = std::max(16, static_cast<int>(std::ceil(rho_max * (eta.rho_k0 + 10.0 * eta.sigma_rho) / pi)));
        const double ir = radial_integral(
            [&](double r) { return r * std::pow(separable_radial_factor(eta, r, m, eta.amp_rho_), 2); }, rho_max,
            panels);
        return iz * ir;
    }

    const double sz = eta.kz_[1] - eta.kz_[0];
    const double sr = eta.rho_k_[1] - eta.rho_k_[0];
    const double z_max = pi / sz;
    const double rho_max = pi / sr;
    const int nz = 129;
    const int panels = std::max(16, static_cast<int>(std::ceil(rho_max * eta.rho_k_.back() / pi)));
    const double hz = 2.0 * z_max / (nz - 1);
    double total = 0.0;
    for (int k = 0; k < nz; ++k) {
        const double z = -z_max + hz * k;
        const double slice = radial_integral(
            [&](double r) { return 2.0 * pi * r * std::norm(hankel_profile(eta, {r}, z, m)[0]); }, rho_max, panels);
        total += trapezoid_weight(static_cast<std::size_t>(k), nz) * hz * slice;
    }
    return total;
}

void PairSpec::validate() const {
    if (symmetry == PairSymmetry::antisymmetric && m == 0)
        throw InvalidArgument("antisymmetric pair requires m != 0");
    if (!std::isfinite(theta_B) || !std::isfinite(phi_B) || !std::isfinite(phi0) || !std::isfinite(z))
        throw InvalidArgument("pair angles must be finite");
    if (std::abs(m) > 30) throw InvalidArgument("|m| must not exceed 30");
}

double pair_normalization(int m) { return 1.0 / std::sqrt(4.0 * (m == 0 ? 2.0 : 1.0)); }

ThetaMatrix theta_matrix(const PairSpec& spec) {
    const double s = std::sin(spec.theta_B);
    const double c = std::cos(spec.theta_B);
    ThetaMatrix t{};
    switch (spec.symmetry) {
        case PairSymmetry::symmetric:
            t[0][0] = -s * std::polar(1.0, -spec.phi_B);
            t[0][1] = c;
            t[1][0] = c;
            t[1][1] = s * std::polar(1.0, spec.phi_B);
            break;
        case PairSymmetry::antisymmetric:
            t[0][1] = 1.0;
            t[1][0] = -1.0;
            break;
        case PairSymmetry::same_up:
        case PairSymmetry::same_down: {
            const Spinor u = bloch_spinor(spec.theta_B, spec.phi_B,
                                          spec.symmetry == PairSymmetry::same_up ? BlochState::up : BlochState::down);
            const cplx v[2] = {u.plus, u.minus};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) t[a][b] = std::numbers::sqrt2 * v[a] * v[b];
            break;
        }
    }
    return t;
}

namespace {

// Sum over lambda lambda' of lambda lambda' |Theta|^2 divided by sum |Theta|^2.
double helicity_ratio(const PairSpec& spec) {
    const double c = std::cos(spec.theta_B);
    switch (spec.symmetry) {
        case PairSymmetry::symmetric: return -std::cos(2.0 * spec.theta_B);
        case PairSymmetry::antisymmetric: return -1.0;
        default: return c * c;
    }
}

double angular_factor(const PairSpec& spec, double dphi) {
    const double cs = std::cos(2.0 * spec.m * dphi);
    return spec.symmetry == PairSymmetry::antisymmetric ? 1.0 - cs : 1.0 + cs;
}

std::vector<double> eta_norms(const PairSpec& spec, const std::vector<PairPoint>& points) {
    std::vector<double> rho(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (!(points[k].rho >= 0.0) || !std::isfinite(points[k].phi))
            throw InvalidArgument("pair points need rho >= 0 and finite phi");
        rho[k] = points[k].rho;
    }
    // Evaluate each distinct radius once.
    std::vector<double> uniq = rho;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    const auto vals = hankel_profile(spec.eta, uniq, spec.z, spec.m);
    std::vector<double> out(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto it = std::lower_bound(uniq.begin(), uniq.end(), rho[k]);
        out[k] = std::norm(vals[static_cast<std::size_t>(it - uniq.begin())]);
    }
    return out;
}

}  // namespace

PairCorrelations pair_correlations(const PairSpec& spec, const std::vector<PairPoint>& points) {
    spec.validate();
    const auto e2 = eta_norms(spec, points);
    const std::size_t n = points.size();
    const double nn = pair_normalization(spec.m);
    const double h = helicity_ratio(spec);
    const double peak = e2.empty() ? 0.0 : *std::max_element(e2.begin(), e2.end());

    PairCorrelations out;
    out.n = n;
    out.G2.assign(n * n, 0.0);
    out.G2H.assign(n * n, 0.0);
    out.g2.assign(n * n, std::numeric_limits<double>::quiet_NaN());
    out.masked.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a)
        if (!(e2[a] > 1e-14 * peak) || e2[a] <= std::numeric_limits<double>::min()) out.masked[a] = 1;

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double ang = angular_factor(spec, points[a].phi - points[b].phi);
            const double g = 8.0 * nn * nn * e2[a] * e2[b] * ang;
            out.G2[a * n + b] = g;
            out.G2H[a * n + b] = h * g;
            if (!out.masked[a] && !out.masked[b]) out.g2[a * n + b] = 2.0 * nn * nn * ang;
        }
    }
    return out;
}

double g2_closed_form(const PairSpec& spec, double delta_phi) {
    spec.validate();
    const double nn = pair_normalization(spec.m);
    return 2.0 * nn * nn * angular_factor(spec, delta_phi);
}

double pair_g2(const PairSpec& spec, PairPoint r, PairPoint r_prime) {
    spec.validate();
    const auto e2 = eta_norms(spec, {r, r_prime});
    if (e2[0] <= std::numeric_limits<double>::min() || e2[1] <= std::numeric_limits<double>::min())
        throw MaskedPoint("pair density vanishes at a requested point");
    const double nn = pair_normalization(spec.m);
    return 2.0 * nn * nn * angular_factor(spec, r.phi - r_prime.phi);
}

PairDensitySamples pair_densities(const PairSpec& spec, const std::vector<PairPoint>& points) {
    spec.validate();
    const auto e2 = eta_norms(spec, points);
    PairDensitySamples out;
    out.pnd.resize(points.size());
    out.helicity.assign(points.size(), 0.0);
    const double c = std::cos(spec.theta_B);
    for (std::size_t k = 0; k < points.size(); ++k) {
        out.pnd[k] = 2.0 * e2[k];
        if (spec.symmetry == PairSymmetry::same_up) out.helicity[k] = 2.0 * e2[k] * c;
        if (spec.symmetry == PairSymmetry::same_down) out.helicity[k] = -2.0 * e2[k] * c;
    }
    return out;
}

ThetaMatrix pair_amplitude(const PairSpec& spec, PairPoint r, PairPoint r_prime) {
    spec.validate();
    const auto v = hankel_profile(spec.eta, {r.rho, r_prime.rho}, spec.z, spec.m);
    const cplx fwd = std::polar(1.0, spec.m * (r.phi - r_prime.phi));
    const cplx bracket = spec.symmetry == PairSymmetry::antisymmetric ? fwd - std::conj(fwd) : fwd + std::conj(fwd);
    const cplx common = pair_normalization(spec.m) * v[0] * v[1] * bracket * std::polar(1.0, spec.phi0);
    const ThetaMatrix t = theta_matrix(spec);
    ThetaMatrix xi{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) xi[a][b] = common * t[a][b];
    return xi;
}

ContractionResult contraction_oracle(const PairSpec& spec, PairPoint r, PairPoint r_prime) {
    const ThetaMatrix xi = pair_amplitude(spec, r, r_prime);
    const int lam[2] = {+1, -1};
    ContractionResult out;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double w = std::norm(xi[a][b]);
            out.G2 += 2.0 * w;
            out.G2H += 2.0 * lam[a] * lam[b] * w;
        }
    }
    return out;
}

PairCorrelations coherent_reference(const BeamSpec& beam, double lambda0, double z,
                                    const std::vector<PairPoint>& points) {
    const BeamEvaluator ev(beam, lambda0);
    const std::size_t n = points.size();
    std::vector<double> pnd(n), hel(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Spinor s = ev.at(points[k].rho * std::cos(points[k].phi), points[k].rho * std::sin(points[k].phi), z);
        pnd[k] = std::norm(s.plus) + std::norm(s.minus);
        hel[k] = std::norm(s.plus) - std::norm(s.minus);
    }
    PairCorrelations out;
    out.n = n;
    out.G2.resize(n * n);
    out.G2H.resize(n * n);
    out.g2.assign(n * n, 1.0);
    out.masked.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            out.G2[a * n + b] = pnd[a] * pnd[b];
            out.G2H[a * n + b] = hel[a] * hel[b];
        }
    }
    return out;
}

const char* to_string(PairSymmetry s) {
    switch (s) {
        case PairSymmetry::symmetric: return "symmetric";
        case PairSymmetry::antisymmetric: return "antisymmetric";
        case PairSymmetry::same_up: return "same_up";
        case PairSymmetry::same_down: return "same_down";
    }
    return "unknown";
}

}  // namespace vortexlab
