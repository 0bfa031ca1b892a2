#include "vortexlab/beam.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "vortexlab/special.hpp"

namespace vortexlab {

namespace {

constexpr double pi = std::numbers::pi;

double radial_integral(const std::function<double(double)>& f, double upper) {
    // Split into unit-ish panels so the adaptive rule never straddles many lobes.
    const int panels = 32;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = upper * k / panels;
        const double b = upper * (k + 1) / panels;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 5, 1e-13);
    }
    return total;
}

cplx int_pow(cplx base, int n) {
    cplx out{1.0, 0.0};
    for (int k = 0; k < n; ++k) out *= base;
    return out;
}

}  // namespace

Spinor bloch_spinor(double theta_B, double phi_B, BlochState which) {
    const double c = std::cos(0.5 * theta_B);
    const double s = std::sin(0.5 * theta_B);
    const cplx em = std::polar(1.0, -0.5 * phi_B);
    const cplx ep = std::polar(1.0, 0.5 * phi_B);
    if (which == BlochState::up) return {c * em, s * ep};
    return {-s * em, c * ep};
}

Spinor spinor_of(const PolarizationSpec& pol) {
    const double r = 1.0 / std::numbers::sqrt2;
    switch (pol.kind) {
        case PolKind::circular_plus: return {1.0, 0.0};
        case PolKind::circular_minus: return {0.0, 1.0};
        case PolKind::linear_x: return {r, r};
        case PolKind::linear_y: return {cplx{0.0, r}, cplx{0.0, -r}};
        case PolKind::bloch_up: return bloch_spinor(pol.theta_B, pol.phi_B, BlochState::up);
        case PolKind::bloch_down: return bloch_spinor(pol.theta_B, pol.phi_B, BlochState::down);
    }
    throw InvalidArgument("unknown polarization kind");
}

double rayleigh_length(double w0, double lambda0) { return pi * w0 * w0 / lambda0; }

void validate_component(const BeamComponent& c, double lambda0, Warnings* warnings) {
    if (!std::isfinite(c.amplitude.real()) || !std::isfinite(c.amplitude.imag()))
        throw InvalidArgument("component amplitude must be finite");
    if (!(c.w0 > 0.0) || !std::isfinite(c.w0)) throw InvalidArgument("w0 must be positive");
    if (c.p < 0) throw InvalidArgument("p must be non-negative");
    if (c.p > 30 || std::abs(c.m) > 30) throw InvalidArgument("p and |m| are limited to 30");
    if (c.pol.kind == PolKind::bloch_up || c.pol.kind == PolKind::bloch_down) {
        if (!(c.pol.theta_B >= 0.0 && c.pol.theta_B <= pi) || !std::isfinite(c.pol.phi_B))
            throw InvalidArgument("theta_B must lie in [0, pi] and phi_B must be finite");
    }
    if (c.profile == ProfileKind::bg) {
        if (!(c.theta_p > 0.0 && c.theta_p < 0.5 * pi))
            throw InvalidArgument("BG cone angle theta_p must lie in (0, pi/2)");
        if (warnings && c.theta_p > 0.15 * pi)
            warnings->push_back({"ParaxialValidity", "theta_p exceeds 0.15 pi"});
        if (warnings && c.p == 0 && c.m != 0)
            warnings->push_back({"DivergentKineticEnergy",
                                 "BG with p = 0 and m != 0 has a divergent kinetic energy on axis"});
    }
    if (warnings && c.w0 < 2.0 * lambda0)
        warnings->push_back({"ParaxialValidity", "w0 below two wavelengths"});
}

void validate_spec(const BeamSpec& spec, double lambda0, Warnings* warnings) {
    if (spec.components.empty()) throw InvalidArgument("beam needs at least one component");
    for (const auto& c : spec.components) validate_component(c, lambda0, warnings);
}

double lg_norm_integral(int p, int m, double w0) {
    const int a = std::abs(m);
    auto f = [&](double rho) {
        const double t = rho / w0;
        const double r = std::pow(std::numbers::sqrt2 * t, a) * assoc_laguerre(p, a, 2.0 * t * t) *
                         std::exp(-t * t);
        return 2.0 * pi * rho * r * r;
    };
    const double upper = w0 * (8.0 + std::sqrt(2.0 * p + a + 1.0));
    return radial_integral(f, upper);
}

double bg_norm_integral(int p, double w0, double theta_p, double lambda0) {
    const double beta = 2.0 * pi / lambda0 * std::sin(theta_p);
    auto f = [&](double rho) {
        const double r = bessel_j(p, cplx{beta * rho, 0.0}).real() * std::exp(-rho * rho / (w0 * w0));
        return 2.0 * pi * rho * r * r;
    };
    return radial_integral(f, 7.0 * w0);
}

ProfileEvaluator::ProfileEvaluator(ProfileKind kind, int p, int m, double w0, double theta_p,
                                   double lambda0)
    : kind_(kind), p_(p), m_(m), w0_(w0), theta_p_(theta_p), lambda0_(lambda0),
      k0_(2.0 * pi / lambda0), zr_(rayleigh_length(w0, lambda0)),
      beta_(2.0 * pi / lambda0 * std::sin(theta_p)) {
    const double integral =
        kind == ProfileKind::lg ? lg_norm_integral(p, m, w0) : bg_norm_integral(p, w0, theta_p, lambda0);
    if (!(integral > 0.0)) throw ZeroField("profile has zero norm");
    norm_ = 1.0 / std::sqrt(integral);
}

cplx ProfileEvaluator::operator()(double x, double y, double z) const {
    const int a = std::abs(m_);
    const double s = m_ < 0 ? -1.0 : 1.0;
    const double rho2 = x * x + y * y;
    const cplx q{1.0, z / zr_};
    const cplx iq = 1.0 / q;
    const cplx gauss = std::exp(-rho2 * iq / (w0_ * w0_));
    if (kind_ == ProfileKind::lg) {
        const double q2 = std::norm(q);
        const cplx helix = int_pow(cplx{x, s * y} * (std::numbers::sqrt2 / w0_), a);
        const double lag = assoc_laguerre(p_, a, 2.0 * rho2 / (w0_ * w0_ * q2));
        return norm_ * int_pow(iq, 2 * p_ + a + 1) * std::pow(q2, p_) * helix * lag * gauss;
    }
    const double rho = std::sqrt(rho2);
    const cplx helix = rho > 0.0 ? int_pow(cplx{x / rho, s * y / rho}, a) : cplx{1.0, 0.0};
    const cplx j = bessel_j(p_, beta_ * rho * iq);
    const cplx drift = std::exp(cplx{0.0, -1.0} * (beta_ * beta_ * z / (2.0 * k0_)) * iq);
    return norm_ * iq * j * drift * gauss * helix;
}

BeamEvaluator::BeamEvaluator(const BeamSpec& spec, double lambda0) : spec_(spec), lambda0_(lambda0) {
    validate_spec(spec, lambda0);
    for (const auto& c : spec.components) {
        profiles_.emplace_back(c.profile, c.p, c.m, c.w0, c.theta_p, lambda0);
        const Spinor u = spinor_of(c.pol);
        weights_.push_back({c.amplitude * u.plus, c.amplitude * u.minus});
    }
}

Spinor BeamEvaluator::at(double x, double y, double z) const {
    Spinor out{0.0, 0.0};
    for (std::size_t c = 0; c < profiles_.size(); ++c) {
        const cplx v = profiles_[c](x, y, z);
        out.plus += weights_[c].plus * v;
        out.minus += weights_[c].minus * v;
    }
    return out;
}

namespace {

ComplexField sample_profile(const ProfileEvaluator& ev, const TransverseGrid& grid) {
    ComplexField f(grid);
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) f.values[grid.index(i, j)] = ev(grid.x(i), grid.y(j), grid.z);
    return f;
}

}  // namespace

ComplexField lg_profile(int p, int m, double w0, const TransverseGrid& grid) {
    grid.validate();
    BeamComponent c;
    c.profile = ProfileKind::lg, c.p = p, c.m = m, c.w0 = w0;
    validate_component(c, grid.lambda0);
    return sample_profile(ProfileEvaluator(ProfileKind::lg, p, m, w0, 0.0, grid.lambda0), grid);
}

ComplexField bg_profile(int p, int m, double w0, double theta_p, const TransverseGrid& grid,
                        Warnings* warnings) {
    grid.validate();
    BeamComponent c;
    c.profile = ProfileKind::bg, c.p = p, c.m = m, c.w0 = w0, c.theta_p = theta_p;
    validate_component(c, grid.lambda0, warnings);
    return sample_profile(ProfileEvaluator(ProfileKind::bg, p, m, w0, theta_p, grid.lambda0), grid);
}

SpinorField synthesize(const BeamSpec& spec, const TransverseGrid& grid, Warnings* warnings) {
    grid.validate();
    validate_spec(spec, grid.lambda0, warnings);
    SpinorField f(grid);
    for (const auto& c : spec.components) {
        const ProfileEvaluator ev(c.profile, c.p, c.m, c.w0, c.theta_p, grid.lambda0);
        const Spinor u = spinor_of(c.pol);
        const cplx wp = c.amplitude * u.plus;
        const cplx wm = c.amplitude * u.minus;
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                const std::size_t k = grid.index(i, j);
                const cplx v = ev(grid.x(i), grid.y(j), grid.z);
                f.plus[k] += wp * v;
                f.minus[k] += wm * v;
            }
        }
    }
    f.check_finite();
    return f;
}

cplx superposition_overlap_sum(const std::vector<cplx>& amps, const std::vector<SpinorField>& fields) {
    if (amps.size() != fields.size()) throw InvalidArgument("amplitude and field counts differ");
    cplx sum{0.0, 0.0};
    for (std::size_t a = 0; a < fields.size(); ++a) {
        for (std::size_t b = 0; b < fields.size(); ++b) {
            if (a == b) continue;
            sum += std::conj(amps[a]) * amps[b] * inner_product(fields[a], fields[b]);
        }
    }
    return sum;
}

double superposition_log_norm(const std::vector<cplx>& amps, const std::vector<SpinorField>& fields) {
    const cplx s = superposition_overlap_sum(amps, fields);
    double scale = 0.0;
    for (std::size_t a = 0; a < fields.size(); ++a)
        for (std::size_t b = 0; b < fields.size(); ++b)
            if (a != b) scale += std::abs(amps[a]) * std::abs(amps[b]) * slice_norm(fields[a]) * slice_norm(fields[b]);
    if (std::abs(s.imag()) > 1e-12 * std::max(scale, 1.0))
        throw InvalidArgument("overlap double sum is not real");
    return s.real();
}

BeamSpec helicity_vortex_spec(cplx c_up, cplx c_down, double theta_B, double phi_B, int p, int m,
                              double w0, double theta_p) {
    BeamSpec spec;
    BeamComponent up;
    up.amplitude = c_up;
    up.pol = {PolKind::bloch_up, theta_B, phi_B};
    up.profile = ProfileKind::bg;
    up.p = p, up.m = m, up.w0 = w0, up.theta_p = theta_p;
    BeamComponent down = up;
    down.amplitude = c_down;
    down.pol.kind = PolKind::bloch_down;
    down.m = -m;
    spec.components = {up, down};
    return spec;
}

double helicity_vortex_phi0(cplx c_up, cplx c_down) {
    double phi = std::arg(c_up) - std::arg(c_down) + pi;
    phi = std::fmod(phi, 2.0 * pi);
    if (phi < 0.0) phi += 2.0 * pi;
    if (phi >= 2.0 * pi - 1e-15) phi = 0.0;
    return phi;
}

std::string to_string(PolKind k) {
    switch (k) {
        case PolKind::circular_plus: return "circular_plus";
        case PolKind::circular_minus: return "circular_minus";
        case PolKind::linear_x: return "linear_x";
        case PolKind::linear_y: return "linear_y";
        case PolKind::bloch_up: return "bloch_up";
        case PolKind::bloch_down: return "bloch_down";
    }
    return "?";
}

std::string to_string(ProfileKind k) { return k == ProfileKind::lg ? "lg" : "bg"; }

}  // namespace vortexlab
