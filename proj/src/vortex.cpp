#include "vortexlab/vortex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vortexlab/observables.hpp"

namespace vortexlab {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int max_loop_samples = 1 << 20;

/// Phase step from a to b on the principal branch (-pi, pi].
double phase_step(cplx a, cplx b) {
    const double d = std::arg(std::conj(a) * b);
    return d <= -pi ? pi : d;
}

double wrap(double d) {
    d = std::remainder(d, two_pi);
    return d <= -pi ? d + two_pi : d;
}

double cross(Point2 a, Point2 b, Point2 c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
    const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

// ---------------------------------------------------------------- loops

LoopSpec LoopSpec::circle(double cx, double cy, double radius, int n_samples) {
    LoopSpec l;
    l.kind = Kind::circle;
    l.center = {cx, cy};
    l.radius = radius;
    l.n_samples = n_samples;
    l.validate();
    return l;
}

LoopSpec LoopSpec::polygon(std::vector<Point2> vertices, int n_samples) {
    LoopSpec l;
    l.kind = Kind::polygon;
    l.vertices = std::move(vertices);
    l.n_samples = n_samples;
    l.validate();
    double cx = 0.0, cy = 0.0;
    for (const auto& v : l.vertices) cx += v.x, cy += v.y;
    l.center = {cx / l.vertices.size(), cy / l.vertices.size()};
    return l;
}

void LoopSpec::validate() const {
    if (n_samples < 64) throw InvalidArgument("loop needs at least 64 samples");
    if (n_samples > max_loop_samples) throw InvalidArgument("loop sample count exceeds 2^20");
    if (kind == Kind::circle) {
        if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("loop radius must be positive");
        if (!std::isfinite(center.x) || !std::isfinite(center.y)) throw InvalidArgument("loop centre must be finite");
        return;
    }
    const std::size_t n = vertices.size();
    if (n < 3) throw InvalidArgument("polygon needs at least 3 vertices");
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = vertices[i], b = vertices[(i + 1) % n];
        if (!std::isfinite(a.x) || !std::isfinite(a.y)) throw InvalidArgument("polygon vertex must be finite");
        if (a.x == b.x && a.y == b.y) throw InvalidArgument("polygon has repeated consecutive vertices");
        area += a.x * b.y - b.x * a.y;
    }
    if (!(area > 0.0)) throw InvalidArgument("polygon must be counter-clockwise with positive area");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]))
                throw InvalidArgument("polygon is not simple");
        }
    }
}

double LoopSpec::length() const {
    if (kind == Kind::circle) return two_pi * radius;
    double len = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Point2 a = vertices[i], b = vertices[(i + 1) % vertices.size()];
        len += std::hypot(b.x - a.x, b.y - a.y);
    }
    return len;
}

Point2 LoopSpec::point(double t) const {
    if (kind == Kind::circle) {
        const double a = two_pi * t;
        return {center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
    }
    t -= std::floor(t);
    double s = t * length();
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = vertices[i], b = vertices[(i + 1) % n];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        if (s < len || i == n - 1) {
            const double u = std::min(s / len, 1.0);
            return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
        }
        s -= len;
    }
    return vertices.front();
}

Point2 LoopSpec::tangent(double t) const {
    if (kind == Kind::circle) {
        const double a = two_pi * t;
        return {-two_pi * radius * std::sin(a), two_pi * radius * std::cos(a)};
    }
    t -= std::floor(t);
    const double total = length();
    double s = t * total;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 a = vertices[i], b = vertices[(i + 1) % n];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        if (s < len || i == n - 1) return {(b.x - a.x) / len * total, (b.y - a.y) / len * total};
        s -= len;
    }
    return {0.0, 0.0};
}

LoopSpec LoopSpec::scaled(double factor) const {
    LoopSpec l = *this;
    if (kind == Kind::circle) {
        l.radius *= factor;
    } else {
        for (auto& v : l.vertices) v = {center.x + factor * (v.x - center.x), center.y + factor * (v.y - center.y)};
    }
    return l;
}

LoopSpec grid_boundary_loop(const TransverseGrid& g, int n_samples) {
    const double x1 = g.x(g.nx - 1), y1 = g.y(g.ny - 1);
    return LoopSpec::polygon({{g.x0, g.y0}, {x1, g.y0}, {x1, y1}, {g.x0, y1}}, n_samples);
}

// ---------------------------------------------------------------- sources

struct FieldSource::Sampled {
    SpinorField field;
    Densities dens;
    Currents cur;
};

namespace {

cplx pick(const Spinor& s, FieldComponent c) {
    switch (c) {
        case FieldComponent::plus: return s.plus;
        case FieldComponent::minus: return s.minus;
        case FieldComponent::scalar_sum: return (s.plus + s.minus) / std::numbers::sqrt2;
    }
    return {};
}

struct Bilinear {
    std::size_t k00, k10, k01, k11;
    double wx, wy;
};

Bilinear bilinear(const TransverseGrid& g, double x, double y) {
    const double fx = (x - g.x0) / g.dx;
    const double fy = (y - g.y0) / g.dy;
    const double slack = 1e-9;
    if (!(fx >= -slack && fx <= g.nx - 1 + slack && fy >= -slack && fy <= g.ny - 1 + slack))
        throw InvalidArgument("loop point (" + std::to_string(x) + ", " + std::to_string(y) +
                              ") lies outside the sampled grid");
    const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx - 2);
    const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.ny - 2);
    return {g.index(i, j), g.index(i + 1, j), g.index(i, j + 1), g.index(i + 1, j + 1),
            std::clamp(fx - i, 0.0, 1.0), std::clamp(fy - j, 0.0, 1.0)};
}

template <typename T>
T interp(const std::vector<T>& v, const Bilinear& b) {
    return (1.0 - b.wy) * ((1.0 - b.wx) * v[b.k00] + b.wx * v[b.k10]) +
           b.wy * ((1.0 - b.wx) * v[b.k01] + b.wx * v[b.k11]);
}

}  // namespace

FieldSource FieldSource::analytic(const BeamSpec& spec, double lambda0, double z) {
    FieldSource s;
    s.beam_ = std::make_shared<BeamEvaluator>(spec, lambda0);
    s.z_ = z;
    s.lambda0_ = lambda0;

    double reach = 0.0;
    for (const auto& c : spec.components) {
        const double zr = rayleigh_length(c.w0, lambda0);
        reach = std::max(reach, 3.0 * c.w0 * std::sqrt(1.0 + (z / zr) * (z / zr)));
    }
    const int n = 64;
    double peak = 0.0;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            const Spinor v = s.beam_->at(-reach + 2.0 * reach * i / n, -reach + 2.0 * reach * j / n, z);
            peak = std::max(peak, std::norm(v.plus) + std::norm(v.minus));
        }
    }
    s.ref_density_ = peak;

    const Spinor first = spinor_of(spec.components.front().pol);
    s.uniform_ = true;
    for (const auto& c : spec.components) {
        const Spinor u = spinor_of(c.pol);
        if (std::abs(first.plus * u.minus - first.minus * u.plus) > 1e-12) s.uniform_ = false;
    }
    s.helicity_fraction_ = std::norm(first.plus) - std::norm(first.minus);
    return s;
}

FieldSource FieldSource::sampled(const SpinorField& f) {
    f.grid.validate();
    FieldSource s;
    auto data = std::make_shared<Sampled>();
    data->field = f;
    data->dens = densities(f);
    data->cur = currents(f);
    s.lambda0_ = f.grid.lambda0;
    s.z_ = f.grid.z;
    s.ref_density_ = *std::max_element(data->dens.pnd.values.begin(), data->dens.pnd.values.end());

    double sp = 0.0, sm = 0.0;
    cplx c{0.0, 0.0};
    for (std::size_t k = 0; k < f.grid.size(); ++k) {
        sp += std::norm(f.plus[k]);
        sm += std::norm(f.minus[k]);
        c += std::conj(f.plus[k]) * f.minus[k];
    }
    const double tot = sp + sm;
    s.uniform_ = tot > 0.0 && (sp <= 1e-20 * tot || sm <= 1e-20 * tot || std::norm(c) >= (1.0 - 1e-10) * sp * sm);
    s.helicity_fraction_ = tot > 0.0 ? (sp - sm) / tot : 0.0;
    s.grid_ = std::move(data);
    return s;
}

Spinor FieldSource::at(double x, double y) const {
    if (beam_) return beam_->at(x, y, z_);
    const Bilinear b = bilinear(grid_->field.grid, x, y);
    return {interp(grid_->field.plus, b), interp(grid_->field.minus, b)};
}

cplx FieldSource::component_at(FieldComponent c, double x, double y) const { return pick(at(x, y), c); }

LocalObservables FieldSource::local(double x, double y) const {
    LocalObservables o;
    if (grid_) {
        const Bilinear b = bilinear(grid_->field.grid, x, y);
        o.pnd = interp(grid_->dens.pnd.values, b);
        o.helicity = interp(grid_->dens.helicity.values, b);
        o.jn_x = interp(grid_->cur.j_n.vx, b);
        o.jn_y = interp(grid_->cur.j_n.vy, b);
        o.jh_x = interp(grid_->cur.j_h.vx, b);
        o.jh_y = interp(grid_->cur.j_h.vy, b);
        return o;
    }
    const double h = 1e-3 * lambda0_;
    const Spinor c = at(x, y);
    const Spinor sx[4] = {at(x - 2 * h, y), at(x - h, y), at(x + h, y), at(x + 2 * h, y)};
    const Spinor sy[4] = {at(x, y - 2 * h), at(x, y - h), at(x, y + h), at(x, y + 2 * h)};
    auto deriv = [h](const Spinor (&s)[4], bool plus) {
        auto v = [&](int i) { return plus ? s[i].plus : s[i].minus; };
        return (v(0) - 8.0 * v(1) + 8.0 * v(2) - v(3)) / (12.0 * h);
    };
    const double inv_k0 = lambda0_ / two_pi;
    const cplx dpx = deriv(sx, true), dpy = deriv(sy, true);
    const cplx dmx = deriv(sx, false), dmy = deriv(sy, false);
    const double px = inv_k0 * (std::conj(c.plus) * dpx).imag();
    const double py = inv_k0 * (std::conj(c.plus) * dpy).imag();
    const double mx = inv_k0 * (std::conj(c.minus) * dmx).imag();
    const double my = inv_k0 * (std::conj(c.minus) * dmy).imag();
    o.pnd = std::norm(c.plus) + std::norm(c.minus);
    o.helicity = std::norm(c.plus) - std::norm(c.minus);
    o.jn_x = px + mx;
    o.jn_y = py + my;
    o.jh_x = px - mx;
    o.jh_y = py - my;
    return o;
}

bool FieldSource::uniformly_polarized(double* helicity_fraction) const {
    if (helicity_fraction) *helicity_fraction = helicity_fraction_;
    return uniform_;
}

// ---------------------------------------------------------------- winding

namespace {

enum class JumpMode { alternate, nearest };

struct Trace {
    std::vector<double> t;
    std::vector<cplx> v;
    std::vector<double> step;
    std::vector<std::uint8_t> candidate;
    double loop_max = 0.0;
    bool converged = true;
};

class LoopTracer {
public:
    LoopTracer(const FieldSource& src, FieldComponent comp, const LoopSpec& loop)
        : src_(src), comp_(comp), loop_(loop) {}

    cplx eval(double t) const {
        const Point2 p = loop_.point(t);
        return src_.component_at(comp_, p.x, p.y);
    }

    /// Exact zeros have no phase; move the sample a hair along the loop.
    cplx eval_nonzero(double& t, double dt) const {
        cplx v = eval(t);
        for (int k = 1; v == cplx{0.0, 0.0} && k <= 8; ++k) {
            t += 1e-7 * dt;
            v = eval(t);
        }
        return v;
    }

    double segment_min(double t0, double t1, cplx a, cplx b) const {
        if (!src_.is_analytic()) {
            const cplx d = b - a;
            const double dd = std::norm(d);
            if (dd == 0.0) return std::abs(a);
            const double s = std::clamp((std::conj(a) * (a - b)).real() / dd, 0.0, 1.0);
            return std::abs(a + s * d);
        }
        // Golden-section search on |psi| along the segment.
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = t0, hi = t1;
        double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
        double fc = std::abs(eval(c)), fd = std::abs(eval(d));
        double best = std::min({std::abs(a), std::abs(b), fc, fd});
        for (int it = 0; it < 90 && hi - lo > 1e-17; ++it) {
            if (fc < fd) {
                hi = d, d = c, fd = fc;
                c = hi - g * (hi - lo);
                fc = std::abs(eval(c));
                best = std::min(best, fc);
            } else {
                lo = c, c = d, fc = fd;
                d = lo + g * (hi - lo);
                fd = std::abs(eval(d));
                best = std::min(best, fd);
            }
        }
        return best;
    }

    /// Samples the loop and refines until branch tracking is safe. Stops
    /// early, unrefined, if the loop maximum is below `degenerate_below`.
    Trace run(int n0, double degenerate_below = 0.0) const {
        Trace tr;
        int n = n0;
        tr.t.resize(static_cast<std::size_t>(n));
        tr.v.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            double t = static_cast<double>(k) / n;
            tr.v[static_cast<std::size_t>(k)] = eval_nonzero(t, 1.0 / n);
            tr.t[static_cast<std::size_t>(k)] = t;
        }
        for (const auto& v : tr.v) tr.loop_max = std::max(tr.loop_max, std::abs(v));
        nudge_off_zeros(tr, n);
        if (tr.loop_max < degenerate_below) {
            const std::size_t m = tr.v.size();
            tr.step.assign(m, 0.0);
            tr.candidate.assign(m, 0);
            for (std::size_t k = 0; k < m; ++k) tr.step[k] = phase_step(tr.v[k], tr.v[(k + 1) % m]);
            return tr;
        }
        for (;;) {
            classify(tr);
            bool refine = false;
            for (std::size_t k = 0; k < tr.step.size(); ++k)
                if (!tr.candidate[k] && std::abs(tr.step[k]) > 0.5 * pi) refine = true;
            if (!refine) break;
            if (2 * n > max_loop_samples) {
                tr.converged = false;
                break;
            }
            std::vector<double> t2;
            std::vector<cplx> v2;
            t2.reserve(static_cast<std::size_t>(2 * n));
            v2.reserve(static_cast<std::size_t>(2 * n));
            for (int k = 0; k < n; ++k) {
                t2.push_back(tr.t[static_cast<std::size_t>(k)]);
                v2.push_back(tr.v[static_cast<std::size_t>(k)]);
                double tm = (2.0 * k + 1.0) / (2.0 * n);
                v2.push_back(eval_nonzero(tm, 0.5 / n));
                t2.push_back(tm);
            }
            tr.t = std::move(t2);
            tr.v = std::move(v2);
            n *= 2;
            nudge_off_zeros(tr, n);
        }
        return tr;
    }

private:
    /// A sample sitting on a zero has no usable phase and would split one
    /// pi jump into two arbitrary steps.
    void nudge_off_zeros(Trace& tr, int n) const {
        const double floor = 1e-9 * tr.loop_max;
        for (std::size_t k = 0; k < tr.v.size(); ++k) {
            for (int tries = 1; std::abs(tr.v[k]) < floor && tries <= 4; ++tries) {
                tr.t[k] += 1e-3 / n;
                tr.v[k] = eval(tr.t[k]);
            }
        }
    }

    void classify(Trace& tr) const {
        const std::size_t n = tr.v.size();
        tr.loop_max = 0.0;
        for (const auto& v : tr.v) tr.loop_max = std::max(tr.loop_max, std::abs(v));
        tr.step.assign(n, 0.0);
        tr.candidate.assign(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t k1 = (k + 1) % n;
            tr.step[k] = phase_step(tr.v[k], tr.v[k1]);
            if (std::abs(pi - std::abs(tr.step[k])) < 0.1) {
                const double t1 = k1 == 0 ? 1.0 : tr.t[k1];
                if (segment_min(tr.t[k], t1, tr.v[k], tr.v[k1]) < 1e-8 * tr.loop_max) tr.candidate[k] = 1;
            }
        }
    }

    const FieldSource& src_;
    FieldComponent comp_;
    const LoopSpec& loop_;
};

WindingResult resolve(const LoopSpec& loop, const Trace& tr, JumpMode mode, JumpConvention conv) {
    WindingResult r;
    r.converged = tr.converged;
    r.n_samples = static_cast<int>(tr.v.size());
    int sign = conv == JumpConvention::plus_first ? +1 : -1;
    r.samples.resize(tr.v.size());
    for (std::size_t k = 0; k < tr.v.size(); ++k) {
        double inc = tr.step[k];
        if (tr.candidate[k] && mode == JumpMode::alternate) {
            inc = wrap(tr.step[k] - pi) + sign * pi;
            r.jumps.push_back({tr.t[k], sign});
            sign = -sign;
        }
        const Point2 p = loop.point(tr.t[k]);
        r.samples[k] = {tr.t[k], p.x, p.y, std::abs(tr.v[k]), std::arg(tr.v[k]), inc, tr.candidate[k] != 0};
        r.total += inc;
    }
    r.winding = static_cast<int>(std::lround(r.total / two_pi));
    return r;
}

WindingResult trace_winding(const FieldSource& src, FieldComponent comp, const LoopSpec& loop, JumpMode mode,
                            JumpConvention conv) {
    loop.validate();
    LoopTracer tracer(src, comp, loop);
    const double scale = std::sqrt(src.reference_density());
    Trace tr = tracer.run(loop.n_samples, 1e-6 * scale);
    if (tr.loop_max < 1e-6 * scale) {
        // The loop runs along a zero set; nearby loops on either side must agree.
        const LoopSpec inner = loop.scaled(1.0 - 1e-3), outer = loop.scaled(1.0 + 1e-3);
        Trace ti = LoopTracer(src, comp, inner).run(loop.n_samples, 1e-6 * scale);
        Trace to = LoopTracer(src, comp, outer).run(loop.n_samples, 1e-6 * scale);
        if (ti.loop_max < 1e-6 * scale || to.loop_max < 1e-6 * scale)
            throw MaskedLoop("field component vanishes along and next to the loop");
        WindingResult a = resolve(inner, ti, mode, conv);
        WindingResult b = resolve(outer, to, mode, conv);
        if (a.winding != b.winding)
            throw MaskedLoop("loop lies on a zero set and the neighbouring loops disagree (" +
                             std::to_string(a.winding) + " vs " + std::to_string(b.winding) + ")");
        WindingResult r = resolve(loop, tr, mode, conv);
        r.winding = a.winding;
        r.total = a.total;
        r.jumps = a.jumps;
        r.converged = a.converged && b.converged;
        r.degenerate = true;
        return r;
    }
    return resolve(loop, tr, mode, conv);
}

}  // namespace

WindingResult loop_winding(const FieldSource& src, FieldComponent comp, const LoopSpec& loop,
                           JumpConvention convention) {
    WindingResult r = trace_winding(src, comp, loop, JumpMode::alternate, convention);
    if (std::abs(r.total - two_pi * r.winding) > 1e-6)
        throw NonIntegerWinding("resolved phase total " + std::to_string(r.total) +
                                " is not a multiple of 2 pi");
    return r;
}

// ---------------------------------------------------------------- circulation

CirculationResult loop_circulation(const FieldSource& src, const LoopSpec& loop, CurrentKind which,
                                   double mask_threshold) {
    loop.validate();
    if (!(mask_threshold > 0.0 && mask_threshold < 1.0)) throw InvalidArgument("mask_threshold must lie in (0, 1)");
    const int n = loop.n_samples;
    const double floor = mask_threshold * src.reference_density();
    double sum = 0.0;
    int masked = 0;
    for (int k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / n;
        const Point2 p = loop.point(t);
        const Point2 tan = loop.tangent(t);
        const LocalObservables o = src.local(p.x, p.y);
        if (!(o.pnd >= floor) || o.pnd <= 0.0) {
            ++masked;
            continue;
        }
        const double jx = which == CurrentKind::photon ? o.jn_x : o.jh_x;
        const double jy = which == CurrentKind::photon ? o.jn_y : o.jh_y;
        sum += (jx * tan.x + jy * tan.y) / o.pnd;
    }
    CirculationResult r;
    r.masked_fraction = static_cast<double>(masked) / n;
    if (r.masked_fraction <= 0.01) {
        r.kappa = sum / n;
        return r;
    }
    double frac = 0.0;
    if (!src.uniformly_polarized(&frac))
        throw MaskedLoop(std::to_string(masked) + " of " + std::to_string(n) +
                         " loop samples are masked and the field is not uniformly polarized");
    const FieldComponent comp = frac >= 0.0 ? FieldComponent::plus : FieldComponent::minus;
    const WindingResult w = loop_winding(src, comp, loop);
    r.kappa = w.winding * src.lambda0() * (which == CurrentKind::photon ? 1.0 : frac);
    r.from_winding = true;
    return r;
}

// ---------------------------------------------------------------- comparators

namespace {

double berry_field_sum(const FieldSource& src, FieldComponent comp, const LoopSpec& loop, int n) {
    const double ht = 1e-3 * src.lambda0() / loop.length();
    auto eval = [&](double t) {
        const Point2 p = loop.point(t);
        return src.component_at(comp, p.x, p.y);
    };
    std::vector<cplx> e(static_cast<std::size_t>(n)), de(static_cast<std::size_t>(n));
    double emax = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = (k + 0.5) / n;
        e[static_cast<std::size_t>(k)] = eval(t);
        de[static_cast<std::size_t>(k)] =
            (eval(t - 2 * ht) - 8.0 * eval(t - ht) + 8.0 * eval(t + ht) - eval(t + 2 * ht)) / (12.0 * ht);
        emax = std::max(emax, std::abs(e[static_cast<std::size_t>(k)]));
    }
    if (emax == 0.0) return 0.0;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const cplx ek = e[static_cast<std::size_t>(k)];
        if (std::abs(ek) < 1e-8 * emax) continue;
        sum += (de[static_cast<std::size_t>(k)] / ek).imag();
    }
    return sum / n / two_pi;
}

}  // namespace

double berry_tc(const FieldSource& src, FieldComponent comp, const LoopSpec& loop, BerryVariant variant) {
    loop.validate();
    if (variant == BerryVariant::arg) {
        LoopTracer tracer(src, comp, loop);
        const Trace tr = tracer.run(loop.n_samples);
        double total = 0.0;
        for (double s : tr.step) total += s;
        return total / two_pi;
    }
    const int n = loop.n_samples;
    const double a = berry_field_sum(src, comp, loop, n);
    const double b = berry_field_sum(src, comp, loop, 2 * n);
    if (std::abs(a - b) > 1e-3)
        throw NotConverged("field comparator changed by " + std::to_string(std::abs(a - b)) + " under doubling");
    return b;
}

VortexReport analyze_loop(const FieldSource& src, FieldComponent comp, const LoopSpec& loop,
                          JumpConvention convention, double mask_threshold) {
    VortexReport r;
    const WindingResult w = loop_winding(src, comp, loop, convention);
    r.winding = w.winding;
    r.total_phase = w.total;
    r.jump_events = w.jumps;
    r.samples = w.samples;
    r.converged = w.converged;
    r.degenerate_loop = w.degenerate;
    const CirculationResult cn = loop_circulation(src, loop, CurrentKind::photon, mask_threshold);
    const CirculationResult ch = loop_circulation(src, loop, CurrentKind::helicity, mask_threshold);
    r.kappa_n = cn.kappa;
    r.kappa_h = ch.kappa;
    r.circulation_from_winding = cn.from_winding || ch.from_winding;
    r.tc_berry_arg = berry_tc(src, comp, loop, BerryVariant::arg);
    try {
        r.tc_berry_field = berry_tc(src, comp, loop, BerryVariant::field);
    } catch (const NotConverged&) {
        r.tc_berry_field = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

// ---------------------------------------------------------------- census

std::vector<cplx> component_values(const SpinorField& f, FieldComponent comp) {
    std::vector<cplx> out(f.grid.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = pick({f.plus[k], f.minus[k]}, comp);
    return out;
}

Census singularity_census(const SpinorField& f, FieldComponent comp, double zero_threshold) {
    const TransverseGrid& g = f.grid;
    g.validate();
    if (!(zero_threshold > 0.0 && zero_threshold < 1.0)) throw InvalidArgument("zero_threshold must lie in (0, 1)");
    const std::vector<cplx> v = component_values(f, comp);
    Census c;
    c.grid = g;
    c.zero_threshold = zero_threshold;

    // Each edge step is computed once so neighbouring plaquettes cancel exactly.
    std::vector<double> hstep(g.size(), 0.0), vstep(g.size(), 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) hstep[g.index(i, j)] = phase_step(v[g.index(i, j)], v[g.index(i + 1, j)]);
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) vstep[g.index(i, j)] = phase_step(v[g.index(i, j)], v[g.index(i, j + 1)]);

    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            const double circ = hstep[g.index(i, j)] + vstep[g.index(i + 1, j)] - hstep[g.index(i, j + 1)] -
                                vstep[g.index(i, j)];
            const int q = static_cast<int>(std::lround(circ / two_pi));
            if (q != 0) {
                c.charges.push_back({g.x(i) + 0.5 * g.dx, g.y(j) + 0.5 * g.dy, q});
                c.net_charge += q;
            }
        }
    }

    double peak = 0.0;
    for (const auto& x : v) peak = std::max(peak, std::norm(x));
    c.zero_raster.assign(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (std::norm(v[k]) < zero_threshold * peak) c.zero_raster[k] = 1;
    return c;
}

int net_charge_within(const Census& c, double cx, double cy, double radius) {
    int q = 0;
    for (const auto& p : c.charges) {
        const double dx = p.x - cx, dy = p.y - cy;
        if (dx * dx + dy * dy <= radius * radius) q += p.charge;
    }
    return q;
}

}  // namespace vortexlab
