#include "vortexlab/propagator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vortexlab/field_io.hpp"
#include "vortexlab/observables.hpp"
#include "vortexlab/spectral.hpp"

namespace vortexlab {

double border_fraction(const SpinorField& f, double guard_band) {
    const TransverseGrid& g = f.grid;
    const int bx = static_cast<int>(std::ceil(guard_band * g.nx));
    const int by = static_cast<int>(std::ceil(guard_band * g.ny));
    double total = 0.0, border = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            const double n = std::norm(f.plus[k]) + std::norm(f.minus[k]);
            total += n;
            if (i < bx || i >= g.nx - bx || j < by || j >= g.ny - by) border += n;
        }
    }
    return total > 0.0 ? border / total : 0.0;
}

PropagationResult propagate(const SpinorField& f, const PropagationPlan& plan) {
    const TransverseGrid& g = f.grid;
    g.validate();
    if (plan.n_steps < 1) throw InvalidArgument("n_steps must be at least 1");
    if (plan.dz == 0.0 || !std::isfinite(plan.dz)) throw InvalidArgument("dz must be finite and non-zero");
    if (!(plan.guard_band >= 0.0 && plan.guard_band < 0.5)) throw InvalidArgument("guard_band must lie in [0, 0.5)");
    f.check_finite();

    const auto kx = angular_frequencies(g.nx, g.dx);
    const auto ky = angular_frequencies(g.ny, g.dy);
    const double k0 = g.k0();
    std::vector<cplx> transfer(g.size());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double kk = kx[static_cast<std::size_t>(i)] * kx[static_cast<std::size_t>(i)] +
                              ky[static_cast<std::size_t>(j)] * ky[static_cast<std::size_t>(j)];
            transfer[g.index(i, j)] = std::polar(1.0, -kk * plan.dz / (2.0 * k0));
        }
    }

    PropagationResult res;
    res.field = f;
    Fft2D fft(g.nx, g.ny);
    bool warned = false;
    for (int s = 0; s < plan.n_steps; ++s) {
        for (auto* comp : {&res.field.plus, &res.field.minus}) {
            fft.forward(*comp);
            for (std::size_t k = 0; k < comp->size(); ++k) (*comp)[k] *= transfer[k];
            fft.backward(*comp);
        }
        const double frac = border_fraction(res.field, plan.guard_band);
        res.max_border_fraction = std::max(res.max_border_fraction, frac);
        if (frac > 1e-6 && !warned) {
            warned = true;
            res.warnings.push_back({"BorderEnergy", "guard band holds " + format_double(frac) +
                                                        " of the norm after step " + std::to_string(s + 1)});
        }
    }
    res.field.grid.z = g.z + plan.n_steps * plan.dz;
    return res;
}

double continuity_defect(const ScalarField& n_minus, const ScalarField& n_plus, const VectorField2D& j,
                         double dz) {
    const TransverseGrid& g = j.grid;
    if (!n_minus.grid.same_plane(g) || !n_plus.grid.same_plane(g))
        throw GridMismatch("continuity_defect: slices and current differ in geometry");
    if (dz == 0.0) throw InvalidArgument("dz must be non-zero");
    double worst = 0.0, scale = 0.0;
    auto d4 = [&](const std::vector<double>& f, std::size_t m2, std::size_t m1, std::size_t p1, std::size_t p2,
                  double h) { return (f[m2] - 8.0 * f[m1] + 8.0 * f[p1] - f[p2]) / (12.0 * h); };
    for (int y = 2; y < g.ny - 2; ++y) {
        for (int x = 2; x < g.nx - 2; ++x) {
            const double div = d4(j.vx, g.index(x - 2, y), g.index(x - 1, y), g.index(x + 1, y), g.index(x + 2, y), g.dx) +
                               d4(j.vy, g.index(x, y - 2), g.index(x, y - 1), g.index(x, y + 1), g.index(x, y + 2), g.dy);
            const std::size_t k = g.index(x, y);
            const double res = (n_plus.values[k] - n_minus.values[k]) / dz + div;
            worst = std::max(worst, std::abs(res));
            scale = std::max(scale, std::abs(div));
        }
    }
    if (scale == 0.0) return worst == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return worst / scale;
}

double continuity_defect(const SpinorField& f_minus, const SpinorField& f_plus, const VectorField2D& j,
                         double dz) {
    return continuity_defect(densities(f_minus).pnd, densities(f_plus).pnd, j, dz);
}

}  // namespace vortexlab
