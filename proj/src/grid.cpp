#include "vortexlab/grid.hpp"

#include <cmath>
#include <string>

namespace vortexlab {

TransverseGrid TransverseGrid::centered(int nx, int ny, double dx, double dy, double z,
                                        double lambda0) {
    TransverseGrid g;
    g.nx = nx;
    g.ny = ny;
    g.dx = dx;
    g.dy = dy;
    g.x0 = -0.5 * (nx - 1) * dx;
    g.y0 = -0.5 * (ny - 1) * dy;
    g.z = z;
    g.lambda0 = lambda0;
    g.validate();
    return g;
}

void TransverseGrid::validate() const {
    if (nx < 4 || ny < 4) {
        throw InvalidArgument("grid needs at least 4 samples per axis, got " + std::to_string(nx) +
                              "x" + std::to_string(ny));
    }
    if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
        throw InvalidArgument("grid spacing must be positive and finite");
    }
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) {
        throw InvalidArgument("lambda0 must be positive");
    }
    if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(z)) {
        throw InvalidArgument("grid origin and z must be finite");
    }
}

bool TransverseGrid::same_plane(const TransverseGrid& o) const {
    return nx == o.nx && ny == o.ny && dx == o.dx && dy == o.dy && x0 == o.x0 && y0 == o.y0 &&
           lambda0 == o.lambda0;
}

void SpinorField::check_finite() const {
    for (std::size_t k = 0; k < plus.size(); ++k) {
        if (!std::isfinite(plus[k].real()) || !std::isfinite(plus[k].imag()) ||
            !std::isfinite(minus[k].real()) || !std::isfinite(minus[k].imag())) {
            throw InvalidArgument("non-finite field value at sample " + std::to_string(k));
        }
    }
}

std::size_t ScalarField::unmasked_count() const {
    if (mask.empty()) return values.size();
    std::size_t n = 0;
    for (auto m : mask) n += (m == 0);
    return n;
}

cplx inner_product(const SpinorField& a, const SpinorField& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("inner_product: fields live on different grids");
    // Row partial sums keep the accumulation error at O(sqrt(n) eps).
    cplx total{0.0, 0.0};
    const auto nx = static_cast<std::size_t>(a.grid.nx);
    for (int j = 0; j < a.grid.ny; ++j) {
        cplx row{0.0, 0.0};
        const std::size_t base = static_cast<std::size_t>(j) * nx;
        for (std::size_t i = 0; i < nx; ++i) {
            row += std::conj(a.plus[base + i]) * b.plus[base + i];
            row += std::conj(a.minus[base + i]) * b.minus[base + i];
        }
        total += row;
    }
    return total * a.grid.cell_area();
}

double slice_norm(const SpinorField& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

SpinorField slice_normalize(const SpinorField& f) {
    const double norm = slice_norm(f);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ZeroField("cannot normalize a zero field");
    return scaled(f, cplx{1.0 / norm, 0.0});
}

SpinorField scaled(const SpinorField& f, cplx factor) {
    SpinorField out = f;
    for (auto& v : out.plus) v *= factor;
    for (auto& v : out.minus) v *= factor;
    return out;
}

}  // namespace vortexlab
