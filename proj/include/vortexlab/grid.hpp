#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "vortexlab/errors.hpp"

namespace vortexlab {

using cplx = std::complex<double>;

/// Uniform, axis-aligned sampling of one transverse plane. All lengths are
/// in units of the reference wavelength, so k0 = 2*pi when lambda0 == 1.
struct TransverseGrid {
    int nx = 0;
    int ny = 0;
    double dx = 1.0;
    double dy = 1.0;
    double x0 = 0.0;
    double y0 = 0.0;
    double lambda0 = 1.0;
    double z = 0.0;

    /// Grid symmetric about the optical axis. For even counts the axis falls
    /// on a cell centre, never on a sample.
    static TransverseGrid centered(int nx, int ny, double dx, double dy, double z = 0.0,
                                   double lambda0 = 1.0);

    void validate() const;

    double x(int i) const { return x0 + i * dx; }
    double y(int j) const { return y0 + j * dy; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    double k0() const { return 2.0 * std::numbers::pi / lambda0; }
    double cell_area() const { return dx * dy; }

    /// Same sampling geometry; z may differ.
    bool same_plane(const TransverseGrid& other) const;
    TransverseGrid at_z(double new_z) const {
        TransverseGrid g = *this;
        g.z = new_z;
        return g;
    }

    bool operator==(const TransverseGrid&) const = default;
};

/// A single complex scalar sampled on a grid (one beam profile).
struct ComplexField {
    TransverseGrid grid;
    std::vector<cplx> values;

    ComplexField() = default;
    explicit ComplexField(const TransverseGrid& g) : grid(g), values(g.size()) {}
};

/// Two circular-polarization components of the slowly varying envelope.
struct SpinorField {
    TransverseGrid grid;
    std::vector<cplx> plus;
    std::vector<cplx> minus;

    SpinorField() = default;
    explicit SpinorField(const TransverseGrid& g) : grid(g), plus(g.size()), minus(g.size()) {}

    const std::vector<cplx>& component(int lambda) const { return lambda > 0 ? plus : minus; }
    std::vector<cplx>& component(int lambda) { return lambda > 0 ? plus : minus; }

    /// Throws InvalidArgument if a value is NaN or infinite.
    void check_finite() const;
};

/// Real field with an optional mask (mask[k] != 0 marks an undefined sample).
struct ScalarField {
    TransverseGrid grid;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;

    ScalarField() = default;
    explicit ScalarField(const TransverseGrid& g) : grid(g), values(g.size(), 0.0) {}

    bool masked(std::size_t k) const { return !mask.empty() && mask[k] != 0; }
    std::size_t unmasked_count() const;
};

struct VectorField2D {
    TransverseGrid grid;
    std::vector<double> vx;
    std::vector<double> vy;
    std::vector<std::uint8_t> mask;

    VectorField2D() = default;
    explicit VectorField2D(const TransverseGrid& g) : grid(g), vx(g.size(), 0.0), vy(g.size(), 0.0) {}

    bool masked(std::size_t k) const { return !mask.empty() && mask[k] != 0; }
};

/// sum over lambda and samples of conj(a) * b * dx * dy.
cplx inner_product(const SpinorField& a, const SpinorField& b);

/// sqrt(<f|f>) at this slice.
double slice_norm(const SpinorField& f);

SpinorField slice_normalize(const SpinorField& f);

SpinorField scaled(const SpinorField& f, cplx factor);

}  // namespace vortexlab
