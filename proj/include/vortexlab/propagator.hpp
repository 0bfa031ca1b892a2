#pragma once

#include "vortexlab/grid.hpp"

namespace vortexlab {

struct PropagationPlan {
    double dz = 0.0;
    int n_steps = 1;
    double guard_band = 0.1;
};

struct PropagationResult {
    SpinorField field;
    Warnings warnings;
    double max_border_fraction = 0.0;  // largest guard-band share of the norm over all steps
};

/// Fraction of the slice norm inside the outer `guard_band` share of each axis.
double border_fraction(const SpinorField& f, double guard_band);

/// Angular-spectrum solution of i dPsi/dz = -(1/2k0) laplacian_T Psi, one
/// exact spectral step per dz on a periodic grid.
PropagationResult propagate(const SpinorField& f, const PropagationPlan& plan);

/// max_interior |(n_plus - n_minus)/dz + div j| / max_interior |div j|, with
/// fourth-order central differences for the divergence. Returns 0 for an
/// all-zero input.
double continuity_defect(const ScalarField& n_minus, const ScalarField& n_plus, const VectorField2D& j,
                         double dz);

/// Photon-number variant: densities of the two slices, current of the midpoint.
double continuity_defect(const SpinorField& f_minus, const SpinorField& f_plus, const VectorField2D& j,
                         double dz);

}  // namespace vortexlab
