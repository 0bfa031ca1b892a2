#pragma once

#include <cstddef>

#include "vortexlab/grid.hpp"

namespace vortexlab::checks {

struct EulerResidual {
    double relative = 0.0;  // max |residual| / max |d_z v| over the accepted samples
    double max_residual = 0.0;
    double max_dz_v = 0.0;
    std::size_t samples = 0;
};

/// Residual of d_z v + (v . grad) v - grad Q for one circular component,
/// with v = Im(conj(psi) grad psi) / (k0 |psi|^2) and
/// Q = laplacian|psi| / (2 k0^2 |psi|). Slices at z - dz, z, z + dz.
/// Transverse derivatives are spectral, d_z is a central difference.
/// Only samples with amplitude above `amp_fraction` of the peak are used.
EulerResidual euler_residual(const SpinorField& f_minus, const SpinorField& f, const SpinorField& f_plus, double dz,
                             int lambda, double amp_fraction = 0.1);

}  // namespace vortexlab::checks
