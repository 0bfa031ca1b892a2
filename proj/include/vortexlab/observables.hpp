#pragma once

#include "vortexlab/grid.hpp"

namespace vortexlab {

enum class GradientMethod { spectral, fd4 };

struct Densities {
    ScalarField pnd;       // |psi+|^2 + |psi-|^2
    ScalarField helicity;  // |psi+|^2 - |psi-|^2
};

struct Currents {
    VectorField2D j_n;
    VectorField2D j_h;
};

struct Velocities {
    VectorField2D v_n;
    VectorField2D v_h;
};

struct ObservableSet {
    ScalarField pnd;
    ScalarField helicity;
    VectorField2D j_n, j_h;
    VectorField2D v_n, v_h;
    double mask_threshold = 1e-6;
};

Densities densities(const SpinorField& f);

/// j = (1/k0) sum_lambda w_lambda Im(conj(psi) grad psi), with w = 1 for the
/// photon current and w = lambda for the helicity current.
Currents currents(const SpinorField& f, GradientMethod method = GradientMethod::spectral);

/// v = j / pnd, masked where pnd < mask_threshold * max(pnd).
Velocities velocities(const SpinorField& f, double mask_threshold = 1e-6,
                      GradientMethod method = GradientMethod::spectral);
Velocities velocities(const Densities& d, const Currents& c, double mask_threshold);

ObservableSet compute_observables(const SpinorField& f, double mask_threshold = 1e-6,
                                  GradientMethod method = GradientMethod::spectral);

struct OamExpectation {
    double lx = 0.0;
    double ly = 0.0;
    double lz = 0.0;
};

/// Per-photon orbital angular momentum in hbar units from three slices at
/// z - dz, z, z + dz. The carrier exp(i k0 z) is restored for the z derivative.
OamExpectation oam_expectation(const SpinorField& f_minus, const SpinorField& f, const SpinorField& f_plus,
                               double dz);

}  // namespace vortexlab
