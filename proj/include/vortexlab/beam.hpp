#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vortexlab/grid.hpp"

namespace vortexlab {

enum class PolKind { circular_plus, circular_minus, linear_x, linear_y, bloch_up, bloch_down };

struct PolarizationSpec {
    PolKind kind = PolKind::circular_plus;
    double theta_B = 0.0;
    double phi_B = 0.0;
};

/// Circular-basis components (c+, c-).
struct Spinor {
    cplx plus;
    cplx minus;
};

enum class BlochState { up, down };

Spinor bloch_spinor(double theta_B, double phi_B, BlochState which);
Spinor spinor_of(const PolarizationSpec& pol);

enum class ProfileKind { lg, bg };

struct BeamComponent {
    cplx amplitude{1.0, 0.0};
    PolarizationSpec pol;
    ProfileKind profile = ProfileKind::lg;
    int p = 0;
    int m = 0;
    double w0 = 10.0;
    double theta_p = 0.0;  // BG cone half-angle
};

struct BeamSpec {
    std::vector<BeamComponent> components;
};

/// Throws InvalidArgument on a broken component; appends paraxial-validity
/// and divergent-energy warnings to `warnings` when given.
void validate_component(const BeamComponent& c, double lambda0, Warnings* warnings = nullptr);
void validate_spec(const BeamSpec& spec, double lambda0, Warnings* warnings = nullptr);

double rayleigh_length(double w0, double lambda0);

/// Radial integral of |profile|^2 over the z=0 plane with unit prefactor.
double lg_norm_integral(int p, int m, double w0);
double bg_norm_integral(int p, double w0, double theta_p, double lambda0);

/// One scalar profile with its normalization constant fixed at construction.
class ProfileEvaluator {
public:
    ProfileEvaluator(ProfileKind kind, int p, int m, double w0, double theta_p, double lambda0);

    /// Slowly varying envelope (carrier stripped) at (x, y, z).
    cplx operator()(double x, double y, double z) const;
    double norm_constant() const { return norm_; }

private:
    ProfileKind kind_;
    int p_, m_;
    double w0_, theta_p_, lambda0_, k0_, zr_, beta_;
    double norm_;
};

/// Evaluates a whole BeamSpec pointwise.
class BeamEvaluator {
public:
    BeamEvaluator(const BeamSpec& spec, double lambda0);

    Spinor at(double x, double y, double z) const;
    double lambda0() const { return lambda0_; }
    const BeamSpec& spec() const { return spec_; }

private:
    BeamSpec spec_;
    double lambda0_;
    std::vector<ProfileEvaluator> profiles_;
    std::vector<Spinor> weights_;  // amplitude times polarization spinor
};

ComplexField lg_profile(int p, int m, double w0, const TransverseGrid& grid);
ComplexField bg_profile(int p, int m, double w0, double theta_p, const TransverseGrid& grid,
                        Warnings* warnings = nullptr);

SpinorField synthesize(const BeamSpec& spec, const TransverseGrid& grid, Warnings* warnings = nullptr);

/// Sum over j != j' of conj(a_j) a_j' <xi_j|xi_j'>.
cplx superposition_overlap_sum(const std::vector<cplx>& amps, const std::vector<SpinorField>& fields);

/// Real log of the superposition normalization factor. Throws
/// InvalidArgument if the double sum has a non-negligible imaginary part.
double superposition_log_norm(const std::vector<cplx>& amps, const std::vector<SpinorField>& fields);

/// Two elliptically polarized BG beams with opposite helical index, one per
/// Bloch eigenstate.
BeamSpec helicity_vortex_spec(cplx c_up, cplx c_down, double theta_B, double phi_B, int p, int m,
                              double w0, double theta_p);

/// Offset phi0 in n_H = pnd sin(theta_B) cos(2 m phi + phi0) for equal |c_up|, |c_down|.
/// Returned in [0, 2 pi).
double helicity_vortex_phi0(cplx c_up, cplx c_down);

std::string to_string(PolKind k);
std::string to_string(ProfileKind k);

}  // namespace vortexlab
