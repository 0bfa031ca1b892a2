#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vortexlab/beam.hpp"
#include "vortexlab/grid.hpp"

namespace vortexlab {

/// phi_k-independent momentum-space amplitude eta(k_z, rho_k), normalized so
/// that the integral of |eta|^2 over d^3k is one.
class RadialProfile {
public:
    /// Separable Gaussian in k_z times a Gaussian ring in rho_k. The sigmas are
    /// standard deviations of |eta|^2.
    static RadialProfile gaussian_ring(double kz0, double sigma_z, double rho_k0, double sigma_rho);
    /// Quasi-monochromatic default: k_z around 2 pi / lambda0 with relative
    /// width 0.01, ring at k0 sin(theta_p) with width 0.1 of its radius.
    static RadialProfile default_profile(double lambda0 = 1.0, double theta_p = 0.05 * 3.141592653589793);
    /// Samples on a uniform (k_z, rho_k) grid, row-major with rho_k fastest.
    /// Throws InvalidArgument unless the trapezoid norm is 1 within 1e-10.
    static RadialProfile tabulated(std::vector<double> kz, std::vector<double> rho_k, std::vector<cplx> eta);

    cplx eta(double kz, double rho_k) const;
    /// Integral of |eta|^2 d^3k by quadrature.
    double k_norm() const;
    bool is_tabulated() const { return tabulated_; }

    double kz0 = 0.0, sigma_z = 0.0, rho_k0 = 0.0, sigma_rho = 0.0;

private:
    friend std::vector<cplx> hankel_profile(const RadialProfile&, const std::vector<double>&, double, int);
    friend double parseval_norm(const RadialProfile&, int);

    bool tabulated_ = false;
    double amp_z_ = 0.0, amp_rho_ = 0.0;
    std::vector<double> kz_, rho_k_;
    std::vector<cplx> table_;
};

/// eta_tilde(rho; z) = (i^m / sqrt(2 pi)) int dk_z int rho_k drho_k eta e^{i k_z z} J_m(rho rho_k),
/// trapezoidal in both k_z and rho_k.
std::vector<cplx> hankel_profile(const RadialProfile& eta, const std::vector<double>& rho, double z, int m);

/// Integral of |eta_tilde|^2 over d^3r (Gauss-Kronrod in rho, trapezoid in z).
double parseval_norm(const RadialProfile& eta, int m);

enum class PairSymmetry { symmetric, antisymmetric, same_up, same_down };

struct PairSpec {
    int m = 1;
    PairSymmetry symmetry = PairSymmetry::symmetric;
    double theta_B = 0.0;
    double phi_B = 0.0;
    double phi0 = 0.0;
    double z = 0.0;
    RadialProfile eta = RadialProfile::default_profile();

    void validate() const;
};

using ThetaMatrix = std::array<std::array<cplx, 2>, 2>;  // [lambda=+,-][lambda'=+,-]

/// Polarization matrix of the pair. The same-helicity classes use
/// sqrt(2) u u^T so that sum |Theta|^2 = 2 for every class.
ThetaMatrix theta_matrix(const PairSpec& spec);

/// [4 (1 + delta_{m0})]^{-1/2}
double pair_normalization(int m);

struct PairPoint {
    double rho = 0.0;
    double phi = 0.0;
};

struct PairCorrelations {
    std::size_t n = 0;
    std::vector<double> G2, G2H, g2;  // n x n row-major; masked g2 entries are NaN
    std::vector<std::uint8_t> masked;  // per point
};

PairCorrelations pair_correlations(const PairSpec& spec, const std::vector<PairPoint>& points);

/// Closed-form g2 as a function of phi - phi' alone (no masking).
double g2_closed_form(const PairSpec& spec, double delta_phi);

/// Closed-form g2 for one pair of points; throws MaskedPoint where the pair
/// density vanishes.
double pair_g2(const PairSpec& spec, PairPoint r, PairPoint r_prime);

struct PairDensitySamples {
    std::vector<double> pnd;
    std::vector<double> helicity;
};

PairDensitySamples pair_densities(const PairSpec& spec, const std::vector<PairPoint>& points);

/// Two-photon amplitude xi_{lambda lambda'}(r, r') for all four helicity pairs.
ThetaMatrix pair_amplitude(const PairSpec& spec, PairPoint r, PairPoint r_prime);

struct ContractionResult {
    double G2 = 0.0;
    double G2H = 0.0;
};

/// Brute-force 2 sum |xi|^2 and 2 sum lambda lambda' |xi|^2.
ContractionResult contraction_oracle(const PairSpec& spec, PairPoint r, PairPoint r_prime);

/// Coherent-state baseline for a classical beam: g2 = 1 and G2H = n_H(r) n_H(r').
PairCorrelations coherent_reference(const BeamSpec& beam, double lambda0, double z,
                                    const std::vector<PairPoint>& points);

const char* to_string(PairSymmetry s);

}  // namespace vortexlab
