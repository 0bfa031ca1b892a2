#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "vortexlab/beam.hpp"
#include "vortexlab/grid.hpp"

namespace vortexlab {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Closed counter-clockwise contour, parametrized by t in [0, 1).
struct LoopSpec {
    enum class Kind { circle, polygon };
    Kind kind = Kind::circle;
    Point2 center;
    double radius = 1.0;
    std::vector<Point2> vertices;
    int n_samples = 4096;

    static LoopSpec circle(double cx, double cy, double radius, int n_samples = 4096);
    static LoopSpec polygon(std::vector<Point2> vertices, int n_samples = 4096);

    void validate() const;
    Point2 point(double t) const;
    Point2 tangent(double t) const;  // dr/dt
    double length() const;
    /// Same shape scaled about the centre (circle) or vertex centroid (polygon).
    LoopSpec scaled(double factor) const;
};

/// Polygon through the four corner samples of a grid.
LoopSpec grid_boundary_loop(const TransverseGrid& g, int n_samples = 4096);

enum class FieldComponent { plus, minus, scalar_sum };

struct LocalObservables {
    double pnd = 0.0;
    double helicity = 0.0;
    double jn_x = 0.0, jn_y = 0.0;
    double jh_x = 0.0, jh_y = 0.0;
};

/// Either a closed-form beam at fixed z or a sampled slice read through
/// bilinear interpolation of each complex component.
class FieldSource {
public:
    static FieldSource analytic(const BeamSpec& spec, double lambda0, double z = 0.0);
    static FieldSource sampled(const SpinorField& f);

    Spinor at(double x, double y) const;
    cplx component_at(FieldComponent c, double x, double y) const;
    /// Densities and currents at one point. Analytic sources differentiate
    /// with fourth-order central differences; sampled sources interpolate
    /// spectrally computed grids.
    LocalObservables local(double x, double y) const;

    /// Peak photon density, used as the scale for masks and zero tests.
    double reference_density() const { return ref_density_; }
    /// True if psi+ and psi- are proportional everywhere. `helicity_fraction`
    /// receives (|c+|^2 - |c-|^2) / (|c+|^2 + |c-|^2).
    bool uniformly_polarized(double* helicity_fraction = nullptr) const;
    double lambda0() const { return lambda0_; }
    bool is_analytic() const { return beam_ != nullptr; }

private:
    FieldSource() = default;
    struct Sampled;

    std::shared_ptr<const BeamEvaluator> beam_;
    std::shared_ptr<const Sampled> grid_;
    double z_ = 0.0;
    double lambda0_ = 1.0;
    double ref_density_ = 0.0;
    bool uniform_ = false;
    double helicity_fraction_ = 0.0;
};

enum class JumpConvention { plus_first, minus_first };

struct JumpEvent {
    double t = 0.0;  // loop parameter of the zero crossing segment start
    int sign = +1;
};

struct LoopSample {
    double t = 0.0;
    double x = 0.0, y = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double increment = 0.0;  // resolved step to the next sample
    bool jump = false;
};

struct WindingResult {
    int winding = 0;
    double total = 0.0;  // sum of resolved increments
    bool converged = true;
    bool degenerate = false;  // loop lies on a zero set; neighbouring loops were used
    int n_samples = 0;
    std::vector<JumpEvent> jumps;
    std::vector<LoopSample> samples;
};

/// Phase winding with alternating +-pi resolution of zero-crossing jumps.
/// Throws NonIntegerWinding if the resolved total is not a multiple of 2 pi.
WindingResult loop_winding(const FieldSource& src, FieldComponent comp, const LoopSpec& loop,
                           JumpConvention convention = JumpConvention::plus_first);

enum class CurrentKind { photon, helicity };

struct CirculationResult {
    double kappa = 0.0;
    double masked_fraction = 0.0;
    bool from_winding = false;
};

/// Periodic trapezoid rule on v . dr/dt. Falls back to winding * lambda0 (times
/// the helicity fraction) when more than 1% of the loop is masked and the
/// field is uniformly polarized; otherwise throws MaskedLoop.
CirculationResult loop_circulation(const FieldSource& src, const LoopSpec& loop, CurrentKind which,
                                   double mask_threshold = 1e-6);

enum class BerryVariant { arg, field };

/// Literature topological charge: nearest-branch phase sum (arg) or
/// Im of the loop integral of d_t E / E (field). Throws NotConverged when the
/// field variant moves by more than 1e-3 under doubling.
double berry_tc(const FieldSource& src, FieldComponent comp, const LoopSpec& loop, BerryVariant variant);

struct VortexReport {
    double kappa_n = 0.0;
    double kappa_h = 0.0;
    int winding = 0;
    double total_phase = 0.0;
    std::vector<JumpEvent> jump_events;
    std::vector<LoopSample> samples;
    double tc_berry_arg = 0.0;
    double tc_berry_field = 0.0;
    bool converged = true;
    bool degenerate_loop = false;
    bool circulation_from_winding = false;
};

VortexReport analyze_loop(const FieldSource& src, FieldComponent comp, const LoopSpec& loop,
                          JumpConvention convention = JumpConvention::plus_first, double mask_threshold = 1e-6);

struct PlaquetteCharge {
    double x = 0.0;  // plaquette centre
    double y = 0.0;
    int charge = 0;
};

struct Census {
    TransverseGrid grid;
    std::vector<PlaquetteCharge> charges;  // nonzero plaquettes only, row-major order
    std::vector<std::uint8_t> zero_raster;  // 1 where |psi|^2 < threshold * max
    double zero_threshold = 1e-3;
    int net_charge = 0;
};

Census singularity_census(const SpinorField& f, FieldComponent comp, double zero_threshold = 1e-3);

/// Sum of plaquette charges whose centres lie within `radius` of (cx, cy).
int net_charge_within(const Census& c, double cx, double cy, double radius);

/// Component samples of a sampled slice.
std::vector<cplx> component_values(const SpinorField& f, FieldComponent comp);

}  // namespace vortexlab
