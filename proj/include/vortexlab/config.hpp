#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vortexlab/beam.hpp"
#include "vortexlab/observables.hpp"
#include "vortexlab/pair.hpp"
#include "vortexlab/propagator.hpp"
#include "vortexlab/vortex.hpp"

namespace vortexlab {

struct GridParams {
    int nx = 256;
    int ny = 256;
    double dx = 0.3125;
    double dy = 0.3125;
    double lambda0 = 1.0;
    double z = 0.0;

    TransverseGrid grid() const { return TransverseGrid::centered(nx, ny, dx, dy, z, lambda0); }
};

struct LoopParams {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 10.0;
    int n_samples = 4096;
    double z = 0.0;
    FieldComponent component = FieldComponent::plus;
    JumpConvention convention = JumpConvention::plus_first;
    double mask_threshold = 1e-6;
};

struct ObservableParams {
    double mask_threshold = 1e-6;
    GradientMethod gradient = GradientMethod::spectral;
};

struct CensusParams {
    FieldComponent component = FieldComponent::plus;
    double zero_threshold = 1e-3;
};

struct CoherenceParams {
    double ring_radius = 5.0;
    int ring_samples = 360;
    double reference_phi = 0.0;
    int matrix_points = 16;
    double disk_radius = 30.0;
    int disk_pixels = 201;
    bool coherent = false;
};

struct OamParams {
    double dz = 0.0;  // 0 selects z_R / 200 of the first component
};

/// Parsed config file. Sections that were absent keep their defaults and
/// report false in the matching `has_*` flag.
struct Scenario {
    std::string source;  // path the config came from
    GridParams grid;
    BeamSpec beam;
    std::optional<PropagationPlan> propagation;
    LoopParams loop;
    ObservableParams observables;
    CensusParams census;
    std::vector<PairSpec> pairs;
    CoherenceParams coherence;
    OamParams oam;
    bool has_loop = false;
};

/// INI grammar: `[section]` headers, `key = value` lines, `#` comments.
/// Angles accept a `pi` factor (`0.25pi`, `pi/4`). Throws ConfigError with
/// the offending line number.
Scenario parse_config_text(std::string_view text, const std::string& source = "<string>");
Scenario parse_config(const std::string& path);

/// Parses `nx,ny,dx,dy`.
GridParams parse_grid_override(const std::string& text, GridParams base);

/// Reads a number with an optional pi factor; throws InvalidArgument.
double parse_angle(std::string_view text);

}  // namespace vortexlab
