#pragma once

#include <string>
#include <string_view>

#include "vortexlab/grid.hpp"

namespace vortexlab {

/// Writes `bytes` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::string& path, std::string_view bytes);
std::string read_file(const std::string& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

std::string encode_vxf(const SpinorField& f);
SpinorField decode_vxf(std::string_view bytes);
void write_vxf(const SpinorField& f, const std::string& path);
SpinorField read_vxf(const std::string& path);

/// Same header as VXF, one binary64 per sample. Masked samples are NaN.
std::string encode_vxf_scalar(const ScalarField& s);
ScalarField decode_vxf_scalar(std::string_view bytes);
void write_vxf_scalar(const ScalarField& s, const std::string& path);
ScalarField read_vxf_scalar(const std::string& path);

enum class Colormap { gray, signed_map };

/// 8-bit PGM (gray) or PPM (signed) rendering; row 0 of the image is the
/// largest y. Masked samples are black. Also writes `<path>.range.txt`.
void export_heatmap(const ScalarField& s, const std::string& path, Colormap map);
std::string render_heatmap(const ScalarField& s, Colormap map, double* lo = nullptr,
                           double* hi = nullptr);

}  // namespace vortexlab
