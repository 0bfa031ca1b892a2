#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "vortexlab/field_io.hpp"
#include "vortexlab/grid.hpp"

using namespace vortexlab;

namespace {

SpinorField ramp(int nx, int ny) {
    SpinorField f(TransverseGrid::centered(nx, ny, 0.5, 0.25, 3.0, 1.0));
    for (std::size_t k = 0; k < f.grid.size(); ++k) {
        f.plus[k] = {0.1 * k, -1.0 / (k + 1.0)};
        f.minus[k] = {std::sin(0.3 * k), 1e-300 * k};
    }
    return f;
}

}  // namespace

TEST(Grid, CenteredGridStraddlesAxis) {
    const auto g = TransverseGrid::centered(8, 6, 0.5, 0.25);
    EXPECT_DOUBLE_EQ(g.x(0) + g.x(7), 0.0);
    EXPECT_DOUBLE_EQ(g.y(0) + g.y(5), 0.0);
    for (int i = 0; i < g.nx; ++i) EXPECT_NE(g.x(i), 0.0);
}

TEST(Grid, ValidateRejectsBadGeometry) {
    auto g = TransverseGrid::centered(4, 4, 1.0, 1.0);
    g.dx = -1.0;
    EXPECT_THROW(g.validate(), InvalidArgument);
    g = TransverseGrid::centered(4, 4, 1.0, 1.0);
    g.lambda0 = 0.0;
    EXPECT_THROW(g.validate(), InvalidArgument);
}

TEST(Grid, InnerProductAndNormalize) {
    SpinorField f(TransverseGrid::centered(4, 4, 0.5, 0.5));
    for (std::size_t k = 0; k < f.grid.size(); ++k) f.plus[k] = 2.0;
    // 16 samples of |2|^2 times cell area 0.25
    EXPECT_NEAR(slice_norm(f), std::sqrt(16.0), 1e-14);
    EXPECT_NEAR(slice_norm(slice_normalize(f)), 1.0, 1e-14);
    const cplx ip = inner_product(f, scaled(f, cplx{0.0, 1.0}));
    EXPECT_NEAR(ip.real(), 0.0, 1e-14);
    EXPECT_NEAR(ip.imag(), 16.0, 1e-12);
}

TEST(Grid, CheckFiniteCatchesNan) {
    SpinorField f(TransverseGrid::centered(4, 4, 1.0, 1.0));
    EXPECT_NO_THROW(f.check_finite());
    f.minus[3] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    EXPECT_THROW(f.check_finite(), InvalidArgument);
}

TEST(Vxf, RoundTripIsBitExact) {
    const SpinorField f = ramp(5, 4);
    const SpinorField g = decode_vxf(encode_vxf(f));
    EXPECT_EQ(g.grid, f.grid);
    for (std::size_t k = 0; k < f.grid.size(); ++k) {
        EXPECT_EQ(g.plus[k], f.plus[k]);
        EXPECT_EQ(g.minus[k], f.minus[k]);
    }
    EXPECT_EQ(encode_vxf(g), encode_vxf(f));
}

TEST(Vxf, TruncatedPayload) {
    std::string bytes = encode_vxf(ramp(4, 4));
    bytes.resize(bytes.size() - 5);
    try {
        decode_vxf(bytes);
        FAIL() << "expected TruncatedError";
    } catch (const TruncatedError& e) {
        EXPECT_EQ(e.expected() - e.actual(), 5u);
    }
}

TEST(Vxf, TrailingBytesAndBadMagic) {
    const std::string bytes = encode_vxf(ramp(4, 4));
    EXPECT_THROW(decode_vxf(bytes + "x"), FormatError);
    std::string bad = bytes;
    bad[0] = 'W';
    try {
        decode_vxf(bad);
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.offset(), 0u);
    }
}

TEST(Vxf, ScalarMaskBecomesNan) {
    ScalarField s(TransverseGrid::centered(4, 4, 1.0, 1.0));
    s.mask.assign(16, 0);
    s.values[4] = 2.5;
    s.mask[1] = 1;
    const ScalarField t = decode_vxf_scalar(encode_vxf_scalar(s));
    EXPECT_TRUE(t.masked(1));
    EXPECT_FALSE(t.masked(4));
    EXPECT_EQ(t.values[4], 2.5);
    EXPECT_EQ(t.unmasked_count(), 15u);
}

TEST(Vxf, FileRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "vortexlab_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "f.vxf").string();
    const SpinorField f = ramp(6, 4);
    write_vxf(f, path);
    EXPECT_EQ(encode_vxf(read_vxf(path)), encode_vxf(f));
    EXPECT_THROW(read_vxf((dir / "missing.vxf").string()), IoError);
    std::filesystem::remove_all(dir);
}

TEST(Format, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0, 12345.0}) {
        const std::string s = format_double(v);
        EXPECT_EQ(std::stod(s), v) << s;
    }
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(Heatmap, GrayRenderingSpansFullRange) {
    ScalarField s(TransverseGrid::centered(4, 4, 1.0, 1.0));
    for (std::size_t k = 0; k < 16; ++k) s.values[k] = static_cast<double>(k);
    double lo = 0.0, hi = 0.0;
    const std::string img = render_heatmap(s, Colormap::gray, &lo, &hi);
    EXPECT_EQ(lo, 0.0);
    EXPECT_EQ(hi, 15.0);
    ASSERT_EQ(img.substr(0, 2), "P5");
    // row 0 of the image is the top (largest y) row of the grid
    const std::string pix = img.substr(img.size() - 16);
    EXPECT_EQ(static_cast<unsigned char>(pix[12]), 0u);
    EXPECT_EQ(static_cast<unsigned char>(pix[3]), 255u);
}

TEST(Heatmap, AllMaskedThrows) {
    ScalarField s(TransverseGrid::centered(4, 4, 1.0, 1.0));
    s.mask.assign(16, 1);
    EXPECT_THROW(render_heatmap(s, Colormap::gray), EmptyField);
}
