#include <gtest/gtest.h>

#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vortexlab/cli.hpp"
#include "vortexlab/config.hpp"
#include "vortexlab/field_io.hpp"

using namespace vortexlab;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code;
    std::string out, err;
};

Invocation run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(VORTEXLAB_CONFIG_DIR) + "/" + name; }

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("vortexlab_cli_" + std::to_string(counter_++) + "_" +
                                             std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string str() const { return path_.string(); }
    fs::path operator/(const std::string& s) const { return path_ / s; }

private:
    static inline int counter_ = 0;
    fs::path path_;
};

std::string write_text(const TempDir& d, const std::string& name, const std::string& text) {
    const auto p = d / name;
    std::ofstream(p) << text;
    return p.string();
}

}  // namespace

TEST(Config, ParsesSectionsAndAngles) {
    const Scenario s = parse_config_text(
        "[grid]\nnx = 64\nny = 32\ndx = 0.5\n\n[component]\nprofile = bg\np = 1\nm = -1\ntheta_p = 0.05pi\n"
        "polarization = bloch_up\ntheta_B = pi/4\n\n[component]\nm = 2  # trailing comment\n\n[loop]\nradius = 7\n"
        "[pair]\nm = 2\nsymmetry = antisymmetric\n");
    EXPECT_EQ(s.grid.nx, 64);
    EXPECT_EQ(s.grid.ny, 32);
    ASSERT_EQ(s.beam.components.size(), 2u);
    EXPECT_EQ(s.beam.components[0].profile, ProfileKind::bg);
    EXPECT_NEAR(s.beam.components[0].theta_p, 0.05 * std::numbers::pi, 1e-15);
    EXPECT_NEAR(s.beam.components[0].pol.theta_B, std::numbers::pi / 4.0, 1e-15);
    EXPECT_EQ(s.beam.components[1].m, 2);
    EXPECT_TRUE(s.has_loop);
    EXPECT_DOUBLE_EQ(s.loop.radius, 7.0);
    ASSERT_EQ(s.pairs.size(), 1u);
    EXPECT_EQ(s.pairs[0].symmetry, PairSymmetry::antisymmetric);
}

TEST(Config, ErrorsCarryLineNumbers) {
    const std::pair<const char*, int> bad[] = {
        {"[grid]\nnx = 64\nbogus = 1\n[component]\n", 3},
        {"[component]\nw0 = -3\n", 2},
        {"[component]\nm = 1\nm = 2\n", 3},
        {"[grid]\n[grid]\n[component]\n", 2},
        {"[component]\nm = one\n", 2},
        {"[nope]\n", 1},
    };
    for (auto [text, line] : bad) {
        try {
            parse_config_text(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.line(), line) << text;
        }
    }
}

TEST(Config, AnglesAndGridOverride) {
    const double pi = std::numbers::pi;
    EXPECT_DOUBLE_EQ(parse_angle("0.25pi"), 0.25 * pi);
    EXPECT_DOUBLE_EQ(parse_angle("pi/4"), pi / 4.0);
    EXPECT_DOUBLE_EQ(parse_angle("-pi"), -pi);
    EXPECT_DOUBLE_EQ(parse_angle("2*pi/3"), 2.0 * pi / 3.0);
    EXPECT_DOUBLE_EQ(parse_angle("1.5"), 1.5);
    EXPECT_THROW(parse_angle("pie"), InvalidArgument);

    const GridParams g = parse_grid_override("32,16,0.5,0.25", GridParams{});
    EXPECT_EQ(g.nx, 32);
    EXPECT_EQ(g.ny, 16);
    EXPECT_DOUBLE_EQ(g.dy, 0.25);
    EXPECT_THROW(parse_grid_override("32,16,0.5", GridParams{}), InvalidArgument);
}

TEST(Cli, UsageErrors) {
    Invocation r = run({});
    EXPECT_EQ(r.code, cli::exit_usage);
    EXPECT_NE(r.err.find("error_code=UsageError"), std::string::npos);
    EXPECT_EQ(run({"frobnicate"}).code, cli::exit_usage);
    EXPECT_EQ(run({"synth", "--nonsense"}).code, cli::exit_usage);
}

TEST(Cli, InputErrorsExitWithTwo) {
    TempDir d;
    Invocation r = run({"synth", "--config", (d / "missing.ini").string(), "--out", d.str()});
    EXPECT_EQ(r.code, cli::exit_config);
    EXPECT_NE(r.err.find("error_code=IoError"), std::string::npos);

    const std::string bad = write_text(d, "bad.ini", "[component]\nprofile = airy\n");
    r = run({"synth", "--config", bad, "--out", d.str()});
    EXPECT_EQ(r.code, cli::exit_config);
    EXPECT_NE(r.err.find("error_code=ConfigError"), std::string::npos);

    const std::string junk = write_text(d, "junk.vxf", "not a field");
    r = run({"observables", "--config", config("fig4.ini"), "--in", junk, "--out", d.str()});
    EXPECT_EQ(r.code, cli::exit_config);
    EXPECT_NE(r.err.find("error_code=FormatError"), std::string::npos);
}

TEST(Cli, NumericalFailureExitsWithThree) {
    TempDir d;
    const std::string cfg = write_text(d, "masked.ini",
                                       "[grid]\nnx = 64\nny = 64\ndx = 0.5\ndy = 0.5\n"
                                       "[component]\nm = 1\n[component]\nm = 0\nw0 = 5\npolarization = circular_minus\n"
                                       "[loop]\nradius = 90\nn_samples = 256\n");
    const Invocation r = run({"circulation", "--config", cfg});
    EXPECT_EQ(r.code, cli::exit_numerical);
    EXPECT_NE(r.err.find("error_code=MaskedLoop"), std::string::npos);
}

TEST(Cli, SynthWritesNormalizedField) {
    TempDir d;
    const Invocation r = run({"synth", "--config", config("fig4.ini"), "--out", d.str(), "--grid", "128,128,0.6,0.6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const SpinorField f = read_vxf((d / "field.vxf").string());
    EXPECT_EQ(f.grid.nx, 128);
    EXPECT_NEAR(slice_norm(f), 1.0, 1e-6);
    EXPECT_NE(r.out.find("norm="), std::string::npos);
}

TEST(Cli, CirculationReportsWinding) {
    const Invocation r = run({"circulation", "--config", config("fig3.ini")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("winding=1\n"), std::string::npos) << r.out;
    const Invocation mixed = run({"circulation", "--config", config("fig5.ini")});
    ASSERT_EQ(mixed.code, 0) << mixed.err;
    EXPECT_NE(mixed.out.find("winding=3\n"), std::string::npos) << mixed.out;
    EXPECT_NE(mixed.out.find("jumps=3\n"), std::string::npos);
}

TEST(Cli, CensusAndPropagateRoundTrip) {
    TempDir d;
    ASSERT_EQ(run({"synth", "--config", config("fig3.ini"), "--out", d.str()}).code, 0);
    const std::string field = (d / "field.vxf").string();
    TempDir c;
    const Invocation r = run({"census", "--config", config("fig3.ini"), "--in", field, "--out", c.str()});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string rep = read_file((c / "census.txt").string());
    EXPECT_NE(rep.find("net_charge=1\n"), std::string::npos) << rep;
    EXPECT_NE(rep.find("boundary_winding=1\n"), std::string::npos) << rep;
    EXPECT_TRUE(fs::exists(c / "census.csv"));
    EXPECT_TRUE(fs::exists(c / "zeros.pgm"));
}

TEST(Cli, CoherenceRingFiles) {
    TempDir d;
    ASSERT_EQ(run({"coherence", "--config", config("fig6.ini"), "--out", d.str()}).code, 0);
    int rings = 0;
    for (const auto& e : fs::directory_iterator(d / "")) rings += e.path().string().ends_with("_ring.csv");
    EXPECT_EQ(rings, 6);
    const std::string csv = read_file((d / "pair1_antisymmetric_m1_ring.csv").string());
    std::istringstream in(csv);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header.rfind("delta_phi,g2", 0), 0u);
    EXPECT_EQ(first.rfind("0,0,", 0), 0u) << first;
}

TEST(Cli, OutputIsReproducible) {
    TempDir a, b;
    for (const std::string cmd : {"synth", "observables", "census"}) {
        ASSERT_EQ(run({cmd, "--config", config("fig5-helicity.ini"), "--out", a.str(), "--grid", "96,96,0.8,0.8"}).code, 0);
        ASSERT_EQ(run({cmd, "--config", config("fig5-helicity.ini"), "--out", b.str(), "--grid", "96,96,0.8,0.8"}).code, 0);
    }
    int files = 0;
    for (const auto& e : fs::directory_iterator(a / "")) {
        const auto other = b / e.path().filename().string();
        ASSERT_TRUE(fs::exists(other)) << other;
        EXPECT_EQ(read_file(e.path().string()), read_file(other.string())) << e.path();
        ++files;
    }
    EXPECT_GT(files, 8);
}

TEST(Cli, BinaryExitCodes) {
    const std::string bin = VORTEXLAB_BIN;
    auto status = [](const std::string& cmd) {
        const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(s);
    };
    EXPECT_EQ(status(bin + " --help"), 0);
    EXPECT_EQ(status(bin + " bogus"), 1);
    EXPECT_EQ(status(bin + " synth --config /nonexistent/x.ini"), 2);
}
