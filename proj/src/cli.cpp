#include "vortexlab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "vortexlab/acceptance.hpp"
#include "vortexlab/field_io.hpp"
#include "vortexlab/observables.hpp"
#include "vortexlab/pair.hpp"
#include "vortexlab/propagator.hpp"
#include "vortexlab/vortex.hpp"

namespace vortexlab::cli {

namespace {

namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

struct Options {
    std::string config;
    std::string out = ".";
    std::string grid;
    std::string in;
    bool quiet = false;
    std::optional<double> radius;
};

struct Context {
    std::string command;
    Options opt;
    std::optional<Scenario> scenario;
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
    Warnings warnings;
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string fmt(double v) { return format_double(v); }

const char* to_string(FieldComponent c) {
    switch (c) {
        case FieldComponent::plus: return "plus";
        case FieldComponent::minus: return "minus";
        case FieldComponent::scalar_sum: return "scalar_sum";
    }
    return "plus";
}

/// Output directory for the command; created on demand.
std::string out_dir(const Context& ctx) {
    if (ends_with(ctx.opt.out, ".vxf"))
        throw InvalidArgument("--out names a .vxf file, which only synth and propagate accept");
    std::error_code ec;
    fs::create_directories(ctx.opt.out, ec);
    if (ec) throw IoError("cannot create output directory '" + ctx.opt.out + "': " + ec.message());
    return ctx.opt.out;
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

const Scenario& need_scenario(const Context& ctx) {
    if (!ctx.scenario) throw ConfigError(0, ctx.command + " needs --config");
    return *ctx.scenario;
}

TransverseGrid scenario_grid(const Context& ctx) {
    GridParams g = ctx.scenario ? ctx.scenario->grid : GridParams{};
    if (!ctx.opt.grid.empty()) g = parse_grid_override(ctx.opt.grid, g);
    TransverseGrid grid = g.grid();
    grid.validate();
    return grid;
}

SpinorField load_or_synthesize(Context& ctx) {
    if (!ctx.opt.in.empty()) return read_vxf(ctx.opt.in);
    const Scenario& sc = need_scenario(ctx);
    if (sc.beam.components.empty()) throw ConfigError(0, "config has no [component] section");
    return synthesize(sc.beam, scenario_grid(ctx), &ctx.warnings);
}

void write_text(const std::string& path, const std::string& text) { write_file_atomic(path, text); }

int cmd_synth(Context& ctx) {
    const SpinorField f = load_or_synthesize(ctx);
    const std::string path = ends_with(ctx.opt.out, ".vxf") ? ctx.opt.out : join(out_dir(ctx), "field.vxf");
    write_vxf(f, path);
    *ctx.out << "norm=" << fmt(slice_norm(f)) << "\n";
    return exit_ok;
}

int cmd_propagate(Context& ctx) {
    const Scenario& sc = need_scenario(ctx);
    if (!sc.propagation) throw ConfigError(0, "config has no [propagation] section");
    const SpinorField f = load_or_synthesize(ctx);
    PropagationResult r = propagate(f, *sc.propagation);
    for (auto& w : r.warnings) ctx.warnings.push_back(w);
    std::ostringstream rep;
    rep << "z=" << fmt(r.field.grid.z) << "\n";
    rep << "norm_in=" << fmt(slice_norm(f)) << "\n";
    rep << "norm_out=" << fmt(slice_norm(r.field)) << "\n";
    rep << "max_border_fraction=" << fmt(r.max_border_fraction) << "\n";
    if (ends_with(ctx.opt.out, ".vxf")) {
        write_vxf(r.field, ctx.opt.out);
    } else {
        const std::string dir = out_dir(ctx);
        write_vxf(r.field, join(dir, "field.vxf"));
        write_text(join(dir, "propagation.txt"), rep.str());
    }
    *ctx.out << rep.str();
    return exit_ok;
}

ScalarField component_scalar(const VectorField2D& v, bool y) {
    ScalarField s(v.grid);
    s.values = y ? v.vy : v.vx;
    s.mask = v.mask;
    return s;
}

int cmd_observables(Context& ctx) {
    const SpinorField f = load_or_synthesize(ctx);
    const ObservableParams op = ctx.scenario ? ctx.scenario->observables : ObservableParams{};
    const ObservableSet o = compute_observables(f, op.mask_threshold, op.gradient);
    const std::string dir = out_dir(ctx);
    write_vxf_scalar(o.pnd, join(dir, "pnd.vxf"));
    write_vxf_scalar(o.helicity, join(dir, "helicity.vxf"));
    write_vxf_scalar(component_scalar(o.j_n, false), join(dir, "jn_x.vxf"));
    write_vxf_scalar(component_scalar(o.j_n, true), join(dir, "jn_y.vxf"));
    write_vxf_scalar(component_scalar(o.j_h, false), join(dir, "jh_x.vxf"));
    write_vxf_scalar(component_scalar(o.j_h, true), join(dir, "jh_y.vxf"));
    write_vxf_scalar(component_scalar(o.v_n, false), join(dir, "vn_x.vxf"));
    write_vxf_scalar(component_scalar(o.v_n, true), join(dir, "vn_y.vxf"));
    export_heatmap(o.pnd, join(dir, "pnd.pgm"), Colormap::gray);
    export_heatmap(o.helicity, join(dir, "helicity.ppm"), Colormap::signed_map);

    double pnd_max = 0.0, hel_max = 0.0, jn_max = 0.0, jh_max = 0.0;
    for (std::size_t k = 0; k < f.grid.size(); ++k) {
        pnd_max = std::max(pnd_max, o.pnd.values[k]);
        hel_max = std::max(hel_max, std::abs(o.helicity.values[k]));
        jn_max = std::max(jn_max, std::hypot(o.j_n.vx[k], o.j_n.vy[k]));
        jh_max = std::max(jh_max, std::hypot(o.j_h.vx[k], o.j_h.vy[k]));
    }
    std::ostringstream rep;
    rep << "z=" << fmt(f.grid.z) << "\n";
    rep << "norm=" << fmt(slice_norm(f)) << "\n";
    rep << "max_pnd=" << fmt(pnd_max) << "\n";
    rep << "max_abs_helicity=" << fmt(hel_max) << "\n";
    rep << "max_jn=" << fmt(jn_max) << "\n";
    rep << "max_jh=" << fmt(jh_max) << "\n";
    rep << "masked_samples=" << std::count(o.v_n.mask.begin(), o.v_n.mask.end(), 1) << "\n";
    write_text(join(dir, "observables.txt"), rep.str());
    *ctx.out << rep.str();
    return exit_ok;
}

int cmd_circulation(Context& ctx) {
    LoopParams lp = ctx.scenario ? ctx.scenario->loop : LoopParams{};
    if (ctx.opt.radius) lp.radius = *ctx.opt.radius;
    std::optional<FieldSource> src;
    if (!ctx.opt.in.empty()) {
        src = FieldSource::sampled(read_vxf(ctx.opt.in));
    } else {
        const Scenario& sc = need_scenario(ctx);
        if (sc.beam.components.empty()) throw ConfigError(0, "config has no [component] section");
        validate_spec(sc.beam, sc.grid.lambda0, &ctx.warnings);
        src = FieldSource::analytic(sc.beam, sc.grid.lambda0, lp.z);
    }
    const LoopSpec loop = LoopSpec::circle(lp.cx, lp.cy, lp.radius, lp.n_samples);
    const VortexReport r = analyze_loop(*src, lp.component, loop, lp.convention, lp.mask_threshold);

    std::ostringstream rep;
    rep << "component=" << to_string(lp.component) << "\n";
    rep << "radius=" << fmt(lp.radius) << "\n";
    rep << "winding=" << r.winding << "\n";
    rep << "total_phase=" << fmt(r.total_phase) << "\n";
    rep << "jumps=" << r.jump_events.size() << "\n";
    rep << "kappa_n=" << fmt(r.kappa_n) << "\n";
    rep << "kappa_h=" << fmt(r.kappa_h) << "\n";
    rep << "tc_berry_arg=" << fmt(r.tc_berry_arg) << "\n";
    rep << "tc_berry_field=" << (std::isnan(r.tc_berry_field) ? std::string("undefined") : fmt(r.tc_berry_field))
        << "\n";
    rep << "converged=" << (r.converged ? "true" : "false") << "\n";
    rep << "degenerate_loop=" << (r.degenerate_loop ? "true" : "false") << "\n";
    rep << "circulation_from_winding=" << (r.circulation_from_winding ? "true" : "false") << "\n";
    *ctx.out << rep.str();

    if (ctx.opt.out != ".") {
        const std::string dir = out_dir(ctx);
        write_text(join(dir, "circulation.txt"), rep.str());
        std::ostringstream csv;
        csv << "t,x,y,amplitude,phase,increment,jump\n";
        for (const auto& s : r.samples)
            csv << fmt(s.t) << ',' << fmt(s.x) << ',' << fmt(s.y) << ',' << fmt(s.amplitude) << ',' << fmt(s.phase)
                << ',' << fmt(s.increment) << ',' << (s.jump ? 1 : 0) << '\n';
        write_text(join(dir, "loop.csv"), csv.str());
    }
    return exit_ok;
}

int cmd_census(Context& ctx) {
    const SpinorField f = load_or_synthesize(ctx);
    const CensusParams cp = ctx.scenario ? ctx.scenario->census : CensusParams{};
    const Census c = singularity_census(f, cp.component, cp.zero_threshold);
    const std::string dir = out_dir(ctx);

    std::ostringstream csv;
    csv << "x,y,charge\n";
    int pos = 0, neg = 0;
    for (const auto& q : c.charges) {
        csv << fmt(q.x) << ',' << fmt(q.y) << ',' << q.charge << '\n';
        (q.charge > 0 ? pos : neg) += std::abs(q.charge);
    }
    write_text(join(dir, "census.csv"), csv.str());

    ScalarField raster(f.grid);
    for (std::size_t k = 0; k < raster.values.size(); ++k) raster.values[k] = c.zero_raster[k] ? 1.0 : 0.0;
    export_heatmap(raster, join(dir, "zeros.pgm"), Colormap::gray);

    ScalarField phase(f.grid);
    const auto vals = component_values(f, cp.component);
    for (std::size_t k = 0; k < vals.size(); ++k) phase.values[k] = std::arg(vals[k]) / pi;
    export_heatmap(phase, join(dir, "phase.ppm"), Colormap::signed_map);

    std::string boundary = "undefined";
    try {
        const auto w = loop_winding(FieldSource::sampled(f), cp.component, grid_boundary_loop(f.grid));
        boundary = std::to_string(w.winding);
    } catch (const Error& e) {
        ctx.warnings.push_back({"BoundaryWinding", e.what()});
    }
    std::ostringstream rep;
    rep << "component=" << to_string(cp.component) << "\n";
    rep << "zero_threshold=" << fmt(cp.zero_threshold) << "\n";
    rep << "net_charge=" << c.net_charge << "\n";
    rep << "positive=" << pos << "\n";
    rep << "negative=" << neg << "\n";
    rep << "boundary_winding=" << boundary << "\n";
    rep << "zero_samples=" << std::count(c.zero_raster.begin(), c.zero_raster.end(), 1) << "\n";
    write_text(join(dir, "census.txt"), rep.str());
    *ctx.out << rep.str();
    return exit_ok;
}

std::string pair_tag(const PairSpec& p, std::size_t index) {
    return "pair" + std::to_string(index) + "_" + to_string(p.symmetry) + "_m" + std::to_string(p.m);
}

void write_ring(const std::string& path, const PairCorrelations& c, const std::vector<double>& dphi) {
    std::ostringstream csv;
    csv << "delta_phi,g2,G2,G2H\n";
    for (std::size_t k = 0; k < dphi.size(); ++k) {
        const std::size_t idx = (k + 1);  // row 0 is the reference point
        const double g2 = c.g2[idx];
        csv << fmt(dphi[k]) << ',' << (std::isnan(g2) ? std::string("nan") : fmt(g2)) << ',' << fmt(c.G2[idx]) << ','
            << fmt(c.G2H[idx]) << '\n';
    }
    write_file_atomic(path, csv.str());
}

void write_matrix(const std::string& path, const PairCorrelations& c, const std::vector<PairPoint>& pts) {
    std::ostringstream csv;
    csv << "i,j,rho_i,phi_i,rho_j,phi_j,g2,G2,G2H\n";
    for (std::size_t a = 0; a < c.n; ++a) {
        for (std::size_t b = 0; b < c.n; ++b) {
            const std::size_t k = a * c.n + b;
            csv << a << ',' << b << ',' << fmt(pts[a].rho) << ',' << fmt(pts[a].phi) << ',' << fmt(pts[b].rho) << ','
                << fmt(pts[b].phi) << ',' << (std::isnan(c.g2[k]) ? std::string("nan") : fmt(c.g2[k])) << ','
                << fmt(c.G2[k]) << ',' << fmt(c.G2H[k]) << '\n';
        }
    }
    write_file_atomic(path, csv.str());
}

ScalarField g2_disk(const PairSpec& p, const CoherenceParams& cp) {
    const int n = cp.disk_pixels;
    const double h = 2.0 * cp.disk_radius / (n - 1);
    TransverseGrid g = TransverseGrid::centered(n, n, h, h);
    g.x0 = -cp.disk_radius;
    g.y0 = -cp.disk_radius;
    // |eta_tilde|^2 tabulated once on a radial grid and interpolated per pixel.
    const int nr = 513;
    std::vector<double> radii(nr);
    for (int k = 0; k < nr; ++k) radii[k] = cp.disk_radius * std::numbers::sqrt2 * k / (nr - 1);
    const auto eta = hankel_profile(p.eta, radii, p.z, p.m);
    std::vector<double> e2(nr);
    double peak = 0.0;
    for (int k = 0; k < nr; ++k) peak = std::max(peak, e2[k] = std::norm(eta[k]));
    ScalarField s(g);
    s.mask.assign(g.size(), 0);
    const double hr = radii[1] - radii[0];
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const std::size_t k = g.index(i, j);
            const double x = g.x(i), y = g.y(j);
            const double rho = std::hypot(x, y);
            const double t = rho / hr;
            const auto lo = std::min(static_cast<std::size_t>(t), static_cast<std::size_t>(nr - 2));
            const double f = t - static_cast<double>(lo);
            const double dens = (1.0 - f) * e2[lo] + f * e2[lo + 1];
            if (rho > cp.disk_radius || !(dens > 1e-14 * peak)) {
                s.mask[k] = 1;
                continue;
            }
            s.values[k] = g2_closed_form(p, std::atan2(y, x) - cp.reference_phi);
        }
    }
    return s;
}

int cmd_coherence(Context& ctx) {
    const Scenario& sc = need_scenario(ctx);
    const CoherenceParams& cp = sc.coherence;
    if (sc.pairs.empty() && !cp.coherent) throw ConfigError(0, "config has no [pair] section");
    const std::string dir = out_dir(ctx);

    std::vector<double> dphi(static_cast<std::size_t>(cp.ring_samples));
    std::vector<PairPoint> ring{{cp.ring_radius, cp.reference_phi}};
    for (int k = 0; k < cp.ring_samples; ++k) {
        dphi[static_cast<std::size_t>(k)] = 2.0 * pi * k / cp.ring_samples;
        ring.push_back({cp.ring_radius, cp.reference_phi + dphi[static_cast<std::size_t>(k)]});
    }
    std::vector<PairPoint> matrix_pts;
    for (int k = 0; k < cp.matrix_points; ++k)
        matrix_pts.push_back({cp.ring_radius, cp.reference_phi + 2.0 * pi * k / cp.matrix_points});

    std::ostringstream rep;
    for (std::size_t i = 0; i < sc.pairs.size(); ++i) {
        const PairSpec& p = sc.pairs[i];
        const std::string tag = pair_tag(p, i);
        const PairCorrelations c = pair_correlations(p, ring);
        write_ring(join(dir, tag + "_ring.csv"), c, dphi);
        write_matrix(join(dir, tag + "_matrix.csv"), pair_correlations(p, matrix_pts), matrix_pts);
        export_heatmap(g2_disk(p, cp), join(dir, tag + "_disk.pgm"), Colormap::gray);
        rep << tag << ".g2_at_zero=" << (std::isnan(c.g2[1]) ? std::string("nan") : fmt(c.g2[1])) << "\n";
    }
    if (cp.coherent) {
        if (sc.beam.components.empty()) throw ConfigError(0, "coherent reference needs a [component] section");
        const PairCorrelations c = coherent_reference(sc.beam, sc.grid.lambda0, sc.grid.z, ring);
        write_ring(join(dir, "coherent_ring.csv"), c, dphi);
        rep << "coherent.g2_at_zero=" << fmt(c.g2[1]) << "\n";
    }
    write_text(join(dir, "coherence.txt"), rep.str());
    *ctx.out << rep.str();
    return exit_ok;
}

int cmd_oam(Context& ctx) {
    const Scenario& sc = need_scenario(ctx);
    if (sc.beam.components.empty()) throw ConfigError(0, "config has no [component] section");
    const TransverseGrid g = scenario_grid(ctx);
    double dz = sc.oam.dz;
    if (dz == 0.0) dz = rayleigh_length(sc.beam.components.front().w0, g.lambda0) / 200.0;
    const SpinorField fm = synthesize(sc.beam, g.at_z(g.z - dz), &ctx.warnings);
    const SpinorField f0 = synthesize(sc.beam, g, nullptr);
    const SpinorField fp = synthesize(sc.beam, g.at_z(g.z + dz), nullptr);
    const OamExpectation l = oam_expectation(fm, f0, fp, dz);
    std::ostringstream rep;
    rep << "z=" << fmt(g.z) << "\n";
    rep << "dz=" << fmt(dz) << "\n";
    rep << "lx=" << fmt(l.lx) << "\n";
    rep << "ly=" << fmt(l.ly) << "\n";
    rep << "lz=" << fmt(l.lz) << "\n";
    if (ctx.opt.out != ".") write_text(join(out_dir(ctx), "oam.txt"), rep.str());
    *ctx.out << rep.str();
    return exit_ok;
}

int cmd_selftest(Context& ctx) {
    const int failed = run_acceptance(*ctx.out, false);
    return failed == 0 ? exit_ok : exit_numerical;
}

bool is_input_error(const Error& e) {
    const std::string& c = e.code();
    return c == "ConfigError" || c == "IoError" || c == "FormatError" || c == "TruncatedError" ||
           c == "InvalidArgument" || c == "GridMismatch";
}

}  // namespace

std::vector<std::string> applicable_commands(const Scenario& sc) {
    std::vector<std::string> cmds;
    if (!sc.beam.components.empty()) {
        cmds = {"synth", "observables", "census"};
        if (sc.propagation) cmds.push_back("propagate");
        if (sc.has_loop) cmds.push_back("circulation");
    }
    if (!sc.pairs.empty()) cmds.push_back("coherence");
    return cmds;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Paraxial vortex beams: synthesis, propagation, observables, vortex analysis, pair coherence",
                 "vortexlab"};
    app.require_subcommand(1, 1);
    Options opt;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"synth", "Sample a beam on the grid and write field.vxf"},
        {"propagate", "Propagate a beam with the spectral paraxial step"},
        {"observables", "Densities, currents and flow velocities of one slice"},
        {"circulation", "Winding, circulation and literature charges on a circular loop"},
        {"census", "Plaquette phase-singularity census and zero-curve raster"},
        {"coherence", "g2, G2 and G2H of twisted photon pairs"},
        {"oam", "Orbital angular momentum expectation per photon"},
        {"selftest", "Run the acceptance suite"},
    };
    std::map<CLI::App*, std::string> names;
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        names[sub] = name;
        sub->add_flag("--quiet", opt.quiet, "Suppress warnings");
        if (name == "selftest") continue;
        sub->add_option("--config,--beam", opt.config, "Scenario config file");
        sub->add_option("--out", opt.out, "Output directory (synth and propagate also accept a .vxf path)");
        sub->add_option("--grid", opt.grid, "Grid override nx,ny,dx,dy");
        if (name == "propagate" || name == "observables" || name == "census" || name == "circulation")
            sub->add_option("--in", opt.in, "Read the field from a .vxf file instead of synthesizing it");
        if (name == "circulation") sub->add_option("--radius", opt.radius, "Loop radius override");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return exit_ok;
        err << "error_code=UsageError\n";
        return exit_usage;
    }

    Context ctx;
    ctx.opt = opt;
    ctx.out = &out;
    ctx.err = &err;
    ctx.command = names.at(app.get_subcommands().front());
    try {
        if (!opt.config.empty()) {
            if (!fs::exists(opt.config)) throw IoError("config file '" + opt.config + "' does not exist");
            ctx.scenario = parse_config(opt.config);
        }
        if (!opt.in.empty() && !fs::exists(opt.in)) throw IoError("input file '" + opt.in + "' does not exist");
        if (ctx.command != "synth" && ctx.command != "propagate" && ends_with(opt.out, ".vxf"))
            throw InvalidArgument("--out names a .vxf file, which only synth and propagate accept");

        int rc = exit_ok;
        if (ctx.command == "synth") rc = cmd_synth(ctx);
        else if (ctx.command == "propagate") rc = cmd_propagate(ctx);
        else if (ctx.command == "observables") rc = cmd_observables(ctx);
        else if (ctx.command == "circulation") rc = cmd_circulation(ctx);
        else if (ctx.command == "census") rc = cmd_census(ctx);
        else if (ctx.command == "coherence") rc = cmd_coherence(ctx);
        else if (ctx.command == "oam") rc = cmd_oam(ctx);
        else if (ctx.command == "selftest") rc = cmd_selftest(ctx);
        if (!opt.quiet)
            for (const auto& w : ctx.warnings) err << "warning: " << w.code << ": " << w.message << "\n";
        return rc;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        err << "error_code=" << e.code() << "\n";
        return is_input_error(e) ? exit_config : exit_numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        err << "error_code=InternalError\n";
        return exit_numerical;
    }
}

}  // namespace vortexlab::cli
