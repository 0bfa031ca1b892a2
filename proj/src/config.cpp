#include "vortexlab/config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "vortexlab/field_io.hpp"

namespace vortexlab {

namespace {

struct Entry {
    std::string key;
    std::string value;
    int line = 0;
};

struct Section {
    std::string name;
    int line = 0;
    std::vector<Entry> entries;
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"grid", {"nx", "ny", "dx", "dy", "lambda0", "z"}},
        {"component", {"amplitude", "phase", "polarization", "theta_B", "phi_B", "profile", "p", "m", "w0", "theta_p"}},
        {"propagation", {"dz", "n_steps", "guard_band"}},
        {"loop", {"cx", "cy", "radius", "n_samples", "z", "component", "convention", "mask_threshold"}},
        {"observables", {"mask_threshold", "gradient"}},
        {"census", {"component", "zero_threshold"}},
        {"pair", {"m", "symmetry", "theta_B", "phi_B", "phi0", "z", "kz0", "sigma_z", "rho_k0", "sigma_rho"}},
        {"coherence",
         {"ring_radius", "ring_samples", "reference_phi", "matrix_points", "disk_radius", "disk_pixels", "coherent"}},
        {"oam", {"dz"}},
    };
    return keys;
}

bool repeatable(const std::string& name) { return name == "component" || name == "pair"; }

std::vector<Section> tokenize(std::string_view text) {
    std::vector<Section> sections;
    std::set<std::string> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
            std::string name(trim(line.substr(1, line.size() - 2)));
            if (!known_keys().count(name)) throw ConfigError(line_no, "unknown section [" + name + "]");
            if (!repeatable(name) && !seen.insert(name).second)
                throw ConfigError(line_no, "duplicate section [" + name + "]");
            sections.push_back({name, line_no, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(line_no, "expected key = value");
        if (sections.empty()) throw ConfigError(line_no, "key outside of any section");
        Section& sec = sections.back();
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (!known_keys().at(sec.name).count(key))
            throw ConfigError(line_no, "unknown key '" + key + "' in [" + sec.name + "]");
        for (const auto& e : sec.entries)
            if (e.key == key) throw ConfigError(line_no, "duplicate key '" + key + "' in [" + sec.name + "]");
        if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");
        sec.entries.push_back({std::move(key), std::move(value), line_no});
    }
    return sections;
}

double as_double(const Entry& e) {
    double v = 0.0;
    if (!parse_number(e.value, v)) throw ConfigError(e.line, "'" + e.key + "' expects a number, got '" + e.value + "'");
    return v;
}

double as_angle(const Entry& e) {
    try {
        return parse_angle(e.value);
    } catch (const InvalidArgument&) {
        throw ConfigError(e.line, "'" + e.key + "' expects an angle, got '" + e.value + "'");
    }
}

int as_int(const Entry& e) {
    int v = 0;
    const auto s = trim(e.value);
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError(e.line, "'" + e.key + "' expects an integer, got '" + e.value + "'");
    return v;
}

bool as_bool(const Entry& e) {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    throw ConfigError(e.line, "'" + e.key + "' expects true or false, got '" + e.value + "'");
}

double positive(const Entry& e) {
    const double v = as_double(e);
    if (!(v > 0.0)) throw ConfigError(e.line, "'" + e.key + "' must be positive");
    return v;
}

double unit_open(const Entry& e) {
    const double v = as_double(e);
    if (!(v > 0.0 && v < 1.0)) throw ConfigError(e.line, "'" + e.key + "' must lie in (0, 1)");
    return v;
}

int at_least(const Entry& e, int lo) {
    const int v = as_int(e);
    if (v < lo) throw ConfigError(e.line, "'" + e.key + "' must be at least " + std::to_string(lo));
    return v;
}

FieldComponent as_component(const Entry& e) {
    if (e.value == "plus") return FieldComponent::plus;
    if (e.value == "minus") return FieldComponent::minus;
    if (e.value == "scalar_sum") return FieldComponent::scalar_sum;
    throw ConfigError(e.line, "component must be plus, minus or scalar_sum");
}

void read_grid(const Section& s, GridParams& g) {
    for (const auto& e : s.entries) {
        if (e.key == "nx") g.nx = at_least(e, 4);
        else if (e.key == "ny") g.ny = at_least(e, 4);
        else if (e.key == "dx") g.dx = positive(e);
        else if (e.key == "dy") g.dy = positive(e);
        else if (e.key == "lambda0") g.lambda0 = positive(e);
        else if (e.key == "z") g.z = as_double(e);
    }
}

BeamComponent read_component(const Section& s, double lambda0) {
    BeamComponent c;
    double amp = 1.0, phase = 0.0;
    const Entry* w0_entry = nullptr;
    for (const auto& e : s.entries) {
        if (e.key == "amplitude") {
            amp = as_double(e);
            if (amp < 0.0) throw ConfigError(e.line, "amplitude must be non-negative (use phase for sign)");
        } else if (e.key == "phase") {
            phase = as_angle(e);
        } else if (e.key == "polarization") {
            static const std::map<std::string, PolKind> kinds = {
                {"circular_plus", PolKind::circular_plus}, {"circular_minus", PolKind::circular_minus},
                {"linear_x", PolKind::linear_x},           {"linear_y", PolKind::linear_y},
                {"bloch_up", PolKind::bloch_up},           {"bloch_down", PolKind::bloch_down}};
            const auto it = kinds.find(e.value);
            if (it == kinds.end()) throw ConfigError(e.line, "unknown polarization '" + e.value + "'");
            c.pol.kind = it->second;
        } else if (e.key == "theta_B") {
            c.pol.theta_B = as_angle(e);
            if (c.pol.theta_B < 0.0 || c.pol.theta_B > std::numbers::pi + 1e-12)
                throw ConfigError(e.line, "theta_B must lie in [0, pi]");
        } else if (e.key == "phi_B") {
            c.pol.phi_B = as_angle(e);
        } else if (e.key == "profile") {
            if (e.value == "lg") c.profile = ProfileKind::lg;
            else if (e.value == "bg") c.profile = ProfileKind::bg;
            else throw ConfigError(e.line, "profile must be lg or bg");
        } else if (e.key == "p") {
            c.p = at_least(e, 0);
        } else if (e.key == "m") {
            c.m = as_int(e);
        } else if (e.key == "w0") {
            c.w0 = positive(e);
            w0_entry = &e;
        } else if (e.key == "theta_p") {
            c.theta_p = as_angle(e);
        }
    }
    c.amplitude = std::polar(amp, phase);
    try {
        validate_component(c, lambda0);
    } catch (const InvalidArgument& err) {
        throw ConfigError(w0_entry && std::string(err.what()).find("w0") != std::string::npos ? w0_entry->line : s.line,
                          err.what());
    }
    return c;
}

PropagationPlan read_propagation(const Section& s) {
    PropagationPlan p;
    bool has_dz = false;
    for (const auto& e : s.entries) {
        if (e.key == "dz") {
            p.dz = as_double(e);
            if (p.dz == 0.0) throw ConfigError(e.line, "dz must be non-zero");
            has_dz = true;
        } else if (e.key == "n_steps") {
            p.n_steps = at_least(e, 1);
        } else if (e.key == "guard_band") {
            p.guard_band = as_double(e);
            if (!(p.guard_band >= 0.0 && p.guard_band < 0.5)) throw ConfigError(e.line, "guard_band must lie in [0, 0.5)");
        }
    }
    if (!has_dz) throw ConfigError(s.line, "[propagation] needs dz");
    return p;
}

void read_loop(const Section& s, LoopParams& l) {
    for (const auto& e : s.entries) {
        if (e.key == "cx") l.cx = as_double(e);
        else if (e.key == "cy") l.cy = as_double(e);
        else if (e.key == "radius") l.radius = positive(e);
        else if (e.key == "n_samples") l.n_samples = at_least(e, 64);
        else if (e.key == "z") l.z = as_double(e);
        else if (e.key == "component") l.component = as_component(e);
        else if (e.key == "mask_threshold") l.mask_threshold = unit_open(e);
        else if (e.key == "convention") {
            if (e.value == "plus_first") l.convention = JumpConvention::plus_first;
            else if (e.value == "minus_first") l.convention = JumpConvention::minus_first;
            else throw ConfigError(e.line, "convention must be plus_first or minus_first");
        }
    }
}

PairSpec read_pair(const Section& s, double lambda0) {
    PairSpec p;
    const RadialProfile d = RadialProfile::default_profile(lambda0);
    double kz0 = d.kz0, sz = d.sigma_z, rk0 = d.rho_k0, sr = d.sigma_rho;
    for (const auto& e : s.entries) {
        if (e.key == "m") p.m = as_int(e);
        else if (e.key == "theta_B") p.theta_B = as_angle(e);
        else if (e.key == "phi_B") p.phi_B = as_angle(e);
        else if (e.key == "phi0") p.phi0 = as_angle(e);
        else if (e.key == "z") p.z = as_double(e);
        else if (e.key == "kz0") kz0 = positive(e);
        else if (e.key == "sigma_z") sz = positive(e);
        else if (e.key == "rho_k0") {
            rk0 = as_double(e);
            if (rk0 < 0.0) throw ConfigError(e.line, "rho_k0 must be non-negative");
        } else if (e.key == "sigma_rho") sr = positive(e);
        else if (e.key == "symmetry") {
            if (e.value == "symmetric") p.symmetry = PairSymmetry::symmetric;
            else if (e.value == "antisymmetric") p.symmetry = PairSymmetry::antisymmetric;
            else if (e.value == "same_up") p.symmetry = PairSymmetry::same_up;
            else if (e.value == "same_down") p.symmetry = PairSymmetry::same_down;
            else throw ConfigError(e.line, "symmetry must be symmetric, antisymmetric, same_up or same_down");
        }
    }
    p.eta = RadialProfile::gaussian_ring(kz0, sz, rk0, sr);
    try {
        p.validate();
    } catch (const InvalidArgument& err) {
        throw ConfigError(s.line, err.what());
    }
    return p;
}

void read_coherence(const Section& s, CoherenceParams& c) {
    for (const auto& e : s.entries) {
        if (e.key == "ring_radius") {
            c.ring_radius = as_double(e);
            if (c.ring_radius < 0.0) throw ConfigError(e.line, "ring_radius must be non-negative");
        } else if (e.key == "ring_samples") c.ring_samples = at_least(e, 2);
        else if (e.key == "reference_phi") c.reference_phi = as_angle(e);
        else if (e.key == "matrix_points") c.matrix_points = at_least(e, 1);
        else if (e.key == "disk_radius") c.disk_radius = positive(e);
        else if (e.key == "disk_pixels") c.disk_pixels = at_least(e, 8);
        else if (e.key == "coherent") c.coherent = as_bool(e);
    }
}

}  // namespace

double parse_angle(std::string_view text) {
    std::string_view s = trim(text);
    double factor = 1.0;
    const auto at = s.find("pi");
    if (at != std::string_view::npos) {
        std::string_view head = trim(s.substr(0, at));
        std::string_view tail = trim(s.substr(at + 2));
        double mult = 1.0;
        if (head == "-") mult = -1.0;
        else if (!head.empty()) {
            if (head.back() == '*') head = trim(head.substr(0, head.size() - 1));
            if (!parse_number(head, mult)) throw InvalidArgument("bad angle '" + std::string(text) + "'");
        }
        double div = 1.0;
        if (!tail.empty()) {
            if (tail.front() != '/') throw InvalidArgument("bad angle '" + std::string(text) + "'");
            if (!parse_number(tail.substr(1), div) || div == 0.0)
                throw InvalidArgument("bad angle '" + std::string(text) + "'");
        }
        factor = std::numbers::pi * mult / div;
        return factor;
    }
    double v = 0.0;
    if (!parse_number(s, v)) throw InvalidArgument("bad angle '" + std::string(text) + "'");
    return v;
}

Scenario parse_config_text(std::string_view text, const std::string& source) {
    const auto sections = tokenize(text);
    Scenario sc;
    sc.source = source;
    for (const auto& s : sections)
        if (s.name == "grid") read_grid(s, sc.grid);
    for (const auto& s : sections) {
        if (s.name == "component") sc.beam.components.push_back(read_component(s, sc.grid.lambda0));
        else if (s.name == "propagation") sc.propagation = read_propagation(s);
        else if (s.name == "loop") {
            read_loop(s, sc.loop);
            sc.has_loop = true;
        } else if (s.name == "observables") {
            for (const auto& e : s.entries) {
                if (e.key == "mask_threshold") sc.observables.mask_threshold = unit_open(e);
                else if (e.key == "gradient") {
                    if (e.value == "spectral") sc.observables.gradient = GradientMethod::spectral;
                    else if (e.value == "fd4") sc.observables.gradient = GradientMethod::fd4;
                    else throw ConfigError(e.line, "gradient must be spectral or fd4");
                }
            }
        } else if (s.name == "census") {
            for (const auto& e : s.entries) {
                if (e.key == "component") sc.census.component = as_component(e);
                else if (e.key == "zero_threshold") sc.census.zero_threshold = unit_open(e);
            }
        } else if (s.name == "pair") sc.pairs.push_back(read_pair(s, sc.grid.lambda0));
        else if (s.name == "coherence") read_coherence(s, sc.coherence);
        else if (s.name == "oam") {
            for (const auto& e : s.entries)
                if (e.key == "dz") sc.oam.dz = positive(e);
        }
    }
    return sc;
}

Scenario parse_config(const std::string& path) {
    return parse_config_text(read_file(path), path);
}

GridParams parse_grid_override(const std::string& text, GridParams base) {
    std::vector<std::string_view> parts;
    std::string_view s = text;
    while (true) {
        const auto c = s.find(',');
        parts.push_back(trim(s.substr(0, c)));
        if (c == std::string_view::npos) break;
        s.remove_prefix(c + 1);
    }
    if (parts.size() != 4) throw InvalidArgument("--grid expects nx,ny,dx,dy");
    double nx = 0, ny = 0;
    if (!parse_number(parts[0], nx) || !parse_number(parts[1], ny) || nx != std::floor(nx) || ny != std::floor(ny) ||
        nx < 4 || ny < 4 || nx > 1 << 15 || ny > 1 << 15)
        throw InvalidArgument("--grid: nx and ny must be integers >= 4");
    double dx = 0, dy = 0;
    if (!parse_number(parts[2], dx) || !parse_number(parts[3], dy) || !(dx > 0) || !(dy > 0))
        throw InvalidArgument("--grid: dx and dy must be positive");
    base.nx = static_cast<int>(nx);
    base.ny = static_cast<int>(ny);
    base.dx = dx;
    base.dy = dy;
    return base;
}

}  // namespace vortexlab
