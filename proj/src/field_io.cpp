#include "vortexlab/field_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>

namespace vortexlab {

static_assert(std::endian::native == std::endian::little, "VXF payload code assumes a little-endian host");

void write_file_atomic(const std::string& path, std::string_view bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename " + tmp + " to " + path);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string encode_header(const TransverseGrid& g) {
    std::string h = "VXF 1\n";
    h += "nx " + std::to_string(g.nx) + " ny " + std::to_string(g.ny) + "\n";
    h += "dx " + format_double(g.dx) + " dy " + format_double(g.dy) + "\n";
    h += "x0 " + format_double(g.x0) + " y0 " + format_double(g.y0) + "\n";
    h += "z " + format_double(g.z) + "\n";
    h += "lambda0 " + format_double(g.lambda0) + "\n";
    h += "END\n";
    return h;
}

class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : b_(bytes) {}

    std::size_t pos() const { return pos_; }

    /// Returns the next LF-terminated line, without the LF.
    std::string_view line() {
        line_start_ = pos_;
        const auto nl = b_.find('\n', pos_);
        if (nl == std::string_view::npos) throw FormatError(pos_, "unterminated header line");
        auto out = b_.substr(pos_, nl - pos_);
        pos_ = nl + 1;
        return out;
    }

    void expect_line(std::string_view want) {
        auto l = line();
        if (l != want) throw FormatError(line_start_, "expected '" + std::string(want) + "'");
    }

    /// Parses `key1 v1 [key2 v2]` on one line.
    template <typename T>
    void keyed(std::string_view k1, T& v1) {
        auto l = line();
        std::size_t off = 0;
        v1 = field<T>(l, off, k1);
        if (off != l.size()) throw FormatError(line_start_ + off, "trailing characters in header line");
    }
    template <typename T>
    void keyed(std::string_view k1, T& v1, std::string_view k2, T& v2) {
        auto l = line();
        std::size_t off = 0;
        v1 = field<T>(l, off, k1);
        if (off >= l.size() || l[off] != ' ') throw FormatError(line_start_ + off, "expected space");
        ++off;
        v2 = field<T>(l, off, k2);
        if (off != l.size()) throw FormatError(line_start_ + off, "trailing characters in header line");
    }

private:
    template <typename T>
    T field(std::string_view l, std::size_t& off, std::string_view key) {
        if (l.substr(off, key.size()) != key || off + key.size() >= l.size() || l[off + key.size()] != ' ') {
            throw FormatError(line_start_ + off, "expected key '" + std::string(key) + "'");
        }
        off += key.size() + 1;
        const char* first = l.data() + off;
        const char* last = l.data() + l.size();
        const char* stop = std::find(first, last, ' ');
        T v{};
        auto res = std::from_chars(first, stop, v);
        if (res.ec != std::errc() || res.ptr != stop) {
            throw FormatError(line_start_ + off, "bad value for '" + std::string(key) + "'");
        }
        off = static_cast<std::size_t>(stop - l.data());
        return v;
    }

    std::string_view b_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
};

TransverseGrid decode_header(std::string_view bytes, std::size_t& payload_start) {
    HeaderReader r(bytes);
    TransverseGrid g;
    r.expect_line("VXF 1");
    r.keyed("nx", g.nx, "ny", g.ny);
    r.keyed("dx", g.dx, "dy", g.dy);
    r.keyed("x0", g.x0, "y0", g.y0);
    r.keyed("z", g.z);
    r.keyed("lambda0", g.lambda0);
    const std::size_t end_at = r.pos();
    r.expect_line("END");
    try {
        g.validate();
    } catch (const InvalidArgument& e) {
        throw FormatError(end_at, e.what());
    }
    payload_start = r.pos();
    return g;
}

void check_payload(std::size_t have, std::size_t want) {
    if (have < want) throw TruncatedError(want, have);
    if (have > want) throw FormatError(want, "trailing bytes after payload");
}

void put(std::string& out, double v) {
    char b[8];
    std::memcpy(b, &v, 8);
    out.append(b, 8);
}

double get(const char* p) {
    double v;
    std::memcpy(&v, p, 8);
    return v;
}

}  // namespace

std::string encode_vxf(const SpinorField& f) {
    std::string out = encode_header(f.grid);
    out.reserve(out.size() + f.grid.size() * 32);
    for (std::size_t k = 0; k < f.grid.size(); ++k) {
        put(out, f.plus[k].real());
        put(out, f.plus[k].imag());
        put(out, f.minus[k].real());
        put(out, f.minus[k].imag());
    }
    return out;
}

SpinorField decode_vxf(std::string_view bytes) {
    std::size_t start = 0;
    const TransverseGrid g = decode_header(bytes, start);
    const std::size_t n = g.size();
    check_payload(bytes.size() - start, n * 32);
    SpinorField f(g);
    const char* p = bytes.data() + start;
    for (std::size_t k = 0; k < n; ++k, p += 32) {
        f.plus[k] = {get(p), get(p + 8)};
        f.minus[k] = {get(p + 16), get(p + 24)};
    }
    return f;
}

void write_vxf(const SpinorField& f, const std::string& path) { write_file_atomic(path, encode_vxf(f)); }
SpinorField read_vxf(const std::string& path) { return decode_vxf(read_file(path)); }

std::string encode_vxf_scalar(const ScalarField& s) {
    std::string out = encode_header(s.grid);
    out.reserve(out.size() + s.grid.size() * 8);
    for (std::size_t k = 0; k < s.grid.size(); ++k) {
        put(out, s.masked(k) ? std::numeric_limits<double>::quiet_NaN() : s.values[k]);
    }
    return out;
}

ScalarField decode_vxf_scalar(std::string_view bytes) {
    std::size_t start = 0;
    const TransverseGrid g = decode_header(bytes, start);
    const std::size_t n = g.size();
    check_payload(bytes.size() - start, n * 8);
    ScalarField s(g);
    const char* p = bytes.data() + start;
    bool any_masked = false;
    for (std::size_t k = 0; k < n; ++k, p += 8) {
        s.values[k] = get(p);
        any_masked |= std::isnan(s.values[k]);
    }
    if (any_masked) {
        s.mask.assign(n, 0);
        for (std::size_t k = 0; k < n; ++k) {
            if (std::isnan(s.values[k])) {
                s.mask[k] = 1;
                s.values[k] = 0.0;
            }
        }
    }
    return s;
}

void write_vxf_scalar(const ScalarField& s, const std::string& path) {
    write_file_atomic(path, encode_vxf_scalar(s));
}
ScalarField read_vxf_scalar(const std::string& path) { return decode_vxf_scalar(read_file(path)); }

std::string render_heatmap(const ScalarField& s, Colormap map, double* lo, double* hi) {
    const TransverseGrid& g = s.grid;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (s.masked(k)) continue;
        mn = std::min(mn, s.values[k]);
        mx = std::max(mx, s.values[k]);
    }
    if (!(mn <= mx)) throw EmptyField("heatmap: every sample is masked");

    std::string out;
    if (map == Colormap::gray) {
        out = "P5\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n255\n";
        const double span = mx - mn;
        for (int j = g.ny - 1; j >= 0; --j) {
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                long v = 0;
                if (!s.masked(k)) v = span > 0.0 ? std::lround(255.0 * (s.values[k] - mn) / span) : 128;
                out.push_back(static_cast<char>(std::clamp(v, 0L, 255L)));
            }
        }
        if (lo) *lo = mn;
        if (hi) *hi = mx;
    } else {
        out = "P6\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n255\n";
        const double m = std::max(std::abs(mn), std::abs(mx));
        for (int j = g.ny - 1; j >= 0; --j) {
            for (int i = 0; i < g.nx; ++i) {
                const std::size_t k = g.index(i, j);
                unsigned char rgb[3] = {0, 0, 0};
                if (!s.masked(k)) {
                    const double t = m > 0.0 ? s.values[k] / m : 0.0;
                    // Rounding on |t| keeps the map exactly antisymmetric.
                    const auto fade = static_cast<unsigned char>(std::lround(255.0 * (1.0 - std::abs(t))));
                    if (t >= 0.0) {
                        rgb[0] = 255, rgb[1] = fade, rgb[2] = fade;
                    } else {
                        rgb[0] = fade, rgb[1] = fade, rgb[2] = 255;
                    }
                }
                out.append(reinterpret_cast<const char*>(rgb), 3);
            }
        }
        if (lo) *lo = -m;
        if (hi) *hi = m;
    }
    return out;
}

void export_heatmap(const ScalarField& s, const std::string& path, Colormap map) {
    double lo = 0.0, hi = 0.0;
    const std::string img = render_heatmap(s, map, &lo, &hi);
    write_file_atomic(path, img);
    write_file_atomic(path + ".range.txt", format_double(lo) + " " + format_double(hi) + "\n");
}

}  // namespace vortexlab
