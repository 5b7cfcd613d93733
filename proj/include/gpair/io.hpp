#pragma once

// GPV1 (volume) and GPS1 (signal) files.
//
//   bytes 0..3   magic, "GPV1" or "GPS1"
//   bytes 4..7   header length H, uint32 little-endian
//   next H bytes ASCII header, one "key=value" per line
//   payload      little-endian IEEE reals (f32 or f64)
//
// GPV1 header keys: dims=nx,ny,nz  spacing  origin=x,y,z  dtype  count.
// Payload is x-fastest. GPS1 keys: n_detectors n_samples sampling_rate
// speed_of_sound t0 dtype positions(0|1) label. Payload is detector-major;
// if positions=1 it is followed by n_detectors * 3 f64 coordinates (metres).
// Reals in headers are printed with 17 significant digits so they round-trip.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gpair/error.hpp"
#include "gpair/geometry.hpp"
#include "gpair/operators.hpp"

namespace gpair {

enum class Dtype { f32, f64 };

inline std::string to_string(Dtype d) { return d == Dtype::f32 ? "f32" : "f64"; }

inline Dtype dtype_from_string(const std::string& s) {
    if (s == "f32") return Dtype::f32;
    if (s == "f64") return Dtype::f64;
    throw InvalidArgument("unknown dtype '" + s + "'");
}

inline std::size_t dtype_size(Dtype d) { return d == Dtype::f32 ? 4 : 8; }

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VolumeFile {
    VoxelGrid grid;
    Dtype dtype = Dtype::f32;
    std::vector<double> values;

    VoxelImage<double> image() const { return VoxelImage<double>(grid, values); }
};

struct SignalFile {
    AcousticConfig acoustic;
    std::size_t n_detectors = 0;
    Dtype dtype = Dtype::f32;
    std::vector<double> data;
    std::optional<DetectorArray> detectors;

    template <class Real>
    SignalSet<Real> signals() const {
        SignalSet<Real> s(acoustic, n_detectors);
        for (std::size_t k = 0; k < data.size(); ++k) s.data[k] = static_cast<Real>(data[k]);
        return s;
    }
};

namespace detail {

inline std::string fmt_real(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

template <class T>
T byteswap_if_big(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

inline void write_reals(std::ostream& os, std::span<const double> values, Dtype dt) {
    if (dt == Dtype::f32) {
        std::vector<float> buf(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) buf[i] = byteswap_if_big(static_cast<float>(values[i]));
        os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 4));
    } else {
        std::vector<double> buf(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) buf[i] = byteswap_if_big(values[i]);
        os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * 8));
    }
}

inline std::vector<double> read_reals(std::istream& is, std::size_t n, Dtype dt) {
    std::vector<double> out(n);
    if (dt == Dtype::f32) {
        std::vector<float> buf(n);
        is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n * 4));
        if (!is) throw FormatError("truncated payload");
        for (std::size_t i = 0; i < n; ++i) out[i] = byteswap_if_big(buf[i]);
    } else {
        is.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(n * 8));
        if (!is) throw FormatError("truncated payload");
        for (auto& v : out) v = byteswap_if_big(v);
    }
    return out;
}

inline void write_header(std::ostream& os, const char* magic, const std::string& text) {
    os.write(magic, 4);
    const std::uint32_t len = byteswap_if_big(static_cast<std::uint32_t>(text.size()));
    os.write(reinterpret_cast<const char*>(&len), 4);
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline std::map<std::string, std::string> read_header(std::istream& is, const char* magic) {
    char m[4];
    is.read(m, 4);
    if (!is || std::memcmp(m, magic, 4) != 0) throw FormatError(std::string("bad magic, expected ") + magic);
    std::uint32_t len = 0;
    is.read(reinterpret_cast<char*>(&len), 4);
    len = byteswap_if_big(len);
    if (!is || len > (1u << 20)) throw FormatError("bad header length");
    std::string text(len, '\0');
    is.read(text.data(), len);
    if (!is) throw FormatError("truncated header");
    std::map<std::string, std::string> kv;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("malformed header line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

inline const std::string& header_get(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("header missing key '" + key + "'");
    return it->second;
}

inline std::vector<double> split_reals(const std::string& s, std::size_t expect) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    if (out.size() != expect) throw FormatError("expected " + std::to_string(expect) + " values in '" + s + "'");
    return out;
}

inline double parse_real(const std::string& s) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw FormatError("bad number '" + s + "'");
    }
}

inline void expect_eof(std::istream& is) {
    is.peek();
    if (!is.eof()) throw FormatError("trailing bytes after payload");
}

} // namespace detail

inline void write_volume(std::ostream& os, const VoxelGrid& grid, std::span<const double> values, Dtype dt) {
    detail::require(values.size() == grid.size(), "volume length does not match grid");
    std::ostringstream h;
    h << "dims=" << grid.dims[0] << ',' << grid.dims[1] << ',' << grid.dims[2] << '\n'
      << "spacing=" << detail::fmt_real(grid.spacing) << '\n'
      << "origin=" << detail::fmt_real(grid.origin.x) << ',' << detail::fmt_real(grid.origin.y) << ','
      << detail::fmt_real(grid.origin.z) << '\n'
      << "dtype=" << to_string(dt) << '\n'
      << "count=" << grid.size() << '\n';
    detail::write_header(os, "GPV1", h.str());
    detail::write_reals(os, values, dt);
}

template <class Real>
void write_volume(const std::string& path, const VoxelImage<Real>& image, Dtype dt) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    const std::vector<double> v(image.values.begin(), image.values.end());
    write_volume(os, image.grid, v, dt);
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

inline VolumeFile read_volume(std::istream& is) {
    const auto kv = detail::read_header(is, "GPV1");
    const auto d = detail::split_reals(detail::header_get(kv, "dims"), 3);
    const auto o = detail::split_reals(detail::header_get(kv, "origin"), 3);
    VolumeFile f;
    f.grid.dims = {static_cast<int>(d[0]), static_cast<int>(d[1]), static_cast<int>(d[2])};
    f.grid.spacing = detail::parse_real(detail::header_get(kv, "spacing"));
    f.grid.origin = {o[0], o[1], o[2]};
    f.grid.validate();
    f.dtype = dtype_from_string(detail::header_get(kv, "dtype"));
    const auto count = static_cast<std::size_t>(std::stoull(detail::header_get(kv, "count")));
    if (count != f.grid.size()) throw FormatError("element count does not match dims");
    f.values = detail::read_reals(is, count, f.dtype);
    detail::expect_eof(is);
    return f;
}

inline VolumeFile read_volume(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_volume(is);
}

inline void write_signals(std::ostream& os, const AcousticConfig& ac, std::size_t n_det, std::span<const double> data,
                          Dtype dt, const DetectorArray* detectors = nullptr) {
    detail::require(data.size() == n_det * static_cast<std::size_t>(ac.n_samples), "signal length mismatch");
    detail::require(!detectors || detectors->size() == n_det, "detector count mismatch");
    std::ostringstream h;
    h << "n_detectors=" << n_det << '\n'
      << "n_samples=" << ac.n_samples << '\n'
      << "sampling_rate=" << detail::fmt_real(ac.sampling_rate) << '\n'
      << "speed_of_sound=" << detail::fmt_real(ac.speed_of_sound) << '\n'
      << "t0=" << detail::fmt_real(ac.t0) << '\n'
      << "dtype=" << to_string(dt) << '\n'
      << "positions=" << (detectors ? 1 : 0) << '\n';
    if (detectors) h << "label=" << to_string(detectors->label) << '\n';
    detail::write_header(os, "GPS1", h.str());
    detail::write_reals(os, data, dt);
    if (detectors) {
        std::vector<double> p;
        p.reserve(n_det * 3);
        for (const auto& q : detectors->positions) p.insert(p.end(), {q.x, q.y, q.z});
        detail::write_reals(os, p, Dtype::f64);
    }
}

template <class Real>
void write_signals(const std::string& path, const SignalSet<Real>& s, Dtype dt, const DetectorArray* detectors = nullptr) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    const std::vector<double> v(s.data.begin(), s.data.end());
    write_signals(os, s.acoustic, s.n_detectors, v, dt, detectors);
    if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

inline SignalFile read_signals(std::istream& is) {
    const auto kv = detail::read_header(is, "GPS1");
    SignalFile f;
    f.n_detectors = static_cast<std::size_t>(std::stoull(detail::header_get(kv, "n_detectors")));
    f.acoustic.n_samples = std::stoll(detail::header_get(kv, "n_samples"));
    f.acoustic.sampling_rate = detail::parse_real(detail::header_get(kv, "sampling_rate"));
    f.acoustic.speed_of_sound = detail::parse_real(detail::header_get(kv, "speed_of_sound"));
    f.acoustic.t0 = detail::parse_real(detail::header_get(kv, "t0"));
    f.acoustic.validate();
    f.dtype = dtype_from_string(detail::header_get(kv, "dtype"));
    if (f.n_detectors == 0) throw FormatError("signal file has no detectors");
    f.data = detail::read_reals(is, f.n_detectors * static_cast<std::size_t>(f.acoustic.n_samples), f.dtype);
    if (detail::header_get(kv, "positions") == "1") {
        const auto p = detail::read_reals(is, f.n_detectors * 3, Dtype::f64);
        DetectorArray a;
        auto lab = kv.find("label");
        a.label = lab != kv.end() ? array_kind_from_string(lab->second) : ArrayKind::custom;
        for (std::size_t j = 0; j < f.n_detectors; ++j) a.positions.push_back({p[3 * j], p[3 * j + 1], p[3 * j + 2]});
        f.detectors = std::move(a);
    }
    detail::expect_eof(is);
    return f;
}

inline SignalFile read_signals(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_signals(is);
}

/// Raw little-endian payload plus a "<path>.txt" sidecar with the same keys as the header.
inline void export_raw_volume(const VolumeFile& f, const std::string& raw_path) {
    std::ofstream os(raw_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + raw_path + "'");
    detail::write_reals(os, f.values, f.dtype);
    std::ofstream side(raw_path + ".txt");
    side << "dims=" << f.grid.dims[0] << ',' << f.grid.dims[1] << ',' << f.grid.dims[2] << '\n'
         << "spacing=" << detail::fmt_real(f.grid.spacing) << '\n'
         << "origin=" << detail::fmt_real(f.grid.origin.x) << ',' << detail::fmt_real(f.grid.origin.y) << ','
         << detail::fmt_real(f.grid.origin.z) << '\n'
         << "dtype=" << to_string(f.dtype) << '\n'
         << "count=" << f.grid.size() << '\n'
         << "order=x-fastest\nendian=little\n";
}

} // namespace gpair
