#pragma once

// Cloud persistence. Binary layout, all little-endian:
//   8 bytes  magic "CIFSPC\0\1"
//   u32      format version (1)
//   u32      ambient dimension (1 or 2)
//   u32      label (0 limit set, 1 fixed points)
//   u32      reserved (0)
//   f64      delta
//   u64      point count n
//   f64[n*d] coordinates
// Files are written to a temporary sibling and renamed into place.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "cifs/cloud.hpp"
#include "cifs/error.hpp"

namespace cifs {

inline constexpr std::array<char, 8> kCloudMagic{'C', 'I', 'F', 'S', 'P', 'C', '\0', '\1'};
inline constexpr std::uint32_t kCloudVersion = 1;

/// Write bytes to path through a temporary file in the same directory.
inline void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

namespace detail {

template <typename T>
void put_le(std::string& out, T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> b{};
    std::memcpy(b.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    out.append(b.data(), b.size());
}

template <typename T>
T get_le(const std::string& in, std::size_t& pos) {
    if (pos + sizeof(T) > in.size()) throw ConfigError("truncated cloud file");
    std::array<char, sizeof(T)> b{};
    std::memcpy(b.data(), in.data() + pos, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    pos += sizeof(T);
    T v;
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
}

}  // namespace detail

inline std::string encode_cloud(const PointCloud& c) {
    std::string out(kCloudMagic.begin(), kCloudMagic.end());
    detail::put_le<std::uint32_t>(out, kCloudVersion);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(c.ambient_dim));
    detail::put_le<std::uint32_t>(out, c.label == CloudLabel::limit_set ? 0U : 1U);
    detail::put_le<std::uint32_t>(out, 0U);
    detail::put_le<double>(out, c.delta);
    detail::put_le<std::uint64_t>(out, static_cast<std::uint64_t>(c.size()));
    out.reserve(out.size() + 8 * c.coords.size());
    for (const double v : c.coords) detail::put_le<double>(out, v);
    return out;
}

inline PointCloud decode_cloud(const std::string& in) {
    if (in.size() < kCloudMagic.size() || !std::equal(kCloudMagic.begin(), kCloudMagic.end(), in.begin()))
        throw ConfigError("not a cloud file (bad magic)");
    std::size_t pos = kCloudMagic.size();
    const auto version = detail::get_le<std::uint32_t>(in, pos);
    if (version != kCloudVersion) throw ConfigError("unsupported cloud file version " + std::to_string(version));
    PointCloud c;
    const auto dim = detail::get_le<std::uint32_t>(in, pos);
    if (dim != 1 && dim != 2) throw ConfigError("cloud file has ambient dimension " + std::to_string(dim));
    c.ambient_dim = static_cast<int>(dim);
    const auto label = detail::get_le<std::uint32_t>(in, pos);
    if (label > 1) throw ConfigError("cloud file has unknown label " + std::to_string(label));
    c.label = label == 0 ? CloudLabel::limit_set : CloudLabel::fixed_points;
    (void)detail::get_le<std::uint32_t>(in, pos);
    c.delta = detail::get_le<double>(in, pos);
    const auto n = detail::get_le<std::uint64_t>(in, pos);
    const std::size_t rest = in.size() - pos;
    if (rest % (8 * dim) != 0 || rest / (8 * dim) != n)
        throw ConfigError("cloud file size does not match its point count");
    c.coords.resize(static_cast<std::size_t>(n * dim));
    for (auto& v : c.coords) v = detail::get_le<double>(in, pos);
    return c;
}

inline void write_cloud(const std::filesystem::path& path, const PointCloud& c) { atomic_write(path, encode_cloud(c)); }

inline PointCloud read_cloud(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open cloud file " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    PointCloud c = decode_cloud(os.str());
    c.source = path.filename().string();
    return c;
}

/// One row per point: x, or x,y.
inline std::string cloud_csv(const PointCloud& c) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << (c.ambient_dim == 1 ? "x\n" : "x,y\n");
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.ambient_dim == 1) os << c.x(i) << '\n';
        else os << c.z(i).real() << ',' << c.z(i).imag() << '\n';
    }
    return os.str();
}

}  // namespace cifs
