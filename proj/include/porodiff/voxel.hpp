#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "porodiff/common.hpp"

namespace porodiff {

/// Grid extents. GTPV headers name these H, W, L; H is the x extent
/// (fastest-varying index), W the y extent, L the z extent.
struct Dims3 {
    int nx = 0;
    int ny = 0;
    int nz = 0;

    std::size_t size() const {
        return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
    }
    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(nx) * (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * z);
    }
    bool contains(int x, int y, int z) const {
        return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
    }
    int max_extent() const { return std::max(nx, std::max(ny, nz)); }
    bool operator==(const Dims3&) const = default;
};

/// Dense binary phase field; 1 = pore, 0 = solid, x-fastest layout.
struct VoxelVolume {
    Dims3 dims;
    std::vector<std::uint8_t> data;

    VoxelVolume() = default;
    VoxelVolume(Dims3 d, std::uint8_t fill = 0) : dims(d), data(d.size(), fill) {}

    std::uint8_t at(int x, int y, int z) const { return data[dims.index(x, y, z)]; }
    void set(int x, int y, int z, std::uint8_t v) { data[dims.index(x, y, z)] = v; }
    bool operator==(const VoxelVolume&) const = default;
};

/// Per-voxel non-negative 32-bit region labels; 0 = background.
struct LabelVolume {
    Dims3 dims;
    std::vector<std::uint32_t> data;

    LabelVolume() = default;
    explicit LabelVolume(Dims3 d) : dims(d), data(d.size(), 0) {}

    std::uint32_t at(int x, int y, int z) const { return data[dims.index(x, y, z)]; }
};

/// Per-voxel squared Euclidean distances in voxel^2 units. Squared values
/// are exact integers for lattice inputs, which is what makes the
/// brute-force oracle comparison in the tests an equality check.
struct DistanceField {
    Dims3 dims;
    std::vector<double> data;

    DistanceField() = default;
    explicit DistanceField(Dims3 d) : dims(d), data(d.size(), 0.0) {}

    double at(int x, int y, int z) const { return data[dims.index(x, y, z)]; }
};

inline double porosity(const VoxelVolume& v) {
    std::size_t pore = 0;
    for (std::uint8_t b : v.data) pore += b;
    return v.data.empty() ? 0.0 : static_cast<double>(pore) / static_cast<double>(v.data.size());
}

inline VoxelVolume complement(const VoxelVolume& v) {
    VoxelVolume out(v.dims);
    for (std::size_t i = 0; i < v.data.size(); ++i) out.data[i] = v.data[i] ? 0 : 1;
    return out;
}

namespace detail {

inline const std::array<std::array<int, 3>, 6>& neighbors6() {
    static const std::array<std::array<int, 3>, 6> n = {{{1, 0, 0},
                                                         {-1, 0, 0},
                                                         {0, 1, 0},
                                                         {0, -1, 0},
                                                         {0, 0, 1},
                                                         {0, 0, -1}}};
    return n;
}

inline const std::array<std::array<int, 3>, 26>& neighbors26() {
    static const std::array<std::array<int, 3>, 26> n = [] {
        std::array<std::array<int, 3>, 26> out{};
        int k = 0;
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    out[k++] = {dx, dy, dz};
                }
        return out;
    }();
    return n;
}

// One-dimensional squared-distance transform (lower envelope of parabolas).
// f holds source costs (kInf for "no source here"); d receives the result.
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d, int n) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    static thread_local std::vector<int> v;
    static thread_local std::vector<double> z;
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);

    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    bool any = f[0] < kInf;
    for (int q = 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        if (!any) {  // first finite parabola
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            any = true;
            continue;
        }
        double s;
        while (true) {
            int p = v[k];
            s = ((f[q] + q * static_cast<double>(q)) - (f[p] + p * static_cast<double>(p))) / (2.0 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (!any) {
        for (int q = 0; q < n; ++q) d[q] = kInf;
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        double dq = q - static_cast<double>(v[k]);
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace detail

/// Deterministic connected-component labeling of one phase. Labels are
/// assigned in first-encounter raster order, so equal volumes always get
/// bit-identical label fields.
inline std::pair<LabelVolume, std::uint32_t> connected_components(const VoxelVolume& v, int phase,
                                                                  int connectivity = 6) {
    require(phase == 0 || phase == 1, Errc::invalid_config, "phase must be 0 or 1");
    require(connectivity == 6 || connectivity == 26, Errc::invalid_config, "connectivity must be 6 or 26");
    LabelVolume labels(v.dims);
    std::uint32_t count = 0;
    std::vector<std::size_t> stack;
    const auto& d6 = detail::neighbors6();
    const auto& d26 = detail::neighbors26();
    const int ncount = connectivity == 6 ? 6 : 26;

    for (int z = 0; z < v.dims.nz; ++z)
        for (int y = 0; y < v.dims.ny; ++y)
            for (int x = 0; x < v.dims.nx; ++x) {
                std::size_t i = v.dims.index(x, y, z);
                if (v.data[i] != phase || labels.data[i] != 0) continue;
                ++count;
                labels.data[i] = count;
                stack.push_back(i);
                while (!stack.empty()) {
                    std::size_t cur = stack.back();
                    stack.pop_back();
                    int cx = static_cast<int>(cur % v.dims.nx);
                    int cy = static_cast<int>((cur / v.dims.nx) % v.dims.ny);
                    int cz = static_cast<int>(cur / (static_cast<std::size_t>(v.dims.nx) * v.dims.ny));
                    for (int k = 0; k < ncount; ++k) {
                        const auto& o = connectivity == 6 ? d6[k] : d26[k];
                        int nx = cx + o[0], ny = cy + o[1], nz = cz + o[2];
                        if (!v.dims.contains(nx, ny, nz)) continue;
                        std::size_t ni = v.dims.index(nx, ny, nz);
                        if (v.data[ni] == phase && labels.data[ni] == 0) {
                            labels.data[ni] = count;
                            stack.push_back(ni);
                        }
                    }
                }
            }
    return {std::move(labels), count};
}

/// Exact squared Euclidean distance transform of the chosen phase, by
/// dimension-wise lower-envelope passes. Positions outside the volume count
/// as the other phase, so distances stay bounded near the faces.
inline DistanceField edt(const VoxelVolume& v, int phase) {
    require(phase == 0 || phase == 1, Errc::invalid_config, "phase must be 0 or 1");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const Dims3& d = v.dims;
    DistanceField out(d);
    std::vector<double>& g = out.data;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = (v.data[i] == phase) ? kInf : 0.0;

    std::vector<double> f(static_cast<std::size_t>(d.max_extent()));
    std::vector<double> r(static_cast<std::size_t>(d.max_extent()));

    // x pass
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y) {
            for (int x = 0; x < d.nx; ++x) f[x] = g[d.index(x, y, z)];
            detail::edt_1d(f, r, d.nx);
            for (int x = 0; x < d.nx; ++x) g[d.index(x, y, z)] = r[x];
        }
    // y pass
    for (int z = 0; z < d.nz; ++z)
        for (int x = 0; x < d.nx; ++x) {
            for (int y = 0; y < d.ny; ++y) f[y] = g[d.index(x, y, z)];
            detail::edt_1d(f, r, d.ny);
            for (int y = 0; y < d.ny; ++y) g[d.index(x, y, z)] = r[y];
        }
    // z pass
    for (int y = 0; y < d.ny; ++y)
        for (int x = 0; x < d.nx; ++x) {
            for (int z = 0; z < d.nz; ++z) f[z] = g[d.index(x, y, z)];
            detail::edt_1d(f, r, d.nz);
            for (int z = 0; z < d.nz; ++z) g[d.index(x, y, z)] = r[z];
        }

    // Clamp by the nearest out-of-volume lattice position (straight out the
    // closest face), then zero the other phase.
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x) {
                std::size_t i = d.index(x, y, z);
                if (v.data[i] != phase) {
                    g[i] = 0.0;
                    continue;
                }
                auto sq = [](double a) { return a * a; };
                double face = std::min({sq(x + 1.0), sq(d.nx - x), sq(y + 1.0), sq(d.ny - y), sq(z + 1.0),
                                        sq(d.nz - z)});
                g[i] = std::min(g[i], face);
            }
    return out;
}

// ---------------------------------------------------------------------------
// GTPV container: "GTPV" magic, u32 version, u32 H/W/L, 12 reserved zero
// bytes, then one byte per voxel in x-fastest order.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32le(std::string& s, std::uint32_t v) {
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>((v >> 8) & 0xff));
    s.push_back(static_cast<char>((v >> 16) & 0xff));
    s.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline std::uint32_t get_u32le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace detail

inline std::string encode_gtpv(const VoxelVolume& v) {
    std::string out;
    out.reserve(32 + v.data.size());
    out += "GTPV";
    detail::put_u32le(out, 1u);
    detail::put_u32le(out, static_cast<std::uint32_t>(v.dims.nx));
    detail::put_u32le(out, static_cast<std::uint32_t>(v.dims.ny));
    detail::put_u32le(out, static_cast<std::uint32_t>(v.dims.nz));
    out.append(12, '\0');
    out.append(reinterpret_cast<const char*>(v.data.data()), v.data.size());
    return out;
}

inline VoxelVolume decode_gtpv(const std::string& bytes) {
    require(bytes.size() >= 32, Errc::dim_mismatch, "GTPV shorter than its 32-byte header");
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    require(std::memcmp(p, "GTPV", 4) == 0, Errc::bad_magic, "not a GTPV file");
    std::uint32_t version = detail::get_u32le(p + 4);
    require(version == 1, Errc::unsupported_version, "GTPV version " + std::to_string(version));
    Dims3 d{static_cast<int>(detail::get_u32le(p + 8)), static_cast<int>(detail::get_u32le(p + 12)),
            static_cast<int>(detail::get_u32le(p + 16))};
    require(d.nx >= 1 && d.ny >= 1 && d.nz >= 1, Errc::dim_mismatch, "GTPV dims must be positive");
    require(bytes.size() - 32 == d.size(), Errc::dim_mismatch,
            "payload is " + std::to_string(bytes.size() - 32) + " bytes, dims need " + std::to_string(d.size()));
    VoxelVolume v(d);
    std::memcpy(v.data.data(), p + 32, d.size());
    for (std::uint8_t b : v.data)
        require(b <= 1, Errc::dim_mismatch, "GTPV voxel byte outside {0,1}");
    return v;
}

inline VoxelVolume load_volume(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), Errc::io_failure, "cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    require(!in.bad(), Errc::io_failure, "read failed on " + path);
    return decode_gtpv(bytes);
}

inline void save_volume(const VoxelVolume& v, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), Errc::io_failure, "cannot open " + path + " for writing");
    std::string bytes = encode_gtpv(v);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    require(static_cast<bool>(out), Errc::io_failure, "write failed on " + path);
}

}  // namespace porodiff
