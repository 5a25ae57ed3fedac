#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "porodiff/rng.hpp"
#include "porodiff/voxel.hpp"

namespace porodiff {

enum class SynthKind { boolean_spheres, fibers };

/// Parameters for the deterministic synthetic volume generators. These are
/// desk-scale stand-ins for micro-CT crops, not material models.
struct SynthConfig {
    SynthKind kind = SynthKind::boolean_spheres;
    Dims3 dims{64, 64, 64};
    double target_porosity = 0.3;
    double radius_min = 3.0;
    double radius_max = 8.0;
    std::array<double, 3> fiber_axis{0.0, 0.0, 1.0};  // fibers only
    double fiber_radius = 3.0;
    double fiber_jitter_deg = 10.0;  // max tilt away from fiber_axis
    std::uint64_t seed = 0;

    void validate() const {
        // Fibers admit target 1 (satisfied before any placement); the sphere
        // model can never reach it.
        double hi = kind == SynthKind::fibers ? 1.0 + 1e-15 : 1.0;
        require(target_porosity > 0.0 && target_porosity < hi, Errc::invalid_config,
                "target_porosity out of range");
        require(radius_min >= 1.0 && radius_max >= radius_min, Errc::invalid_config, "bad radius_range");
        require(dims.nx >= 16 && dims.ny >= 16 && dims.nz >= 16, Errc::invalid_config,
                "dims must be at least 16 per axis");
        if (kind == SynthKind::fibers) {
            double n = std::sqrt(fiber_axis[0] * fiber_axis[0] + fiber_axis[1] * fiber_axis[1] +
                                 fiber_axis[2] * fiber_axis[2]);
            require(n > 1e-12, Errc::invalid_config, "fiber_axis must be a nonzero direction");
            require(fiber_radius >= 1.0, Errc::invalid_config, "fiber_radius must be >= 1 voxel");
        }
    }
};

/// Axis-aligned crop origins per split, all with one shared crop size.
/// Crops from different splits never share a voxel.
struct BlockSplit {
    int crop_size = 0;
    std::vector<std::array<int, 3>> train, val, test;
};

namespace detail {

inline void stamp_ball(VoxelVolume& v, const std::array<double, 3>& c, double r, std::uint8_t value,
                       std::size_t& changed) {
    int x0 = std::max(0, static_cast<int>(std::floor(c[0] - r)));
    int x1 = std::min(v.dims.nx - 1, static_cast<int>(std::ceil(c[0] + r)));
    int y0 = std::max(0, static_cast<int>(std::floor(c[1] - r)));
    int y1 = std::min(v.dims.ny - 1, static_cast<int>(std::ceil(c[1] + r)));
    int z0 = std::max(0, static_cast<int>(std::floor(c[2] - r)));
    int z1 = std::min(v.dims.nz - 1, static_cast<int>(std::ceil(c[2] + r)));
    double r2 = r * r;
    for (int z = z0; z <= z1; ++z)
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                double dx = x - c[0], dy = y - c[1], dz = z - c[2];
                if (dx * dx + dy * dy + dz * dz <= r2) {
                    std::size_t i = v.dims.index(x, y, z);
                    if (v.data[i] != value) {
                        v.data[i] = value;
                        ++changed;
                    }
                }
            }
}

// Squared distance from point p to the infinite line through a with unit
// direction u.
inline double line_dist2(const std::array<double, 3>& p, const std::array<double, 3>& a,
                         const std::array<double, 3>& u) {
    double dx = p[0] - a[0], dy = p[1] - a[1], dz = p[2] - a[2];
    double t = dx * u[0] + dy * u[1] + dz * u[2];
    double rx = dx - t * u[0], ry = dy - t * u[1], rz = dz - t * u[2];
    return rx * rx + ry * ry + rz * rz;
}

inline std::array<double, 3> normalized(std::array<double, 3> v) {
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return {v[0] / n, v[1] / n, v[2] / n};
}

// Rotate the axis by a random angle <= max_tilt, uniform in azimuth.
inline std::array<double, 3> jitter_direction(const std::array<double, 3>& axis, double max_tilt_rad, Rng& rng) {
    std::array<double, 3> u = normalized(axis);
    // any vector not parallel to u
    std::array<double, 3> helper = std::abs(u[0]) < 0.9 ? std::array<double, 3>{1, 0, 0}
                                                        : std::array<double, 3>{0, 1, 0};
    std::array<double, 3> e1 = {u[1] * helper[2] - u[2] * helper[1], u[2] * helper[0] - u[0] * helper[2],
                                u[0] * helper[1] - u[1] * helper[0]};
    e1 = normalized(e1);
    std::array<double, 3> e2 = {u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2],
                                u[0] * e1[1] - u[1] * e1[0]};
    double tilt = max_tilt_rad * rng.uniform();
    double phi = 2.0 * 3.14159265358979323846 * rng.uniform();
    double s = std::sin(tilt), c = std::cos(tilt);
    return {c * u[0] + s * (std::cos(phi) * e1[0] + std::sin(phi) * e2[0]),
            c * u[1] + s * (std::cos(phi) * e1[1] + std::sin(phi) * e2[1]),
            c * u[2] + s * (std::cos(phi) * e1[2] + std::sin(phi) * e2[2])};
}

}  // namespace detail

/// Rasterize an infinite cylinder (clipped to the volume) of the given
/// radius around the line through `point` with direction `direction`,
/// writing `value`; returns how many voxels changed.
inline std::size_t stamp_fiber(VoxelVolume& v, const std::array<double, 3>& point,
                               const std::array<double, 3>& direction, double radius, std::uint8_t value) {
    std::array<double, 3> u = detail::normalized(direction);
    double r2 = radius * radius;
    std::size_t changed = 0;
    for (int z = 0; z < v.dims.nz; ++z)
        for (int y = 0; y < v.dims.ny; ++y)
            for (int x = 0; x < v.dims.nx; ++x) {
                std::array<double, 3> p = {static_cast<double>(x), static_cast<double>(y),
                                           static_cast<double>(z)};
                if (detail::line_dist2(p, point, u) <= r2) {
                    std::size_t i = v.dims.index(x, y, z);
                    if (v.data[i] != value) {
                        v.data[i] = value;
                        ++changed;
                    }
                }
            }
    return changed;
}

/// Boolean sphere model: pore = union of random balls, placed sequentially
/// until the target porosity is reached. Overlaps are accepted.
inline VoxelVolume generate_boolean_spheres(const SynthConfig& cfg) {
    cfg.validate();
    VoxelVolume v(cfg.dims, 0);
    Rng rng(cfg.seed);
    const std::size_t total = cfg.dims.size();
    std::size_t pore = 0;
    const std::size_t max_placements = 200000;
    for (std::size_t placed = 0; placed < max_placements; ++placed) {
        if (static_cast<double>(pore) / static_cast<double>(total) >= cfg.target_porosity) return v;
        std::array<double, 3> c = {rng.uniform() * cfg.dims.nx, rng.uniform() * cfg.dims.ny,
                                   rng.uniform() * cfg.dims.nz};
        double r = cfg.radius_min + (cfg.radius_max - cfg.radius_min) * rng.uniform();
        detail::stamp_ball(v, c, r, 1, pore);
    }
    fail(Errc::target_unreachable, "porosity target not reached after max placements");
}

/// Fiber model: solid = union of jittered infinite cylinders (clipped to the
/// volume), pore = complement. Fibers are added until porosity drops to the
/// target.
inline VoxelVolume generate_fibers(const SynthConfig& cfg) {
    cfg.validate();
    VoxelVolume v(cfg.dims, 1);
    Rng rng(cfg.seed);
    const std::size_t total = cfg.dims.size();
    std::size_t solid = 0;
    const double max_tilt = cfg.fiber_jitter_deg * 3.14159265358979323846 / 180.0;
    const std::size_t max_placements = 200000;
    for (std::size_t placed = 0; placed < max_placements; ++placed) {
        if (1.0 - static_cast<double>(solid) / static_cast<double>(total) <= cfg.target_porosity) return v;
        std::array<double, 3> a = {rng.uniform() * cfg.dims.nx, rng.uniform() * cfg.dims.ny,
                                   rng.uniform() * cfg.dims.nz};
        std::array<double, 3> u = detail::jitter_direction(cfg.fiber_axis, max_tilt, rng);
        solid += stamp_fiber(v, a, u, cfg.fiber_radius, 0);
    }
    fail(Errc::target_unreachable, "porosity target not reached after max placements");
}

inline VoxelVolume generate(const SynthConfig& cfg) {
    return cfg.kind == SynthKind::boolean_spheres ? generate_boolean_spheres(cfg) : generate_fibers(cfg);
}

/// Tile the volume into disjoint crop-sized blocks and deal them out to the
/// three splits in shuffled order; cross-split voxel overlap is exactly zero
/// by construction.
inline BlockSplit partition_blocks(Dims3 dims, int crop, int n_train, int n_val, int n_test,
                                   std::uint64_t seed) {
    require(crop >= 1, Errc::invalid_config, "crop size must be positive");
    int tx = dims.nx / crop, ty = dims.ny / crop, tz = dims.nz / crop;
    std::size_t capacity = static_cast<std::size_t>(tx) * ty * tz;
    std::size_t wanted = static_cast<std::size_t>(n_train) + n_val + n_test;
    require(wanted <= capacity, Errc::insufficient_volume,
            "volume admits " + std::to_string(capacity) + " disjoint crops, " + std::to_string(wanted) +
                " requested");

    std::vector<std::array<int, 3>> tiles;
    tiles.reserve(capacity);
    for (int z = 0; z < tz; ++z)
        for (int y = 0; y < ty; ++y)
            for (int x = 0; x < tx; ++x) tiles.push_back({x * crop, y * crop, z * crop});
    Rng rng(seed);
    for (std::size_t i = tiles.size(); i > 1; --i) std::swap(tiles[i - 1], tiles[rng.index(i)]);

    BlockSplit split;
    split.crop_size = crop;
    std::size_t k = 0;
    for (int i = 0; i < n_train; ++i) split.train.push_back(tiles[k++]);
    for (int i = 0; i < n_val; ++i) split.val.push_back(tiles[k++]);
    for (int i = 0; i < n_test; ++i) split.test.push_back(tiles[k++]);
    return split;
}

inline VoxelVolume crop_volume(const VoxelVolume& v, std::array<int, 3> origin, Dims3 crop_dims) {
    require(origin[0] >= 0 && origin[1] >= 0 && origin[2] >= 0 && origin[0] + crop_dims.nx <= v.dims.nx &&
                origin[1] + crop_dims.ny <= v.dims.ny && origin[2] + crop_dims.nz <= v.dims.nz,
            Errc::dim_mismatch, "crop exceeds volume bounds");
    VoxelVolume out(crop_dims);
    for (int z = 0; z < crop_dims.nz; ++z)
        for (int y = 0; y < crop_dims.ny; ++y)
            for (int x = 0; x < crop_dims.nx; ++x)
                out.set(x, y, z, v.at(origin[0] + x, origin[1] + y, origin[2] + z));
    return out;
}

inline nlohmann::json block_split_to_json(const BlockSplit& s) {
    nlohmann::json j;
    j["crop_size"] = s.crop_size;
    for (const char* name : {"train", "val", "test"}) {
        const auto& list = std::string(name) == "train" ? s.train : (std::string(name) == "val" ? s.val : s.test);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& o : list) arr.push_back({o[0], o[1], o[2]});
        j[name] = arr;
    }
    return j;
}

inline BlockSplit block_split_from_json(const nlohmann::json& j) {
    BlockSplit s;
    s.crop_size = j.at("crop_size").get<int>();
    auto read = [&](const char* name, std::vector<std::array<int, 3>>& out) {
        for (const auto& e : j.at(name)) out.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    };
    read("train", s.train);
    read("val", s.val);
    read("test", s.test);
    return s;
}

}  // namespace porodiff
