#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "porodiff/voxel.hpp"

namespace porodiff {

constexpr int kNodeNull = 0;
constexpr int kNodeActive = 1;
constexpr int kEdgeNull = 0;
constexpr int kEdgeThroat = 1;

/// Mixed graph state over fixed node slots: per-slot geometry (x, y, z, r),
/// categorical node states, and categorical edge states over all unordered
/// slot pairs. Coordinates are normalized to [0,1] by (extent-1) per axis;
/// radii are normalized by the maximum extent. Null slots carry the zero
/// geometry vector and only null incident edges.
struct PoreGraph {
    int n_max = 0;
    std::vector<double> geometry;      // n_max x 4
    std::vector<std::uint8_t> nodes;   // n_max
    std::vector<std::uint8_t> edges;   // n_max*(n_max-1)/2, pairs i<j

    PoreGraph() = default;
    explicit PoreGraph(int n)
        : n_max(n),
          geometry(static_cast<std::size_t>(n) * 4, 0.0),
          nodes(static_cast<std::size_t>(n), kNodeNull),
          edges(static_cast<std::size_t>(n) * (n - 1) / 2, kEdgeNull) {}

    static std::size_t edge_index(int n_max, int i, int j) {
        if (i > j) std::swap(i, j);
        return static_cast<std::size_t>(i) * n_max - static_cast<std::size_t>(i) * (i + 1) / 2 + (j - i - 1);
    }
    std::size_t eidx(int i, int j) const { return edge_index(n_max, i, j); }
    std::size_t edge_count() const { return edges.size(); }

    double* node_geometry(int i) { return geometry.data() + static_cast<std::size_t>(i) * 4; }
    const double* node_geometry(int i) const { return geometry.data() + static_cast<std::size_t>(i) * 4; }

    int active_count() const {
        int n = 0;
        for (auto c : nodes) n += c == kNodeActive;
        return n;
    }
    int throat_count() const {
        int n = 0;
        for (auto e : edges) n += e == kEdgeThroat;
        return n;
    }
    bool operator==(const PoreGraph&) const = default;
};

struct ExtractionConfig {
    int v_min = 16;        // minimum pore-body voxel count
    int connectivity = 6;  // pore-phase adjacency rule
    int n_max = 128;

    void validate() const {
        require(v_min >= 1, Errc::invalid_config, "v_min must be >= 1");
        require(connectivity == 6 || connectivity == 26, Errc::invalid_config, "connectivity must be 6 or 26");
        require(n_max >= 64 && n_max % 64 == 0, Errc::invalid_config, "n_max must be a positive multiple of 64");
    }
};

/// Radius of the sphere whose volume equals `voxel_count`.
inline double equivalent_radius(std::size_t voxel_count) {
    require(voxel_count >= 1, Errc::empty_input, "voxel_count must be positive");
    return std::cbrt(3.0 * static_cast<double>(voxel_count) / (4.0 * 3.14159265358979323846));
}

/// One watershed region, already in normalized coordinates. `label` is the
/// region id in the label volume, used as the final ordering tie-break.
struct RegionNode {
    double x = 0, y = 0, z = 0, r = 0;
    std::size_t voxel_count = 0;
    std::uint32_t label = 0;
};

namespace detail {

inline std::array<double, 4> canonical_key(const RegionNode& n) { return {n.z, n.y, n.x, n.r}; }

}  // namespace detail

/// Keep the n_max largest regions by voxel count (ties broken by canonical
/// order), place them in canonical slot order, pad the rest with null slots.
inline PoreGraph pad_truncate(std::vector<RegionNode> regions,
                              std::vector<std::pair<std::uint32_t, std::uint32_t>> adjacency, int n_max) {
    auto key_less = [](const RegionNode& a, const RegionNode& b) {
        auto ka = detail::canonical_key(a), kb = detail::canonical_key(b);
        if (ka != kb) return ka < kb;
        return a.label < b.label;
    };
    if (static_cast<int>(regions.size()) > n_max) {
        std::sort(regions.begin(), regions.end(), [&](const RegionNode& a, const RegionNode& b) {
            if (a.voxel_count != b.voxel_count) return a.voxel_count > b.voxel_count;
            return key_less(a, b);
        });
        regions.resize(static_cast<std::size_t>(n_max));
    }
    std::sort(regions.begin(), regions.end(), key_less);

    PoreGraph g(n_max);
    std::vector<int> label_to_slot;
    for (int slot = 0; slot < static_cast<int>(regions.size()); ++slot) {
        const RegionNode& rn = regions[slot];
        g.nodes[slot] = kNodeActive;
        double* b = g.node_geometry(slot);
        b[0] = rn.x;
        b[1] = rn.y;
        b[2] = rn.z;
        b[3] = rn.r;
        if (rn.label >= label_to_slot.size()) label_to_slot.resize(rn.label + 1, -1);
        label_to_slot[rn.label] = slot;
    }
    for (auto [la, lb] : adjacency) {
        int sa = la < label_to_slot.size() ? label_to_slot[la] : -1;
        int sb = lb < label_to_slot.size() ? label_to_slot[lb] : -1;
        if (sa < 0 || sb < 0 || sa == sb) continue;  // dropped by truncation
        g.edges[g.eidx(sa, sb)] = kEdgeThroat;
    }
    return g;
}

/// Re-sort active slots lexicographically by (z, y, x, r); null slots go
/// last. Idempotent; edge labels are permuted consistently.
inline PoreGraph canonical_order(const PoreGraph& g) {
    std::vector<int> active;
    for (int i = 0; i < g.n_max; ++i)
        if (g.nodes[i] == kNodeActive) active.push_back(i);
    std::sort(active.begin(), active.end(), [&](int a, int b) {
        const double* pa = g.node_geometry(a);
        const double* pb = g.node_geometry(b);
        auto ka = std::array<double, 4>{pa[2], pa[1], pa[0], pa[3]};
        auto kb = std::array<double, 4>{pb[2], pb[1], pb[0], pb[3]};
        if (ka != kb) return ka < kb;
        return a < b;
    });
    PoreGraph out(g.n_max);
    std::vector<int> old_to_new(g.n_max, -1);
    for (int s = 0; s < static_cast<int>(active.size()); ++s) {
        int old = active[s];
        old_to_new[old] = s;
        out.nodes[s] = kNodeActive;
        std::copy(g.node_geometry(old), g.node_geometry(old) + 4, out.node_geometry(s));
    }
    for (int i = 0; i < g.n_max; ++i)
        for (int j = i + 1; j < g.n_max; ++j) {
            if (g.edges[g.eidx(i, j)] != kEdgeThroat) continue;
            int a = old_to_new[i], b = old_to_new[j];
            if (a < 0 || b < 0) continue;  // edges on null slots stay null
            out.edges[out.eidx(a, b)] = kEdgeThroat;
        }
    return out;
}

/// Rule for sizing the slot count from a population of active node counts:
/// nearest-rank 99th percentile, rounded up to the nearest multiple of 64.
inline int select_nmax(const std::vector<int>& active_counts) {
    require(!active_counts.empty(), Errc::empty_input, "active_counts is empty");
    std::vector<int> sorted = active_counts;
    std::sort(sorted.begin(), sorted.end());
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(0.99 * static_cast<double>(sorted.size())));  // 1-indexed nearest rank
    int p99 = sorted[rank - 1];
    int blocks = (p99 + 63) / 64;
    return std::max(1, blocks) * 64;
}

struct ExtractionResult {
    PoreGraph graph;
    LabelVolume labels;                       // watershed regions, 0 = background
    std::vector<std::size_t> region_sizes;    // voxel count per region label (1-based)
    std::size_t surviving_pore_voxels = 0;    // pore voxels after v_min filtering
};

/// Distance-transform-seeded watershed extraction of the pore graph.
/// Seeds are 26-neighborhood local maxima of the pore EDT (one seed per
/// equal-value plateau, at its raster-minimal voxel); flooding proceeds in
/// decreasing-EDT order with raster-index tie-breaks, so the decomposition
/// is bit-reproducible. Throats join regions that share a 6-adjacent pore
/// interface.
inline ExtractionResult extract_pore_graph(const VoxelVolume& v, const ExtractionConfig& cfg) {
    cfg.validate();
    const Dims3& d = v.dims;

    // 1. drop pore components below the volume threshold
    auto [components, comp_count] = connected_components(v, 1, cfg.connectivity);
    std::vector<std::size_t> comp_sizes(comp_count + 1, 0);
    for (std::size_t i = 0; i < d.size(); ++i) ++comp_sizes[components.data[i]];
    VoxelVolume work = v;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (v.data[i] == 1 && comp_sizes[components.data[i]] < static_cast<std::size_t>(cfg.v_min))
            work.data[i] = 0;

    ExtractionResult res;
    res.labels = LabelVolume(d);
    for (std::uint8_t b : work.data) res.surviving_pore_voxels += b;

    // 2. pore-phase EDT
    DistanceField dist = edt(work, 1);

    // 3. seeds: plateau-merged local maxima
    const auto& n26 = detail::neighbors26();
    std::vector<std::uint8_t> candidate(d.size(), 0);
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x) {
                std::size_t i = d.index(x, y, z);
                if (work.data[i] != 1) continue;
                bool is_max = true;
                for (const auto& o : n26) {
                    int nx = x + o[0], ny = y + o[1], nz = z + o[2];
                    if (!d.contains(nx, ny, nz)) continue;
                    if (dist.data[d.index(nx, ny, nz)] > dist.data[i]) {
                        is_max = false;
                        break;
                    }
                }
                candidate[i] = is_max;
            }
    // plateau components over equal-EDT candidates; the raster-first voxel
    // of each component becomes its seed
    std::vector<std::size_t> seeds;
    {
        std::vector<std::uint8_t> visited(d.size(), 0);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (!candidate[i] || visited[i]) continue;
            seeds.push_back(i);
            visited[i] = 1;
            stack.push_back(i);
            while (!stack.empty()) {
                std::size_t cur = stack.back();
                stack.pop_back();
                int cx = static_cast<int>(cur % d.nx);
                int cy = static_cast<int>((cur / d.nx) % d.ny);
                int cz = static_cast<int>(cur / (static_cast<std::size_t>(d.nx) * d.ny));
                for (const auto& o : n26) {
                    int nx = cx + o[0], ny = cy + o[1], nz = cz + o[2];
                    if (!d.contains(nx, ny, nz)) continue;
                    std::size_t ni = d.index(nx, ny, nz);
                    if (candidate[ni] && !visited[ni] && dist.data[ni] == dist.data[cur]) {
                        visited[ni] = 1;
                        stack.push_back(ni);
                    }
                }
            }
        }
    }

    // 4. priority flood: highest EDT first, raster index breaks ties
    struct QEntry {
        double priority;
        std::size_t voxel;
        std::uint32_t region;
    };
    auto cmp = [](const QEntry& a, const QEntry& b) {
        if (a.priority != b.priority) return a.priority < b.priority;
        return a.voxel > b.voxel;
    };
    std::priority_queue<QEntry, std::vector<QEntry>, decltype(cmp)> queue(cmp);
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        std::uint32_t region = static_cast<std::uint32_t>(s + 1);
        res.labels.data[seeds[s]] = region;
        queue.push({dist.data[seeds[s]], seeds[s], region});
    }
    const auto& n6 = detail::neighbors6();
    const int flood_n = cfg.connectivity == 6 ? 6 : 26;
    while (!queue.empty()) {
        QEntry e = queue.top();
        queue.pop();
        int cx = static_cast<int>(e.voxel % d.nx);
        int cy = static_cast<int>((e.voxel / d.nx) % d.ny);
        int cz = static_cast<int>(e.voxel / (static_cast<std::size_t>(d.nx) * d.ny));
        for (int k = 0; k < flood_n; ++k) {
            const auto& o = cfg.connectivity == 6 ? n6[k] : n26[k];
            int nx = cx + o[0], ny = cy + o[1], nz = cz + o[2];
            if (!d.contains(nx, ny, nz)) continue;
            std::size_t ni = d.index(nx, ny, nz);
            if (work.data[ni] != 1 || res.labels.data[ni] != 0) continue;
            res.labels.data[ni] = e.region;
            queue.push({dist.data[ni], ni, e.region});
        }
    }

    // 5. per-region centroid and equivalent radius
    std::size_t n_regions = seeds.size();
    res.region_sizes.assign(n_regions + 1, 0);
    std::vector<std::array<double, 3>> centroid_sum(n_regions + 1, {0, 0, 0});
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x) {
                std::uint32_t r = res.labels.data[d.index(x, y, z)];
                if (r == 0) continue;
                ++res.region_sizes[r];
                centroid_sum[r][0] += x;
                centroid_sum[r][1] += y;
                centroid_sum[r][2] += z;
            }

    // 6. throats: regions sharing a 6-adjacent pore interface
    std::set<std::pair<std::uint32_t, std::uint32_t>> adjacency;
    for (int z = 0; z < d.nz; ++z)
        for (int y = 0; y < d.ny; ++y)
            for (int x = 0; x < d.nx; ++x) {
                std::uint32_t a = res.labels.data[d.index(x, y, z)];
                if (a == 0) continue;
                const int step[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
                for (const auto& o : step) {
                    int nx = x + o[0], ny = y + o[1], nz = z + o[2];
                    if (!d.contains(nx, ny, nz)) continue;
                    std::uint32_t b = res.labels.data[d.index(nx, ny, nz)];
                    if (b == 0 || b == a) continue;
                    adjacency.emplace(std::min(a, b), std::max(a, b));
                }
            }

    // 7./8. normalize geometry, order canonically, pad/truncate
    auto norm = [](double value, int extent) { return extent > 1 ? value / (extent - 1) : 0.0; };
    std::vector<RegionNode> nodes;
    for (std::uint32_t r = 1; r <= n_regions; ++r) {
        RegionNode rn;
        rn.voxel_count = res.region_sizes[r];
        rn.x = norm(centroid_sum[r][0] / static_cast<double>(rn.voxel_count), d.nx);
        rn.y = norm(centroid_sum[r][1] / static_cast<double>(rn.voxel_count), d.ny);
        rn.z = norm(centroid_sum[r][2] / static_cast<double>(rn.voxel_count), d.nz);
        rn.r = equivalent_radius(rn.voxel_count) / static_cast<double>(d.max_extent());
        rn.label = r;
        nodes.push_back(rn);
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list(adjacency.begin(), adjacency.end());
    res.graph = pad_truncate(std::move(nodes), std::move(edge_list), cfg.n_max);
    return res;
}

// ---------------------------------------------------------------------------
// JSON serialization: active nodes listed per slot, only non-null edges.
// ---------------------------------------------------------------------------

inline nlohmann::json pore_graph_to_json(const PoreGraph& g) {
    nlohmann::json j;
    j["n_max"] = g.n_max;
    nlohmann::json nodes = nlohmann::json::array();
    for (int i = 0; i < g.n_max; ++i) {
        if (g.nodes[i] == kNodeNull) continue;
        const double* b = g.node_geometry(i);
        nodes.push_back({{"slot", i}, {"state", g.nodes[i]}, {"x", b[0]}, {"y", b[1]}, {"z", b[2]}, {"r", b[3]}});
    }
    j["nodes"] = nodes;
    nlohmann::json edges = nlohmann::json::array();
    for (int i = 0; i < g.n_max; ++i)
        for (int jn = i + 1; jn < g.n_max; ++jn)
            if (g.edges[g.eidx(i, jn)] != kEdgeNull)
                edges.push_back({{"i", i}, {"j", jn}, {"state", g.edges[g.eidx(i, jn)]}});
    j["edges"] = edges;
    return j;
}

inline PoreGraph pore_graph_from_json(const nlohmann::json& j) {
    PoreGraph g(j.at("n_max").get<int>());
    for (const auto& n : j.at("nodes")) {
        int slot = n.at("slot").get<int>();
        require(slot >= 0 && slot < g.n_max, Errc::dim_mismatch, "node slot out of range");
        g.nodes[slot] = n.at("state").get<std::uint8_t>();
        double* b = g.node_geometry(slot);
        b[0] = n.at("x").get<double>();
        b[1] = n.at("y").get<double>();
        b[2] = n.at("z").get<double>();
        b[3] = n.at("r").get<double>();
    }
    for (const auto& e : j.at("edges")) {
        int a = e.at("i").get<int>(), b = e.at("j").get<int>();
        require(a >= 0 && b >= 0 && a < g.n_max && b < g.n_max && a != b, Errc::dim_mismatch,
                "edge endpoints out of range");
        g.edges[g.eidx(a, b)] = e.at("state").get<std::uint8_t>();
    }
    return g;
}

/// Apply a slot permutation: node (and incident edge) data of slot i moves
/// to slot perm[i].
inline PoreGraph apply_slot_permutation(const PoreGraph& g, const std::vector<int>& perm) {
    require(static_cast<int>(perm.size()) == g.n_max, Errc::shape_mismatch, "permutation size != n_max");
    PoreGraph out(g.n_max);
    for (int i = 0; i < g.n_max; ++i) {
        out.nodes[perm[i]] = g.nodes[i];
        std::copy(g.node_geometry(i), g.node_geometry(i) + 4, out.node_geometry(perm[i]));
    }
    for (int i = 0; i < g.n_max; ++i)
        for (int j = i + 1; j < g.n_max; ++j)
            out.edges[out.eidx(perm[i], perm[j])] = g.edges[g.eidx(i, j)];
    return out;
}

}  // namespace porodiff
