#include <catch2/catch_amalgamated.hpp>

#include "porodiff/synth.hpp"

using namespace porodiff;

TEST_CASE("degenerate porosity targets are rejected", "[synth]") {
    SynthConfig cfg;
    cfg.target_porosity = 0.0;
    try {
        generate_boolean_spheres(cfg);
        FAIL("expected InvalidConfig");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_config);
    }
}

TEST_CASE("a single interior sphere covers the exact lattice ball", "[synth]") {
    // Stamp one radius-10 ball well inside a 64^3 volume and compare against
    // a direct lattice-point count.
    VoxelVolume v({64, 64, 64}, 0);
    std::array<double, 3> c = {32.0, 32.0, 32.0};
    std::size_t changed = 0;
    porodiff::detail::stamp_ball(v, c, 10.0, 1, changed);

    std::size_t oracle = 0;
    for (int z = 0; z < 64; ++z)
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) {
                double dx = x - c[0], dy = y - c[1], dz = z - c[2];
                if (dx * dx + dy * dy + dz * dz <= 100.0) ++oracle;
            }
    CHECK(oracle == 4169);  // lattice ball of radius 10
    CHECK(changed == oracle);
    CHECK(porosity(v) == 4169.0 / 262144.0);
}

TEST_CASE("sphere generation is deterministic and meets its target", "[synth]") {
    SynthConfig cfg;
    cfg.dims = {48, 48, 48};
    cfg.target_porosity = 0.3;
    cfg.radius_min = 3;
    cfg.radius_max = 6;
    cfg.seed = 99;
    VoxelVolume a = generate_boolean_spheres(cfg);
    VoxelVolume b = generate_boolean_spheres(cfg);
    CHECK(a == b);

    double phi = porosity(a);
    double one_ball = 4.0 / 3.0 * 3.14159265358979323846 * 7.0 * 7.0 * 7.0 / a.dims.size();
    CHECK(phi >= cfg.target_porosity);
    CHECK(phi <= cfg.target_porosity + one_ball);
}

TEST_CASE("fiber generation: zero fibers leaves an all-pore volume", "[synth]") {
    SynthConfig cfg;
    cfg.kind = SynthKind::fibers;
    cfg.dims = {32, 32, 32};
    cfg.target_porosity = 1.0;  // already satisfied before any placement
    VoxelVolume v = generate_fibers(cfg);
    CHECK(porosity(v) == 1.0);
}

TEST_CASE("a single axis-aligned fiber matches the capsule oracle", "[synth]") {
    VoxelVolume v({32, 32, 32}, 1);
    std::array<double, 3> point = {15.2, 16.7, 3.0};
    std::array<double, 3> axis = {0.0, 0.0, 1.0};
    std::size_t changed = stamp_fiber(v, point, axis, 3.0, 0);

    // Oracle: distance to a very long axis-aligned segment.
    std::size_t solid = 0;
    for (int z = 0; z < 32; ++z)
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) {
                double dx = x - point[0], dy = y - point[1];
                bool inside = dx * dx + dy * dy <= 9.0;
                if (inside) {
                    ++solid;
                    CHECK(v.at(x, y, z) == 0);
                } else {
                    CHECK(v.at(x, y, z) == 1);
                }
            }
    CHECK(changed == solid);
}

TEST_CASE("fiber generation is deterministic and monotone in porosity", "[synth]") {
    SynthConfig cfg;
    cfg.kind = SynthKind::fibers;
    cfg.dims = {32, 32, 32};
    cfg.target_porosity = 0.7;
    cfg.fiber_radius = 2.5;
    cfg.seed = 5;
    VoxelVolume a = generate_fibers(cfg);
    VoxelVolume b = generate_fibers(cfg);
    CHECK(a == b);
    CHECK(porosity(a) <= cfg.target_porosity);

    // a stricter target can only remove additional pore voxels
    cfg.target_porosity = 0.6;
    VoxelVolume c = generate_fibers(cfg);
    CHECK(porosity(c) <= porosity(a));
    for (std::size_t i = 0; i < a.data.size(); ++i)
        if (a.data[i] == 0) CHECK(c.data[i] == 0);
}

TEST_CASE("partition_blocks tiles an octant split with zero overlap", "[synth]") {
    BlockSplit s = partition_blocks({256, 256, 256}, 128, 4, 2, 2, 17);
    CHECK(s.train.size() == 4);
    CHECK(s.val.size() == 2);
    CHECK(s.test.size() == 2);

    // brute-force interval-intersection oracle over all cross-split pairs
    auto overlap = [&](const std::array<int, 3>& a, const std::array<int, 3>& b) {
        long v = 1;
        for (int k = 0; k < 3; ++k) {
            int lo = std::max(a[k], b[k]);
            int hi = std::min(a[k] + s.crop_size, b[k] + s.crop_size);
            v *= std::max(0, hi - lo);
        }
        return v;
    };
    for (const auto& a : s.train)
        for (const auto& b : s.val) CHECK(overlap(a, b) == 0);
    for (const auto& a : s.train)
        for (const auto& b : s.test) CHECK(overlap(a, b) == 0);
    for (const auto& a : s.val)
        for (const auto& b : s.test) CHECK(overlap(a, b) == 0);

    // deterministic in seed
    BlockSplit again = partition_blocks({256, 256, 256}, 128, 4, 2, 2, 17);
    CHECK(again.train == s.train);
    CHECK(again.val == s.val);
    CHECK(again.test == s.test);

    // JSON round-trip
    BlockSplit back = block_split_from_json(block_split_to_json(s));
    CHECK(back.crop_size == s.crop_size);
    CHECK(back.train == s.train);
    CHECK(back.val == s.val);
    CHECK(back.test == s.test);
}

TEST_CASE("partition_blocks rejects requests beyond capacity", "[synth]") {
    try {
        partition_blocks({256, 256, 256}, 128, 7, 1, 1, 0);
        FAIL("expected InsufficientVolume");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_volume);
    }
}
