#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <queue>
#include <sstream>

#include "test_support.hpp"

using namespace gpair;

namespace {

double largest_component_fraction(const VolumeMask& m, const VoxelGrid& g) {
    std::vector<int> label(m.size(), -1);
    std::size_t total = 0, best = 0;
    for (std::size_t s = 0; s < m.size(); ++s) {
        if (!m[s]) continue;
        ++total;
        if (label[s] >= 0) continue;
        std::size_t n = 0;
        std::queue<std::size_t> q;
        q.push(s);
        label[s] = 1;
        while (!q.empty()) {
            const auto c = g.coords(q.front());
            q.pop();
            ++n;
            for (int dz = -1; dz <= 1; ++dz)
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int x = c[0] + dx, y = c[1] + dy, z = c[2] + dz;
                        if (!g.contains(x, y, z)) continue;
                        const std::size_t k = g.index(x, y, z);
                        if (m[k] && label[k] < 0) {
                            label[k] = 1;
                            q.push(k);
                        }
                    }
        }
        best = std::max(best, n);
    }
    return total ? static_cast<double>(best) / static_cast<double>(total) : 0.0;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("gpair_test_" + name)).string();
}

} // namespace

TEST(Phantom, DeterministicPerSeed) {
    const auto g = centered_grid({16, 16, 16}, 0.2e-3);
    for (auto kind : {PhantomKind::blobs, PhantomKind::tubes, PhantomKind::grid_of_points}) {
        PhantomSpec s;
        s.kind = kind;
        s.seed = 3;
        const auto a = generate_phantom(s, g);
        const auto b = generate_phantom(s, g);
        EXPECT_EQ(a.values, b.values);
        s.seed = 4;
        if (kind != PhantomKind::grid_of_points) {
            EXPECT_NE(generate_phantom(s, g).values, a.values);
        }
        for (double v : a.values) EXPECT_GE(v, 0.0);
        EXPECT_GT(*std::max_element(a.values.begin(), a.values.end()), 0.0);
    }
}

TEST(Phantom, TubesAreConnected) {
    const auto g = centered_grid({32, 32, 32}, 0.2e-3);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        PhantomSpec s;
        s.kind = PhantomKind::tubes;
        s.seed = seed;
        s.count = 3;
        const auto x = generate_phantom(s, g);
        EXPECT_GE(largest_component_fraction(threshold_mask(x), g), 0.9) << "seed " << seed;
    }
}

TEST(Phantom, GridOfPointsCount) {
    const auto g = centered_grid({20, 20, 20}, 0.2e-3);
    PhantomSpec s;
    s.kind = PhantomKind::grid_of_points;
    s.count = 3;
    const auto x = generate_phantom(s, g);
    EXPECT_EQ(std::count_if(x.values.begin(), x.values.end(), [](double v) { return v > 0.0; }), 27);
}

TEST(Phantom, KindNames) {
    EXPECT_EQ(phantom_kind_from_string("grid-of-points"), PhantomKind::grid_of_points);
    EXPECT_EQ(to_string(PhantomKind::tubes), "tubes");
    EXPECT_THROW(phantom_kind_from_string("cubes"), InvalidArgument);
}

TEST(Noise, StandardDeviationFollowsSnr) {
    const AcousticConfig ac{1500.0, 20e6, 20000, 0.0};
    SignalSet<double> s(ac, 2);
    s.data[5] = 4.0;
    auto noisy = s;
    add_noise_snr(noisy, 5.0, 9);
    double acc = 0.0;
    for (std::size_t k = 0; k < s.data.size(); ++k) acc += (noisy.data[k] - s.data[k]) * (noisy.data[k] - s.data[k]);
    EXPECT_NEAR(std::sqrt(acc / static_cast<double>(s.data.size())), 0.8, 0.01);
    auto again = s;
    add_noise_snr(again, 5.0, 9);
    EXPECT_EQ(again.data, noisy.data);
    EXPECT_THROW(add_noise_snr(noisy, 0.0, 1), InvalidArgument);
}

TEST(Projection, MaxProjectionSingleVoxel) {
    const VoxelGrid g{{4, 3, 2}, 1.0, {}};
    VoxelImage<double> x(g);
    x.at(2, 1, 1) = 5.0;
    const auto mz = max_projection(x, Axis::z);
    ASSERT_EQ(mz.rows, 3);
    ASSERT_EQ(mz.cols, 4);
    EXPECT_EQ(mz(1, 2), 5.0);
    EXPECT_EQ(std::count(mz.values.begin(), mz.values.end(), 0.0), 11);
    const auto mx = max_projection(x, Axis::x);
    EXPECT_EQ(mx.rows, 2);
    EXPECT_EQ(mx.cols, 3);
    EXPECT_EQ(mx(1, 1), 5.0);
}

TEST(Projection, SymmetricVolumeGivesEqualViews) {
    const VoxelGrid g{{5, 5, 5}, 1.0, {}};
    VoxelImage<double> x(g);
    for (int z = 0; z < 5; ++z)
        for (int y = 0; y < 5; ++y)
            for (int xx = 0; xx < 5; ++xx) x.at(xx, y, z) = std::exp(-0.3 * ((xx - 2) * (xx - 2) + (y - 2) * (y - 2) + (z - 2) * (z - 2)));
    const auto a = max_projection(x, Axis::x), b = max_projection(x, Axis::y), c = max_projection(x, Axis::z);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(b.values, c.values);
}

TEST(Projection, SliceRoundTrip) {
    const VoxelGrid g{{4, 3, 5}, 1.0, {}};
    const auto x = gpair::testing::random_image(g, 6);
    for (Axis ax : {Axis::x, Axis::y, Axis::z}) {
        VoxelImage<double> y = x;
        for (int i = 0; i < g.dims[static_cast<int>(ax)]; ++i) {
            auto sl = slice_extract(x, ax, i);
            slice_insert(y, ax, i, sl);
        }
        EXPECT_EQ(y.values, x.values);
    }
    EXPECT_EQ(slice_extract(x, Axis::y, 2)(4, 1), x.at(1, 2, 4));
    EXPECT_THROW(slice_extract(x, Axis::z, 5), InvalidArgument);
    EXPECT_THROW(axis_from_string("w"), InvalidArgument);
}

TEST(VolumeIo, RoundTripBothDtypes) {
    const VoxelGrid g{{5, 4, 3}, 0.1234567890123e-3, {-1e-3, 2.5e-4, 1.0 / 3.0}};
    const auto x = gpair::testing::random_image(g, 7, -2.0, 2.0);
    for (Dtype dt : {Dtype::f32, Dtype::f64}) {
        std::stringstream ss;
        write_volume(ss, g, x.values, dt);
        const auto f = read_volume(ss);
        EXPECT_EQ(f.grid, g);
        EXPECT_EQ(f.dtype, dt);
        for (std::size_t i = 0; i < g.size(); ++i)
            EXPECT_EQ(f.values[i], dt == Dtype::f64 ? x.values[i] : static_cast<double>(static_cast<float>(x.values[i])));
    }
}

TEST(SignalIo, RoundTripWithPositions) {
    const AcousticConfig ac{1512.5, 25e6, 64, 1e-6};
    const auto arr = build_hemispherical_array(0.05, {}, 7);
    SignalSet<double> s(ac, arr.size());
    s.data = gpair::testing::random_vector(s.data.size(), 8);
    for (Dtype dt : {Dtype::f32, Dtype::f64}) {
        std::stringstream ss;
        write_signals(ss, ac, arr.size(), s.data, dt, &arr);
        const auto f = read_signals(ss);
        EXPECT_EQ(f.acoustic.speed_of_sound, ac.speed_of_sound);
        EXPECT_EQ(f.acoustic.sampling_rate, ac.sampling_rate);
        EXPECT_EQ(f.acoustic.n_samples, ac.n_samples);
        EXPECT_EQ(f.acoustic.t0, ac.t0);
        ASSERT_TRUE(f.detectors.has_value());
        EXPECT_EQ(f.detectors->positions, arr.positions);
        EXPECT_EQ(f.detectors->label, arr.label);
        if (dt == Dtype::f64) {
            EXPECT_EQ(f.data, s.data);
        }
    }
    std::stringstream bare;
    write_signals(bare, ac, arr.size(), s.data, Dtype::f32);
    EXPECT_FALSE(read_signals(bare).detectors.has_value());
}

TEST(FileIo, CorruptInputsRejected) {
    const VoxelGrid g{{2, 2, 2}, 1e-3, {}};
    const std::vector<double> v(8, 1.0);
    std::stringstream ok;
    write_volume(ok, g, v, Dtype::f32);
    std::string bytes = ok.str();

    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    std::stringstream s1(bad_magic);
    EXPECT_THROW(read_volume(s1), FormatError);

    std::stringstream s2(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(read_volume(s2), FormatError);

    std::stringstream s3(bytes + "xx");
    EXPECT_THROW(read_volume(s3), FormatError);

    std::stringstream s4(bytes);
    EXPECT_THROW(read_signals(s4), FormatError);
}

TEST(FileIo, PathWritersAndRawExport) {
    const VoxelGrid g{{3, 2, 2}, 1e-3, {}};
    const auto x = gpair::testing::random_image(g, 9);
    const auto vol = temp_path("vol.gpv");
    write_volume(vol, x, Dtype::f64);
    const auto f = read_volume(vol);
    EXPECT_EQ(f.values, x.values);
    const auto raw = temp_path("vol.raw");
    export_raw_volume(f, raw);
    EXPECT_EQ(std::filesystem::file_size(raw), 12u * 8u);
    EXPECT_TRUE(std::filesystem::exists(raw + ".txt"));
    std::filesystem::remove(vol);
    std::filesystem::remove(raw);
    std::filesystem::remove(raw + ".txt");
}
