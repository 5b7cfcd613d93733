#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace gpair;
using gpair::testing::random_vector;
using gpair::testing::relative_l2;

namespace {

struct Setup {
    VoxelGrid grid;
    DetectorArray array;
    AcousticConfig ac;
    AssaParams assa;
};

Setup small_setup(int n = 8, int n_det = 16) {
    Setup s;
    s.grid = centered_grid({n, n, n}, 0.25e-3);
    s.array = build_hemispherical_array(0.012, {}, n_det);
    s.ac = AcousticConfig{1500.0, 20e6, 256, 0.0};
    s.assa = compute_assa(0.2e-3, s.ac);
    return s;
}

UpsampledBuffer<double> random_buffer(std::size_t nd, std::size_t len, std::uint64_t seed) {
    UpsampledBuffer<double> b(nd, len);
    b.data = random_vector(nd * len, seed);
    return b;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return inner_product<double>(a, b);
}

class ThreadCount {
public:
    explicit ThreadCount(unsigned n) : saved_(default_execution().threads) { default_execution().threads = n; }
    ~ThreadCount() { default_execution().threads = saved_; }

private:
    unsigned saved_;
};

} // namespace

TEST(ProjectUp, SingleVoxelLandsAtAlignedIndex) {
    const VoxelGrid g{{1, 1, 1}, 1e-3, {}};
    DetectorArray arr{{{0.0075, 0.0, 0.0}}};
    const AcousticConfig ac{1500.0, 20e6, 200, 0.0};
    const auto assa = compute_assa(62.5e-6, ac);
    const auto tof = build_tof_table(g, arr, ac, assa);
    const auto z = project_up(VoxelImage<double>(g, 3.0), tof, assa);
    ASSERT_EQ(z.length, 800u);
    for (std::size_t k = 0; k < z.length; ++k) EXPECT_EQ(z.data[k], k == 400 ? 3.0 / 0.0075 : 0.0);
}

TEST(ScatterConvolve, MatchesDirectConvolution) {
    const std::vector<double> taps{-0.5, 0.25, 0.0, -0.25, 0.5};
    const KernelTaps h(taps, 1.0, 1.0);
    const auto z = random_buffer(3, 17, 4);
    const auto out = scatter_convolve(z, h);
    for (std::size_t j = 0; j < 3; ++j) {
        const std::vector<double> zj(z.trace(j).begin(), z.trace(j).end());
        const auto ref = gpair::testing::direct_convolution(zj, taps);
        for (std::size_t k = 0; k < 17; ++k) EXPECT_NEAR(out.trace(j)[k], ref[k], 1e-15);
    }
}

TEST(ScatterConvolve, ImpulseReproducesReversedTaps) {
    const KernelTaps h({1.0, 2.0, 3.0}, 1.0, 1.0);
    UpsampledBuffer<double> z(1, 5);
    z.data[2] = 1.0;
    const auto out = scatter_convolve(z, h);
    // out[k] = h[k - 2]
    EXPECT_EQ(out.data, (std::vector<double>{0.0, 1.0, 2.0, 3.0, 0.0}));
    z.data = {1.0, 0.0, 0.0, 0.0, 0.0};
    EXPECT_EQ(scatter_convolve(z, h).data, (std::vector<double>{2.0, 3.0, 0.0, 0.0, 0.0}));
}

TEST(Correlate, IsTransposeOfConvolve) {
    for (const std::vector<double>& taps :
         {std::vector<double>{-0.5, 0.25, 0.0, -0.25, 0.5}, std::vector<double>{0.3, 1.0, 0.3}}) {
        const KernelTaps h(taps, 1.0, 1.0);
        const auto z = random_buffer(2, 23, 5);
        const auto u = random_buffer(2, 23, 6);
        const double lhs = dot(scatter_convolve(z, h).data, u.data);
        const double rhs = dot(z.data, correlate(u, h).data);
        EXPECT_NEAR(lhs, rhs, 1e-13 * std::abs(lhs) + 1e-14);
    }
}

TEST(Correlate, OddKernelEqualsNegatedConvolution) {
    const std::vector<double> taps{-0.5, 0.25, 0.0, -0.25, 0.5};
    std::vector<double> neg(taps.size());
    std::transform(taps.begin(), taps.end(), neg.begin(), [](double v) { return -v; });
    const auto u = random_buffer(2, 31, 7);
    const auto a = correlate(u, KernelTaps(taps, 1.0, 1.0));
    const auto b = scatter_convolve(u, KernelTaps(neg, 1.0, 1.0));
    for (std::size_t k = 0; k < a.data.size(); ++k) EXPECT_NEAR(a.data[k], b.data[k], 1e-15);
}

TEST(DecimateZeroFill, LeftInverse) {
    const AcousticConfig ac{1500.0, 20e6, 50, 0.0};
    const auto assa = compute_assa(62.5e-6, ac);
    SignalSet<double> y(ac, 3);
    y.data = random_vector(y.data.size(), 8);
    const auto up = zero_fill(y, assa);
    ASSERT_EQ(up.length, 200u);
    for (std::size_t k = 0; k < up.length; ++k)
        if (k % 4 != 0) {
            EXPECT_EQ(up.data[k], 0.0);
        }
    EXPECT_EQ(decimate(up, assa, ac).data, y.data);
    // <decimate(u), y> == <u, zero_fill(y)>
    const auto u = random_buffer(3, 200, 9);
    EXPECT_NEAR(dot(decimate(u, assa, ac).data, y.data), dot(u.data, up.data), 1e-13);
}

TEST(Backproject, TransposeOfProjectUp) {
    const auto s = small_setup();
    const auto tof = build_tof_table(s.grid, s.array, s.ac, s.assa);
    const auto x = gpair::testing::random_image(s.grid, 10);
    const auto u = random_buffer(s.array.size(), static_cast<std::size_t>(s.assa.n_t_up), 11);
    const double lhs = dot(project_up(x, tof, s.assa).data, u.data);
    const double rhs = dot(x.values, backproject(u, tof, s.grid).values);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs));
}

TEST(ForwardModel, DotTestDouble) {
    const auto s = small_setup();
    const auto rep = adjoint_dot_test<double>(s.grid, s.array, s.ac, s.assa, 5, 42);
    ASSERT_EQ(rep.discrepancies.size(), 5u);
    EXPECT_LE(rep.max_discrepancy, 1e-10);
}

TEST(ForwardModel, DotTestSingle) {
    const auto s = small_setup();
    const auto rep = adjoint_dot_test<float>(s.grid, s.array, s.ac, s.assa, 3, 42);
    EXPECT_LE(rep.max_discrepancy, 1e-4);
}

TEST(ForwardModel, DotTestDeterministicAndValidated) {
    const auto s = small_setup(4, 4);
    const ForwardModel m(s.grid, s.array, s.ac, s.assa);
    EXPECT_EQ(adjoint_dot_test<double>(m, 2, 7).discrepancies, adjoint_dot_test<double>(m, 2, 7).discrepancies);
    EXPECT_THROW(adjoint_dot_test<double>(m, 0, 7), InvalidArgument);
}

TEST(ForwardModel, Linearity) {
    const auto s = small_setup(5, 6);
    const ForwardModel m(s.grid, s.array, s.ac, s.assa);
    const auto x1 = gpair::testing::random_image(s.grid, 1);
    const auto x2 = gpair::testing::random_image(s.grid, 2);
    VoxelImage<double> c(s.grid);
    for (std::size_t i = 0; i < c.size(); ++i) c.values[i] = 1.5 * x1.values[i] - 0.5 * x2.values[i];
    const auto y1 = m.forward(x1), y2 = m.forward(x2), yc = m.forward(c);
    std::vector<double> expect(yc.data.size());
    for (std::size_t k = 0; k < expect.size(); ++k) expect[k] = 1.5 * y1.data[k] - 0.5 * y2.data[k];
    EXPECT_LE(relative_l2(yc.data, expect), 1e-12);
}

TEST(ForwardModel, PointSpreadPeaksAtSource) {
    const auto s = small_setup(9, 32);
    const ForwardModel m(s.grid, s.array, s.ac, s.assa);
    VoxelImage<double> e(s.grid);
    const std::size_t centre = s.grid.index(4, 4, 4);
    e.values[centre] = 1.0;
    const auto psf = m.adjoint(m.forward(e));
    const auto best = static_cast<std::size_t>(std::max_element(psf.values.begin(), psf.values.end()) -
                                               psf.values.begin());
    const auto c = s.grid.coords(best);
    EXPECT_LE(std::abs(c[0] - 4), 1);
    EXPECT_LE(std::abs(c[1] - 4), 1);
    EXPECT_LE(std::abs(c[2] - 4), 1);
}

TEST(ForwardModel, ThreadCountDoesNotChangeResults) {
    const auto s = small_setup(7, 12);
    const ForwardModel m(s.grid, s.array, s.ac, s.assa);
    const auto x = gpair::testing::random_image(s.grid, 3);
    SignalSet<double> d(s.ac, s.array.size());
    d.data = random_vector(d.data.size(), 4);
    SignalSet<double> y1, y8;
    VoxelImage<double> g1, g8;
    {
        ThreadCount t(1);
        y1 = m.forward(x);
        g1 = m.adjoint(d);
    }
    {
        ThreadCount t(8);
        y8 = m.forward(x);
        g8 = m.adjoint(d);
    }
    EXPECT_EQ(y1.data, y8.data);
    EXPECT_EQ(g1.values, g8.values);
}

TEST(ForwardModel, MaskedPairsContributeNothing) {
    const VoxelGrid g{{1, 1, 1}, 1e-3, {}};
    DetectorArray arr{{{0.2, 0.0, 0.0}}};
    const AcousticConfig ac{1500.0, 20e6, 100, 0.0};
    const ForwardModel m(g, arr, ac, 0.2e-3);
    EXPECT_EQ(m.tof().valid_count(), 0u);
    for (double v : m.forward(VoxelImage<double>(g, 1.0)).data) EXPECT_EQ(v, 0.0);
}
