#include <gtest/gtest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "sal/kernels.hpp"

using namespace sal;
namespace k = sal::kernels;

namespace {

class KernelsTest : public ::testing::Test {
 protected:
  void SetUp() override { k::set_num_threads(4); }
  void TearDown() override { k::set_num_threads(1); }
};

// Zero-padded 2D correlation with the outer product of kx and ky.
Map direct_convolve(const Map& in, const std::vector<double>& kx, const std::vector<double>& ky, bool renormalize) {
  const int rx = static_cast<int>(kx.size() / 2), ry = static_cast<int>(ky.size() / 2);
  Map out(in.dims());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x) {
      double acc = 0.0, mass = 0.0;
      for (int j = -ry; j <= ry; ++j)
        for (int i = -rx; i <= rx; ++i) {
          const int sx = x + i, sy = y + j;
          if (sx < 0 || sy < 0 || sx >= in.width() || sy >= in.height()) continue;
          const double w = kx[i + rx] * ky[j + ry];
          acc += w * in(sx, sy);
          mass += w;
        }
      out(x, y) = renormalize ? acc / mass : acc;
    }
  return out;
}

double max_abs_diff(const Map& a, const Map& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_F(KernelsTest, GaussianTapsAreNormalizedSymmetricAndTruncatedAtThreeSigma) {
  for (double sigma : {0.3, 1.0, 2.5, 7.0}) {
    const auto t = k::gaussian_taps(sigma);
    EXPECT_EQ(t.size(), 2 * static_cast<std::size_t>(std::ceil(3 * sigma)) + 1);
    double s = 0.0;
    for (double v : t) s += v;
    EXPECT_NEAR(s, 1.0, 1e-15);
    for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t[i], t[t.size() - 1 - i]);
  }
  EXPECT_THROW(k::gaussian_taps(0.0), Error);
}

TEST_F(KernelsTest, InBoundsMassCountsOnlyInteriorTaps) {
  const std::vector<double> taps{0.25, 0.5, 0.25};
  const auto m = k::in_bounds_mass(taps, 4);
  EXPECT_DOUBLE_EQ(m[0], 0.75);
  EXPECT_DOUBLE_EQ(m[1], 1.0);
  EXPECT_DOUBLE_EQ(m[3], 0.75);
  const auto single = k::in_bounds_mass(taps, 1);
  EXPECT_DOUBLE_EQ(single[0], 0.5);
}

TEST_F(KernelsTest, SeparableConvolutionMatchesDirectSum) {
  const Map in = oracle::random_map(23, 17, 1);
  const std::vector<double> kx{0.1, 0.2, 0.4, 0.2, 0.1}, ky{0.3, 0.5, 0.2};
  EXPECT_LT(max_abs_diff(k::separable_convolve(in, kx, ky), direct_convolve(in, kx, ky, false)), 1e-12);
}

TEST_F(KernelsTest, SeparableConvolutionSkipsZeroRowsWithoutChangingResult) {
  Map in(31, 29);
  in(3, 4) = 2.0;
  in(30, 28) = 1.0;
  const auto taps = k::gaussian_taps(2.0);
  EXPECT_LT(max_abs_diff(k::separable_convolve(in, taps, taps), direct_convolve(in, taps, taps, false)), 1e-15);
}

TEST_F(KernelsTest, NormalizedConvolutionMatchesDirectRenormalizedSum) {
  const Map in = oracle::random_map(19, 26, 2);
  const auto taps = k::gaussian_taps(3.0);
  EXPECT_LT(max_abs_diff(k::normalized_convolve(in, taps, taps), direct_convolve(in, taps, taps, true)), 1e-12);
}

TEST_F(KernelsTest, NormalizedConvolutionKeepsConstantsExactly) {
  const Map in(40, 33, 0.37);
  for (auto exec : {k::Exec::Serial, k::Exec::Parallel}) {
    const Map out = k::gaussian_blur(in, 4.0, exec);
    for (double v : out.values()) ASSERT_EQ(v, 0.37);
  }
}

TEST_F(KernelsTest, EvenKernelIsRejected) {
  const Map in(4, 4, 1.0);
  const std::vector<double> even{0.5, 0.5};
  EXPECT_THROW(k::separable_convolve(in, even, even), Error);
}

TEST_F(KernelsTest, BilinearResizeMatchesPixelCenterFormula) {
  const Map in = oracle::random_map(5, 4, 3);
  const Dims out_dims{9, 7};
  const Map out = k::resize_bilinear(in, out_dims);
  auto coord = [](int o, int n_in, int n_out) {
    return std::clamp((o + 0.5) * n_in / n_out - 0.5, 0.0, static_cast<double>(n_in - 1));
  };
  for (int y = 0; y < out_dims.height; ++y)
    for (int x = 0; x < out_dims.width; ++x) {
      const double sx = coord(x, 5, 9), sy = coord(y, 4, 7);
      const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
      const int x1 = std::min(x0 + 1, 4), y1 = std::min(y0 + 1, 3);
      const double fx = sx - x0, fy = sy - y0;
      const double expect = (1 - fy) * ((1 - fx) * in(x0, y0) + fx * in(x1, y0)) +
                            fy * ((1 - fx) * in(x0, y1) + fx * in(x1, y1));
      EXPECT_NEAR(out(x, y), expect, 1e-14);
    }
}

TEST_F(KernelsTest, BilinearResizeToSameDimsIsExactCopy) {
  const Map in = oracle::random_map(13, 8, 4);
  EXPECT_EQ(k::resize_bilinear(in, in.dims()), in);
}

TEST_F(KernelsTest, AreaDownscaleAveragesBlocks) {
  const Map in = oracle::random_map(12, 9, 5);
  const Map out = k::downscale_area(in, {4, 3});
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 4; ++x) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) s += in(3 * x + i, 3 * y + j);
      EXPECT_NEAR(out(x, y), s / 9.0, 1e-14);
    }
}

TEST_F(KernelsTest, AreaDownscalePreservesMeanForFractionalFactors) {
  const Map in = oracle::random_map(50, 37, 6);
  const Map out = k::downscale_area(in, {16, 11});
  double a = 0.0, b = 0.0;
  for (double v : in.values()) a += v;
  for (double v : out.values()) b += v;
  EXPECT_NEAR(a / in.size(), b / out.size(), 1e-12);
}

TEST_F(KernelsTest, ParallelKernelsAreBitIdenticalToSerial) {
  for (auto [w, h] : {std::pair{1, 1}, {7, 3}, {64, 65}, {211, 97}}) {
    const Map in = oracle::random_map(w, h, static_cast<std::uint64_t>(w * 1000 + h));
    const auto taps = k::gaussian_taps(2.2);
    const std::vector<double> ky{0.2, 0.6, 0.2};
    EXPECT_EQ(k::serial::separable_convolve(in, taps, ky), k::parallel::separable_convolve(in, taps, ky));
    EXPECT_EQ(k::serial::normalized_convolve(in, taps, ky), k::parallel::normalized_convolve(in, taps, ky));
    const Dims up{w * 2 + 1, h * 3};
    EXPECT_EQ(k::serial::resize_bilinear(in, up), k::parallel::resize_bilinear(in, up));
    const Dims down{std::max(1, w / 3), std::max(1, h / 2)};
    EXPECT_EQ(k::serial::downscale_area(in, down), k::parallel::downscale_area(in, down));
  }
}
