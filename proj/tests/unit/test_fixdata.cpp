#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "sal/fixdata.hpp"
#include "sal/rng.hpp"

using namespace sal;
using namespace sal::fixdata;

namespace {

LoadResult parse(const std::string& body, const LoadOptions& o = {}) {
  std::istringstream in(std::string(kCsvHeader) + "\n" + body);
  return parse_fixations(in, o);
}

ScanPath path(const std::string& image, const std::string& who, std::vector<std::pair<double, double>> pts) {
  ScanPath sp{image, who, {}};
  int k = 1;
  for (auto [x, y] : pts) sp.fixations.push_back({image, who, k++, x, y, 200.0});
  return sp;
}

// Truncated Gaussian placed at (fx, fy), restricted to the canvas and
// renormalized to unit mass there.
Map kernel_oracle(Dims d, int fx, int fy, double sigma) {
  const int r = static_cast<int>(std::ceil(3 * sigma));
  Map m(d);
  double mass = 0.0;
  for (int y = fy - r; y <= fy + r; ++y)
    for (int x = fx - r; x <= fx + r; ++x) {
      if (x < 0 || y < 0 || x >= d.width || y >= d.height) continue;
      const double v = std::exp(-((x - fx) * (x - fx) + (y - fy) * (y - fy)) / (2 * sigma * sigma));
      m(x, y) = v;
      mass += v;
    }
  for (double& v : m.values()) v /= mass;
  return m;
}

double total(const Map& m) {
  double s = 0.0;
  for (double v : m.values()) s += v;
  return s;
}

}  // namespace

TEST(LoadFixations, ThreeRowsMakeOneScanPath) {
  const auto r = parse("a,p1,2,10,20,100\na,p1,1,5,6,150\na,p1,3,7,8,90\n");
  ASSERT_EQ(r.scanpaths.size(), 1u);
  const auto& f = r.scanpaths[0].fixations;
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0].index, 1);
  EXPECT_EQ(f[1].index, 2);
  EXPECT_DOUBLE_EQ(f[0].x, 5.0);
  EXPECT_EQ(r.warnings(), 0u);
}

TEST(LoadFixations, GroupsByImageAndParticipant) {
  const auto r = parse("b,p2,1,1,1,1\na,p1,1,1,1,1\na,p2,1,1,1,1\na,p1,2,3,3,1\n");
  ASSERT_EQ(r.scanpaths.size(), 3u);
  EXPECT_EQ(r.scanpaths[0].image_id, "a");
  EXPECT_EQ(r.scanpaths[0].participant_id, "p1");
  EXPECT_EQ(r.scanpaths[0].fixations.size(), 2u);
  EXPECT_EQ(r.scanpaths[2].image_id, "b");
}

TEST(LoadFixations, OutOfBoundsDroppedOrClamped) {
  LoadOptions o;
  o.default_dims = {100, 80};
  const auto dropped = parse("a,p,1,-5,10,1\na,p,2,50,50,1\na,p,3,100,10,1\n", o);
  EXPECT_EQ(dropped.dropped, 2u);
  ASSERT_EQ(dropped.scanpaths.size(), 1u);
  EXPECT_EQ(dropped.scanpaths[0].fixations.size(), 1u);

  o.policy = OutOfBounds::Clamp;
  const auto clamped = parse("a,p,1,-5,10,1\na,p,2,150,90,1\n", o);
  EXPECT_EQ(clamped.clamped, 2u);
  EXPECT_DOUBLE_EQ(clamped.scanpaths[0].fixations[0].x, 0.0);
  EXPECT_DOUBLE_EQ(clamped.scanpaths[0].fixations[1].x, 99.0);
  EXPECT_DOUBLE_EQ(clamped.scanpaths[0].fixations[1].y, 79.0);
}

TEST(LoadFixations, PerImageDimensions) {
  LoadOptions o;
  o.default_dims = {10, 10};
  o.dims_by_image["big"] = {1000, 1000};
  const auto r = parse("big,p,1,500,500,1\nsmall,p,1,500,500,1\n", o);
  EXPECT_EQ(r.dropped, 1u);
  ASSERT_EQ(r.scanpaths.size(), 1u);
  EXPECT_EQ(r.scanpaths[0].image_id, "big");
}

TEST(LoadFixations, DuplicateIndexIsRejected) {
  try {
    parse("a,p,1,1,1,1\na,p,1,2,2,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonMonotoneIndex);
  }
}

TEST(LoadFixations, MalformedRowsReportTheLine) {
  try {
    parse("a,p,1,1,1,1\na,p,2,abc,1,1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse("a,p,1,1,1\n"), ParseError);
  EXPECT_THROW(parse("a,p,0,1,1,1\n"), ParseError);
  EXPECT_THROW(parse("a,p,1,1,1,-3\n"), ParseError);
  std::istringstream bad_header("image,participant,index,x,y\n");
  EXPECT_THROW(parse_fixations(bad_header), ParseError);
}

TEST(LoadFixations, WriteThenLoadRoundTrips) {
  const auto file = std::filesystem::temp_directory_path() / "sal_fix_roundtrip.csv";
  const std::vector<ScanPath> paths{path("img", "p1", {{1.5, 2.25}, {30, 40}}), path("img", "p2", {{7, 8}})};
  write_fixations(file, paths);
  const auto r = load_fixations(file);
  ASSERT_EQ(r.scanpaths.size(), 2u);
  EXPECT_EQ(r.scanpaths[0].fixations.size(), 2u);
  EXPECT_DOUBLE_EQ(r.scanpaths[0].fixations[0].y, 2.25);
  std::filesystem::remove(file);
  EXPECT_THROW(load_fixations(file), Error);
}

TEST(FixationMap, SingleFixationAndAccumulation) {
  const std::vector<ScanPath> one{path("a", "p", {{10.7, 10.2}})};
  const auto m = fixation_map(one, {32, 32});
  EXPECT_EQ(m.counts(10, 10), 1u);
  EXPECT_EQ(m.total(), 1u);
  const std::vector<ScanPath> two{path("a", "p", {{3, 4}}), path("a", "q", {{3.9, 4.5}})};
  EXPECT_EQ(fixation_map(two, {8, 8}).counts(3, 4), 2u);
  EXPECT_EQ(fixation_map(std::vector<ScanPath>{}, {8, 8}).total(), 0u);
}

TEST(FixationMap, OrderInvariantAndBoundsChecked) {
  const std::vector<ScanPath> a{path("i", "p", {{1, 1}, {5, 6}}), path("i", "q", {{2, 7}, {1, 1}})};
  const std::vector<ScanPath> b{a[1], a[0]};
  EXPECT_EQ(fixation_map(a, {9, 9}).counts, fixation_map(b, {9, 9}).counts);
  try {
    fixation_map(a, {4, 4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(DensityMap, DefaultSigmaIsFortyPixels) { EXPECT_DOUBLE_EQ(DensityParams{}.sigma_px(), 40.0); }

TEST(DensityMap, SingleFixationEqualsShiftedKernel) {
  DensityParams p;
  p.sigma_deg = 0.1;  // 4 px
  const Dims d{64, 48};
  for (auto [x, y] : {std::pair{30, 20}, {0, 0}, {63, 47}, {2, 40}}) {
    const std::vector<ScanPath> one{path("a", "p", {{x + 0.5, y + 0.5}})};
    const Map m = density_map(fixation_map(one, d), p);
    const Map o = kernel_oracle(d, x, y, 4.0);
    for (std::size_t i = 0; i < m.size(); ++i) ASSERT_NEAR(m[i], o[i], 1e-12);
    EXPECT_NEAR(total(m), 1.0, 1e-9);
    EXPECT_EQ(std::max_element(m.values().begin(), m.values().end()) - m.values().begin(),
              static_cast<long>(y) * d.width + x);
  }
}

TEST(DensityMap, SumToOneHoldsForManyFixationsNearBorders) {
  Rng rng(3);
  std::vector<ScanPath> paths;
  for (int i = 0; i < 40; ++i)
    paths.push_back(path("a", "p" + std::to_string(i), {{uniform(rng, 0, 5), uniform(rng, 0, 99)}, {uniform(rng, 0, 120), 98.5}}));
  const Map m = density_map(fixation_map(paths, {120, 100}));
  EXPECT_NEAR(total(m), 1.0, 1e-9);
  for (double v : m.values()) EXPECT_GE(v, 0.0);
}

TEST(DensityMap, TwoSymmetricFixationsGiveEqualPeaks) {
  DensityParams p;
  p.sigma_deg = 0.05;
  const std::vector<ScanPath> paths{path("a", "p", {{20.5, 30.5}, {80.5, 30.5}})};
  const Map m = density_map(fixation_map(paths, {101, 61}), p);
  EXPECT_NEAR(m(20, 30), m(80, 30), 1e-9);
  EXPECT_GT(m(20, 30), m(50, 30));
}

TEST(DensityMap, MaxToOneAndEmptyMaps) {
  DensityParams p;
  p.normalization = Normalization::MaxToOne;
  const std::vector<ScanPath> paths{path("a", "p", {{5, 5}, {5, 5}, {12, 3}})};
  const Map m = density_map(fixation_map(paths, {20, 10}), p);
  EXPECT_EQ(*std::max_element(m.values().begin(), m.values().end()), 1.0);
  const auto empty = fixation_map(std::vector<ScanPath>{}, {20, 10});
  const Map z = density_map(empty, p);
  for (double v : z.values()) EXPECT_EQ(v, 0.0);
  try {
    density_map(empty, DensityParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyFixationMap);
  }
}

TEST(DensityMap, SerialAndParallelAgree) {
  const std::vector<ScanPath> paths{path("a", "p", {{5, 5}, {60, 33}, {12, 3}})};
  const auto f = fixation_map(paths, {70, 40});
  DensityParams p;
  p.sigma_deg = 0.2;
  EXPECT_EQ(density_map(f, p, kernels::Exec::Serial), density_map(f, p, kernels::Exec::Parallel));
}

TEST(SplitByGazeIndex, Counting) {
  const std::vector<ScanPath> two{path("a", "p", {{1, 1}, {2, 2}, {3, 3}}), path("a", "q", {{1, 1}, {2, 2}, {3, 3}})};
  const auto s = split_by_gaze_index(two, 3);
  ASSERT_EQ(s.size(), 3u);
  for (const auto& set : s) EXPECT_EQ(set.size(), 2u);
  const auto first = split_by_gaze_index(two, 1);
  ASSERT_EQ(first.size(), 1u);
  EXPECT_EQ(first[0].size(), 2u);

  const std::vector<ScanPath> ragged{path("a", "p", {{1, 1}, {2, 2}}),
                                     path("a", "q", {{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}})};
  const auto r = split_by_gaze_index(ragged, 5);
  std::vector<std::size_t> sizes;
  for (const auto& set : r) sizes.push_back(set.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{2, 2, 1, 1, 1}));
  EXPECT_THROW(split_by_gaze_index(ragged, 0), Error);
}

TEST(SplitByGazeIndex, PreservesCountUpToTruncation) {
  const std::vector<ScanPath> ragged{path("a", "p", {{1, 1}, {2, 2}}), path("b", "q", {{1, 1}, {2, 2}, {3, 3}, {4, 4}})};
  std::size_t n = 0;
  for (const auto& set : split_by_gaze_index(ragged, 3)) n += set.size();
  EXPECT_EQ(n, 5u);
  EXPECT_EQ(for_image(ragged, "b").size(), 1u);
}
