#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>

#include "../support/oracles.hpp"
#include "sal/image_io.hpp"
#include "sal/kernels.hpp"
#include "sal/metrics.hpp"
#include "sal/models.hpp"
#include "sal/stimgen.hpp"

using namespace sal;
using namespace sal::models;
namespace fs = std::filesystem;
using metrics::Pixel;

namespace {

using cplx = std::complex<double>;

// Direct 2D blur: every output pixel divides by the kernel mass inside the grid.
Map blur_oracle(const Map& in, double sigma) {
  const auto k = kernels::gaussian_taps(sigma);
  const int r = static_cast<int>(k.size()) / 2;
  Map out(in.dims());
  for (int y = 0; y < in.height(); ++y)
    for (int x = 0; x < in.width(); ++x) {
      double acc = 0, mass = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= in.width() || yy >= in.height()) continue;
          const double wgt = k[dx + r] * k[dy + r];
          acc += wgt * in(xx, yy);
          mass += wgt;
        }
      out(x, y) = acc / mass;
    }
  return out;
}

void minmax_oracle(Map& m) {
  double lo = m[0], hi = m[0];
  for (double v : m.values()) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double& v : m.values()) v = (v - lo) / (hi - lo);
}

std::vector<cplx> dft(const std::vector<cplx>& x, int w, int h, double sign) {
  std::vector<cplx> out(x.size());
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      cplx acc = 0;
      for (int y = 0; y < h; ++y)
        for (int xx = 0; xx < w; ++xx) {
          const double ph = sign * 2 * std::numbers::pi * (double(u) * xx / w + double(v) * y / h);
          acc += x[y * w + xx] * cplx(std::cos(ph), std::sin(ph));
        }
      out[v * w + u] = acc;
    }
  return out;
}

// Spectral residual computed with a naive DFT, for inputs at working size.
Map spectral_oracle(const Map& luma, double sigma, bool residual) {
  const int w = luma.width(), h = luma.height();
  std::vector<cplx> x(luma.values().begin(), luma.values().end());
  const auto f = dft(x, w, h, -1);
  double peak = 0;
  for (auto c : f) peak = std::max(peak, std::abs(c));
  const double fl = peak * 1e-10;
  std::vector<double> la(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) la[i] = std::log(std::max(std::abs(f[i]), fl));
  std::vector<cplx> g(f.size());
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      const int i = v * w + u;
      if (std::abs(f[i]) < fl) continue;
      double mean = 0;
      for (int dv = -1; dv <= 1; ++dv)
        for (int du = -1; du <= 1; ++du) mean += la[((v + dv + h) % h) * w + (u + du + w) % w] / 9;
      g[i] = std::polar(residual ? std::exp(la[i] - mean) : 1.0, std::arg(f[i]));
    }
  const auto b = dft(g, w, h, +1);
  Map e(luma.dims());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::norm(b[i]);
  Map out = blur_oracle(e, sigma);
  minmax_oracle(out);
  return out;
}

RgbImage random_rgb(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  RgbImage img(w, h);
  for (auto& b : img.bytes()) b = static_cast<std::uint8_t>(uniform_index(rng, 256));
  return img;
}

Pixel argmax(const Map& m) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < m.size(); ++i)
    if (m[i] > m[best]) best = i;
  return {int(best % m.width()), int(best / m.width())};
}

fs::path temp_dir(const std::string& name) {
  auto p = fs::temp_directory_path() / ("sal_models_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Center, MatchesClosedFormAndPeaksAtCenter) {
  const Map m = predict_center_gaussian({64, 64});
  const double sigma = std::hypot(64.0, 64.0) / 6.0;
  auto g = [&](double x, double y) {
    return std::exp(-((x - 31.5) * (x - 31.5) + (y - 31.5) * (y - 31.5)) / (2 * sigma * sigma));
  };
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) EXPECT_NEAR(m(x, y), g(x, y) / g(31, 31), 1e-12);

  const Map odd = predict_center_gaussian({65, 49});
  EXPECT_EQ(argmax(odd).x, 32);
  EXPECT_EQ(argmax(odd).y, 24);
  EXPECT_EQ(odd(32, 24), 1.0);

  const Map flat = predict_center_gaussian({40, 30}, 10.0);
  double lo = 1;
  for (double v : flat.values()) lo = std::min(lo, v);
  EXPECT_LT(1.0 / lo, 1.01);
}

TEST(Spectral, MatchesNaiveDftReference) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Map luma = oracle::random_map(24, 20, seed);
    EXPECT_LT(kernels::gaussian_taps(3.0).size(), 24u);
    const Map sr = predict_spectral_residual(luma);
    const Map pft = predict_pft(luma);
    const Map sr_ref = spectral_oracle(luma, 3.0, true);
    const Map pft_ref = spectral_oracle(luma, 3.0, false);
    for (std::size_t i = 0; i < sr.size(); ++i) {
      EXPECT_NEAR(sr[i], sr_ref[i], 1e-9);
      EXPECT_NEAR(pft[i], pft_ref[i], 1e-9);
    }
  }
}

TEST(Spectral, ConstantInputGivesFlatMap) {
  const RgbImage img(200, 150, Rgb{90, 120, 200});
  for (const Map& m : {predict_spectral_residual(img), predict_pft(img)}) {
    ASSERT_EQ(m.dims(), img.dims());
    double lo = 1, hi = 0;
    for (int y = 2; y < 148; ++y)
      for (int x = 2; x < 198; ++x) lo = std::min(lo, m(x, y)), hi = std::max(hi, m(x, y));
    EXPECT_LT(hi - lo, 0.05);
  }
}

TEST(Spectral, OutputRangeDeterminismAndGainInvariance) {
  const RgbImage img = random_rgb(96, 70, 4);
  const Map a = predict_spectral_residual(img), b = predict_spectral_residual(img);
  EXPECT_EQ(a, b);
  double lo = 1, hi = 0;
  for (double v : a.values()) lo = std::min(lo, v), hi = std::max(hi, v);
  EXPECT_EQ(lo, 0.0);
  EXPECT_EQ(hi, 1.0);

  const Map luma = to_luma(img);
  Map brighter = luma;
  for (double& v : brighter.values()) v *= 2.5;
  const Map s1 = predict_spectral_residual(luma), s2 = predict_spectral_residual(brighter);
  for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_NEAR(s1[i], s2[i], 1e-9);
}

TEST(Spectral, OddOneOutTargetWinsAtFinerWorkingWidth) {
  ModelConfig cfg;
  cfg.resize_width_px = 128;
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    stimgen::StimulusSpec spec;
    spec.block = 11;
    spec.subtype = 1;
    spec.psi = 7;
    spec.seed = seed;
    const auto s = stimgen::generate_stimulus(spec);
    const Pixel p = argmax(predict_spectral_residual(s.image, cfg));
    hits += s.aoi_mask(p.x, p.y) != 0;
  }
  EXPECT_GE(hits, 7);
}

TEST(Pft, IsolatedDotIsMostSalient) {
  RgbImage img(128, 96, Rgb{40, 40, 40});
  for (int y = 60; y < 64; ++y)
    for (int x = 30; x < 34; ++x) img.set(x, y, Rgb{250, 250, 250});
  ModelConfig cfg;
  cfg.resize_width_px = 128;
  const Pixel p = argmax(predict_pft(img, cfg));
  EXPECT_LE(std::abs(p.x - 31.5), 4.0);
  EXPECT_LE(std::abs(p.y - 61.5), 4.0);
}

TEST(Pft, BeatsCenterOnEasyColorSearch) {
  double pft_si = 0, center_si = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    stimgen::StimulusSpec spec;
    spec.block = 9;
    spec.subtype = 1;
    spec.psi = 7;
    spec.seed = seed;
    const auto s = stimgen::generate_stimulus(spec);
    pft_si += metrics::saliency_index(predict_pft(s.image), s.aoi_mask).value;
    center_si += metrics::saliency_index(predict_center_gaussian(s.image.dims()), s.aoi_mask).value;
  }
  EXPECT_GT(pft_si, center_si);
}

TEST(Dog, ConstantImageIsExactlyZero) {
  const RgbImage img(80, 60, Rgb{10, 200, 30});
  const Map m = predict_dog_contrast(img, ModelConfig{}.dog_scales);
  for (double v : m.values()) EXPECT_EQ(v, 0.0);
}

TEST(Dog, MatchesDirectOracleAtFullResolution) {
  const RgbImage img = random_rgb(16, 16, 12);
  const std::vector<ScalePair> scales{{1.0, 2.5}, {1.5, 4.0}};
  ModelConfig cfg;
  cfg.dog_width_px = 0;
  const Map m = predict_dog_contrast(img, scales, cfg);
  Map expect(16, 16);
  for (int ch = 0; ch < 3; ++ch) {
    Map c(16, 16);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        const Rgb p = img.at(x, y);
        const double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
        c(x, y) = ch == 0 ? (r + g + b) / 3 : ch == 1 ? r - g : b - (r + g) / 2;
      }
    for (const auto& s : scales) {
      const Map a = blur_oracle(c, s.center), b = blur_oracle(c, s.surround);
      for (std::size_t i = 0; i < expect.size(); ++i) expect[i] += std::abs(a[i] - b[i]);
    }
  }
  minmax_oracle(expect);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_NEAR(m[i], expect[i], 1e-6);
}

TEST(Dog, EdgesOutscoreInteriorAndBackground) {
  RgbImage img(64, 64);
  for (int y = 24; y < 40; ++y)
    for (int x = 24; x < 40; ++x) img.set(x, y, Rgb{255, 255, 255});
  ModelConfig cfg;
  cfg.dog_width_px = 0;
  const Map m = predict_dog_contrast(img, {{1.0, 3.0}}, cfg);
  EXPECT_GT(m(24, 32), m(32, 32));
  EXPECT_GT(m(24, 32), m(3, 3));
}

TEST(Dog, RejectsBadScales) {
  const RgbImage img(32, 32);
  for (const std::vector<ScalePair>& bad :
       {std::vector<ScalePair>{}, std::vector<ScalePair>{{2.0, 2.0}}, std::vector<ScalePair>{{3.0, 1.0}}}) {
    try {
      predict_dog_contrast(img, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BadScalePair);
    }
  }
}

TEST(Models, RejectTinyImages) {
  const RgbImage tiny(15, 40);
  EXPECT_EQ(make_predictor("center")->predict(tiny).dims(), tiny.dims());
  for (const auto& d : registry()) {
    if (d.id == "center") continue;
    try {
      make_predictor(d.id)->predict(tiny);
      FAIL() << d.id;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ImageTooSmall) << d.id;
    }
  }
}

TEST(Registry, ListsReferenceModels) {
  const auto reg = registry();
  ASSERT_EQ(reg.size(), 4u);
  for (const char* id : {"center", "sr", "pft", "dog"}) {
    EXPECT_TRUE(is_registered(id));
    EXPECT_EQ(make_predictor(id)->descriptor().id, id);
    EXPECT_NE(registry_listing().find(id), std::string::npos);
  }
  EXPECT_EQ(make_predictor("dog")->descriptor().inspiration, Inspiration::Cognitive);
  EXPECT_TRUE(make_predictor("sr")->descriptor().flags.global);
  try {
    make_predictor("no_such_model");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownModel);
  }
  const RgbImage img = random_rgb(48, 32, 1);
  for (const auto& d : reg) {
    const Map m = make_predictor(d.id)->predict(img);
    EXPECT_EQ(m.dims(), img.dims());
    for (double v : m.values()) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
  }
}

TEST(ExternalMaps, EightBitPngScalesTo01) {
  const auto dir = temp_dir("png8");
  Grid<std::uint8_t> g(20, 10);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<std::uint8_t>(i);
  io::write_png(dir / "m.png", g);
  const auto ext = load_external_map(dir / "m.png", {20, 10});
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(ext.map[i], g[i] / 255.0, 1e-12);
  EXPECT_EQ(ext.clamped, 0u);
}

TEST(ExternalMaps, LowerResolutionIsUpsampled) {
  const auto dir = temp_dir("half");
  Grid<std::uint8_t> g(8, 8);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<std::uint8_t>(3 * i);
  io::write_png(dir / "m.png", g);
  Map src(8, 8);
  for (std::size_t i = 0; i < g.size(); ++i) src[i] = g[i] / 255.0;
  const Map expect = kernels::resize_bilinear(src, {16, 16});
  const auto ext = load_external_map(dir / "m.png", {16, 16});
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(ext.map[i], expect[i], 1e-12);
}

TEST(ExternalMaps, NegativeFloatsAreClampedAndCounted) {
  const auto dir = temp_dir("f32");
  Map m(6, 4, 0.5);
  m[0] = -1.0;
  m[5] = -0.25;
  io::write_f32(dir / "m.f32", m);
  const auto ext = load_external_map(dir / "m.f32", {6, 4});
  EXPECT_EQ(ext.clamped, 2u);
  EXPECT_EQ(ext.map[0], 0.0);
  EXPECT_EQ(ext.map[5], 0.0);
  EXPECT_EQ(ext.map[1], 0.5);
  EXPECT_THROW(load_external_map(dir / "missing.png", {6, 4}), Error);
}
