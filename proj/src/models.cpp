#include "sal/models.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <sstream>

#include "sal/image_io.hpp"
#include "sal/kernels.hpp"

namespace sal::models {

namespace {

// FFTW planning is not thread-safe; execution with new-array execute is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

using cplx = std::complex<double>;

class Fft2d {
 public:
  Fft2d(int width, int height) : w_(width), h_(height) {
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    a_ = fftw_alloc_complex(n);
    b_ = fftw_alloc_complex(n);
    std::lock_guard lock(plan_mutex());
    fwd_ = fftw_plan_dft_2d(h_, w_, a_, b_, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_2d(h_, w_, a_, b_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft2d() {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(a_);
    fftw_free(b_);
  }
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  std::vector<cplx> forward(const std::vector<cplx>& x) { return run(fwd_, x); }
  // Unscaled, as FFTW computes it; callers square magnitudes and renormalize.
  std::vector<cplx> inverse(const std::vector<cplx>& x) { return run(inv_, x); }

 private:
  std::vector<cplx> run(fftw_plan plan, const std::vector<cplx>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      a_[i][0] = x[i].real();
      a_[i][1] = x[i].imag();
    }
    fftw_execute_dft(plan, a_, b_);
    std::vector<cplx> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = {b_[i][0], b_[i][1]};
    return out;
  }

  int w_, h_;
  fftw_complex* a_ = nullptr;
  fftw_complex* b_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

void require_size(Dims d) {
  if (d.width < kMinImageSide || d.height < kMinImageSide)
    throw Error(ErrorCode::ImageTooSmall, "image must be at least 16x16 pixels");
}

Dims working_dims(Dims in, int width) {
  if (width <= 0 || in.width <= width) return in;
  const int h = std::max(1, static_cast<int>(std::lround(static_cast<double>(in.height) * width / in.width)));
  return {width, h};
}

// Spectral saliency shared by SR and PFT.
Map spectral_saliency(const Map& luma, const ModelConfig& config, bool residual) {
  config.validate();
  require_size(luma.dims());
  const Dims wd = working_dims(luma.dims(), config.resize_width_px);
  const Map small = kernels::downscale_area(luma, wd);
  const int w = wd.width, h = wd.height;
  const std::size_t n = small.size();

  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = small[i];
  Fft2d fft(w, h);
  const auto f = fft.forward(x);

  double peak = 0.0;
  for (const auto& c : f) peak = std::max(peak, std::abs(c));
  // Coefficients at round-off level carry no structure; they are dropped
  // rather than amplified by the log/exp round trip.
  const double floor_amp = std::max(peak, 1e-300) * 1e-10;

  std::vector<double> log_amp(n);
  for (std::size_t i = 0; i < n; ++i) log_amp[i] = std::log(std::max(std::abs(f[i]), floor_amp));

  std::vector<cplx> g(n);
  for (int v = 0; v < h; ++v) {
    for (int u = 0; u < w; ++u) {
      const std::size_t i = static_cast<std::size_t>(v) * w + u;
      const double amp = std::abs(f[i]);
      if (amp < floor_amp) {
        g[i] = 0.0;
        continue;
      }
      double scale = 1.0;
      if (residual) {
        double box = 0.0;
        for (int dv = -1; dv <= 1; ++dv)
          for (int du = -1; du <= 1; ++du) {
            const int vv = (v + dv + h) % h, uu = (u + du + w) % w;
            box += log_amp[static_cast<std::size_t>(vv) * w + uu];
          }
        scale = std::exp(log_amp[i] - box / 9.0);
      }
      g[i] = f[i] / amp * scale;
    }
  }

  const auto back = fft.inverse(g);
  Map energy(wd);
  for (std::size_t i = 0; i < n; ++i) energy[i] = std::norm(back[i]);

  Map smooth = kernels::gaussian_blur(energy, config.smoothing_sigma_px);
  Map out = kernels::resize_bilinear(smooth, luma.dims());
  normalize_min_max(out);
  return out;
}

struct Channels {
  Map intensity, rg, by;
};

Channels opponent_channels(const RgbImage& image) {
  Channels c{Map(image.dims()), Map(image.dims()), Map(image.dims())};
  std::size_t i = 0;
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x, ++i) {
      const Rgb p = image.at(x, y);
      const double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
      c.intensity[i] = (r + g + b) / 3.0;
      c.rg[i] = r - g;
      c.by[i] = b - (r + g) / 2.0;
    }
  return c;
}

class CenterPredictor final : public Predictor {
 public:
  explicit CenterPredictor(ModelConfig c) : config_(std::move(c)) {}
  const PredictorDescriptor& descriptor() const override { return desc_; }
  Map predict(const RgbImage& image) const override {
    return predict_center_gaussian(image.dims(), config_.center_sigma_frac);
  }

 private:
  ModelConfig config_;
  PredictorDescriptor desc_{"center", Inspiration::Baseline, {true, false}, "center Gaussian baseline"};
};

class SpectralPredictor final : public Predictor {
 public:
  SpectralPredictor(ModelConfig c, bool residual)
      : config_(std::move(c)),
        residual_(residual),
        desc_{residual ? "sr" : "pft", Inspiration::Spectral, {true, false},
              residual ? "spectral residual" : "phase spectrum of Fourier transform"} {}
  const PredictorDescriptor& descriptor() const override { return desc_; }
  Map predict(const RgbImage& image) const override {
    return residual_ ? predict_spectral_residual(image, config_) : predict_pft(image, config_);
  }

 private:
  ModelConfig config_;
  bool residual_;
  PredictorDescriptor desc_;
};

class DogPredictor final : public Predictor {
 public:
  explicit DogPredictor(ModelConfig c) : config_(std::move(c)) {}
  const PredictorDescriptor& descriptor() const override { return desc_; }
  Map predict(const RgbImage& image) const override {
    return predict_dog_contrast(image, config_.dog_scales, config_);
  }

 private:
  ModelConfig config_;
  PredictorDescriptor desc_{"dog", Inspiration::Cognitive, {false, true},
                            "difference-of-Gaussians color/intensity contrast"};
};

}  // namespace

const char* to_string(Inspiration i) {
  switch (i) {
    case Inspiration::Cognitive: return "Cognitive";
    case Inspiration::InfoTheoretic: return "InfoTheoretic";
    case Inspiration::Probabilistic: return "Probabilistic";
    case Inspiration::Spectral: return "Spectral";
    case Inspiration::DeepLearning: return "DeepLearning";
    case Inspiration::Baseline: return "Baseline";
  }
  return "?";
}

void ModelConfig::validate() const {
  if (resize_width_px < kMinImageSide) throw Error(ErrorCode::InvalidArgument, "resize_width_px must be >= 16");
  if (!(smoothing_sigma_px > 0.0)) throw Error(ErrorCode::InvalidArgument, "smoothing_sigma_px must be > 0");
  if (!(center_sigma_frac > 0.0)) throw Error(ErrorCode::InvalidArgument, "center_sigma_frac must be > 0");
  if (dog_width_px != 0 && dog_width_px < kMinImageSide)
    throw Error(ErrorCode::InvalidArgument, "dog_width_px must be 0 or >= 16");
  (void)dog_response(Map(1, 1), dog_scales);  // BadScalePair
}

void normalize_min_max(Map& m) {
  if (m.empty()) return;
  const auto [lo, hi] = std::minmax_element(m.values().begin(), m.values().end());
  const double mn = *lo, mx = *hi;
  const double range = mx - mn;
  if (!(range > 1e-9 * std::max(std::abs(mx), std::abs(mn)))) {
    std::fill(m.values().begin(), m.values().end(), 0.0);
    return;
  }
  for (double& v : m.values()) v = (v - mn) / range;
}

Map predict_center_gaussian(Dims dims, double center_sigma_frac) {
  if (dims.width <= 0 || dims.height <= 0) throw Error(ErrorCode::InvalidArgument, "empty canvas");
  if (!(center_sigma_frac > 0.0)) throw Error(ErrorCode::InvalidArgument, "center_sigma_frac must be > 0");
  const double diag = std::hypot(static_cast<double>(dims.width), static_cast<double>(dims.height));
  const double sigma = center_sigma_frac * diag;
  const double cx = (dims.width - 1) / 2.0, cy = (dims.height - 1) / 2.0;
  // Separable evaluation; the peak is the product of the per-axis maxima.
  std::vector<double> gx(dims.width), gy(dims.height);
  for (int x = 0; x < dims.width; ++x) gx[x] = std::exp(-(x - cx) * (x - cx) / (2.0 * sigma * sigma));
  for (int y = 0; y < dims.height; ++y) gy[y] = std::exp(-(y - cy) * (y - cy) / (2.0 * sigma * sigma));
  const double peak = *std::max_element(gx.begin(), gx.end()) * *std::max_element(gy.begin(), gy.end());
  Map out(dims);
  for (int y = 0; y < dims.height; ++y)
    for (int x = 0; x < dims.width; ++x) out(x, y) = gx[x] * gy[y] / peak;
  return out;
}

Map predict_spectral_residual(const Map& luma, const ModelConfig& config) {
  return spectral_saliency(luma, config, true);
}
Map predict_spectral_residual(const RgbImage& image, const ModelConfig& config) {
  return spectral_saliency(to_luma(image), config, true);
}
Map predict_pft(const Map& luma, const ModelConfig& config) { return spectral_saliency(luma, config, false); }
Map predict_pft(const RgbImage& image, const ModelConfig& config) {
  return spectral_saliency(to_luma(image), config, false);
}

Map dog_response(const Map& channel, const std::vector<ScalePair>& scales) {
  if (scales.empty()) throw Error(ErrorCode::BadScalePair, "at least one DoG scale pair is required");
  for (const auto& s : scales) {
    if (!(s.center > 0.0)) throw Error(ErrorCode::BadScalePair, "DoG center sigma must be > 0");
    if (!(s.surround > s.center)) throw Error(ErrorCode::BadScalePair, "DoG surround sigma must exceed center sigma");
  }
  Map acc(channel.dims());
  for (const auto& s : scales) {
    const Map c = kernels::gaussian_blur(channel, s.center);
    const Map g = kernels::gaussian_blur(channel, s.surround);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::abs(c[i] - g[i]);
  }
  return acc;
}

Map predict_dog_contrast(const RgbImage& image, const std::vector<ScalePair>& scales, const ModelConfig& config) {
  config.validate();
  require_size(image.dims());
  // Validate scales before any work so bad input fails fast.
  (void)dog_response(Map(1, 1), scales);
  const Channels full = opponent_channels(image);
  const Dims wd = working_dims(image.dims(), config.dog_width_px);
  Map total(wd);
  for (const Map* ch : {&full.intensity, &full.rg, &full.by}) {
    const Map small = kernels::downscale_area(*ch, wd);
    const Map r = dog_response(small, scales);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += r[i];
  }
  Map out = kernels::resize_bilinear(total, image.dims());
  normalize_min_max(out);
  return out;
}

ExternalMap load_external_map(const std::filesystem::path& path, Dims target, std::optional<Dims> raw_dims) {
  if (target.width <= 0 || target.height <= 0) throw Error(ErrorCode::InvalidArgument, "empty target dims");
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  Map raw;
  if (ext == ".png") {
    raw = io::read_png_gray(path);
  } else if (ext == ".f32" || ext == ".bin" || ext == ".raw") {
    raw = io::read_f32(path, raw_dims.value_or(target));
  } else {
    throw Error(ErrorCode::UnreadableMap, "unsupported map format: " + path.string());
  }
  ExternalMap out;
  for (double& v : raw.values()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::UnreadableMap, "non-finite value in " + path.string());
    if (v < 0.0) {
      v = 0.0;
      ++out.clamped;
    }
  }
  out.map = kernels::resize_bilinear(raw, target);
  return out;
}

std::vector<PredictorDescriptor> registry() {
  const ModelConfig c;
  std::vector<PredictorDescriptor> out;
  for (const char* id : {"center", "sr", "pft", "dog"}) out.push_back(make_predictor(id, c)->descriptor());
  return out;
}

bool is_registered(std::string_view id) { return id == "center" || id == "sr" || id == "pft" || id == "dog"; }

std::string registry_listing() {
  std::ostringstream os;
  for (const auto& d : registry())
    os << "  " << d.id << "  [" << to_string(d.inspiration) << (d.flags.global ? ", global" : "")
       << (d.flags.local ? ", local" : "") << "]  " << d.summary << '\n';
  return os.str();
}

std::unique_ptr<Predictor> make_predictor(std::string_view id, const ModelConfig& config) {
  config.validate();
  if (id == "center") return std::make_unique<CenterPredictor>(config);
  if (id == "sr") return std::make_unique<SpectralPredictor>(config, true);
  if (id == "pft") return std::make_unique<SpectralPredictor>(config, false);
  if (id == "dog") return std::make_unique<DogPredictor>(config);
  throw Error(ErrorCode::UnknownModel, "unknown model id: " + std::string(id));
}

}  // namespace sal::models
