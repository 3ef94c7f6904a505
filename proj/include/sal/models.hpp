#pragma once

// Reference saliency predictors and external map ingestion. Every predictor
// returns a map with the input's dimensions and values in [0,1].

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sal/grid.hpp"

namespace sal::models {

enum class Inspiration { Cognitive, InfoTheoretic, Probabilistic, Spectral, DeepLearning, Baseline };
const char* to_string(Inspiration i);

struct TypeFlags {
  bool global = false;
  bool local = false;
};

struct PredictorDescriptor {
  std::string id;
  Inspiration inspiration = Inspiration::Baseline;
  TypeFlags flags;
  std::string summary;
};

struct ScalePair {
  double center = 1.0;
  double surround = 4.0;
};

struct ModelConfig {
  int resize_width_px = 64;          // spectral working width
  double smoothing_sigma_px = 3.0;   // at working resolution
  std::vector<ScalePair> dog_scales{{1.0, 4.0}, {2.0, 8.0}, {4.0, 16.0}};
  int dog_width_px = 320;            // 0 keeps the input resolution
  double center_sigma_frac = 1.0 / 6.0;

  void validate() const;  // throws InvalidArgument
};

inline constexpr int kMinImageSide = 16;

// Isotropic Gaussian at ((w-1)/2, (h-1)/2) with sigma = frac * diagonal,
// scaled so the maximum is 1.
Map predict_center_gaussian(Dims dims, double center_sigma_frac = 1.0 / 6.0);

Map predict_spectral_residual(const RgbImage& image, const ModelConfig& config = {});
Map predict_spectral_residual(const Map& luma, const ModelConfig& config = {});

// Phase-only reconstruction, otherwise identical to the spectral residual.
Map predict_pft(const RgbImage& image, const ModelConfig& config = {});
Map predict_pft(const Map& luma, const ModelConfig& config = {});

// Center-surround contrast on intensity, R-G and B-(R+G)/2. Scales are in
// pixels of the working resolution (config.dog_width_px).
Map predict_dog_contrast(const RgbImage& image, const std::vector<ScalePair>& scales,
                         const ModelConfig& config = {});

// Unnormalized single-channel response: sum over scales of
// |G(center) - G(surround)|, with boundary-renormalized Gaussians.
Map dog_response(const Map& channel, const std::vector<ScalePair>& scales);

// In-place min-max normalization to [0,1]; flat maps become all zero.
void normalize_min_max(Map& m);

struct ExternalMap {
  Map map;
  std::size_t clamped = 0;  // negative values set to 0
};

// PNG (8/16-bit gray or RGB) or raw float32 (.f32/.bin/.raw). Raw files are
// read with raw_dims (default: target) and then resized to target.
ExternalMap load_external_map(const std::filesystem::path& path, Dims target,
                              std::optional<Dims> raw_dims = std::nullopt);

class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual const PredictorDescriptor& descriptor() const = 0;
  virtual Map predict(const RgbImage& image) const = 0;
};

std::vector<PredictorDescriptor> registry();
bool is_registered(std::string_view id);
std::string registry_listing();

// Throws UnknownModel for ids outside the registry.
std::unique_ptr<Predictor> make_predictor(std::string_view id, const ModelConfig& config = {});

}  // namespace sal::models
