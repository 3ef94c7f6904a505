#pragma once

#include <numbers>
#include <vector>

#include "sal/stimgen.hpp"

namespace sal::stimgen::detail {

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

// Smallest difference between two undirected orientations, in [0, 90].
double orientation_distance(double a_deg, double b_deg);

Rgb hsv(double hue_deg, double sat, double val);
Rgb gray(double luma);

// Radius of a disk (centered on the element) that contains its footprint.
double bounding_radius(const ElementRecord& e);

// Smooth value noise in [-1, 1] on a square lattice.
class ValueNoise {
 public:
  ValueNoise() = default;
  ValueNoise(Dims canvas, double lattice_px, Rng& rng);
  double operator()(double x, double y) const;
  bool empty() const { return values_.empty(); }

 private:
  double lattice_px_ = 1.0;
  int cols_ = 0, rows_ = 0;
  std::vector<double> values_;
};

struct RoughSurface {
  double base_luma = 127.0;
  double amplitude = 0.0;  // fraction of the 8-bit range
  ValueNoise noise;
};

struct Scene {
  Rgb background{127, 127, 127};
  std::optional<RoughSurface> surface;
  std::vector<ElementRecord> elements;
  Point target_center;
};

Scene build_scene(const StimulusSpec& spec, Rng& rng);

}  // namespace sal::stimgen::detail
