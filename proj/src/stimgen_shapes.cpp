#include <algorithm>
#include <cmath>

#include "stimgen_internal.hpp"

namespace sal::stimgen {

namespace {

// Axis-aligned box of half-extents (hx, hy) in the frame rotated by theta.
double box_distance(Point c, double theta_deg, double hx, double hy, Point p) {
  const double t = detail::deg2rad(theta_deg);
  const double dx = p.x - c.x, dy = p.y - c.y;
  // Screen y grows downward; counter-clockwise on screen means y flips.
  const double u = dx * std::cos(t) - dy * std::sin(t);
  const double v = dx * std::sin(t) + dy * std::cos(t);
  const double qx = std::abs(u) - hx, qy = std::abs(v) - hy;
  const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
  return outside + std::min(std::max(qx, qy), 0.0);
}

Point along(Point c, double theta_deg, double dist) {
  const double t = detail::deg2rad(theta_deg);
  return {c.x + dist * std::cos(t), c.y - dist * std::sin(t)};
}

double ring_distance(const ElementRecord& e, Point p) {
  const double r = e.size_px / 2.0;
  const double d = std::hypot(p.x - e.center.x, p.y - e.center.y);
  return std::max(d - r, (r - e.width_px) - d);
}

}  // namespace

double signed_distance(const ElementRecord& e, Point p) {
  switch (e.shape) {
    case Shape::Bar: return box_distance(e.center, e.orientation_deg, e.size_px / 2.0, e.width_px / 2.0, p);
    case Shape::Corner: {
      const double half = e.size_px / 2.0;
      const double a1 = e.orientation_deg;
      const double a2 = e.orientation_deg + 180.0 - e.bend_deg;
      const double d1 = box_distance(along(e.center, a1, half / 2.0), a1, half / 2.0, e.width_px / 2.0, p);
      const double d2 = box_distance(along(e.center, a2, half / 2.0), a2, half / 2.0, e.width_px / 2.0, p);
      return std::min(d1, d2);
    }
    case Shape::Disk:
    case Shape::TexturePatch: return std::hypot(p.x - e.center.x, p.y - e.center.y) - e.size_px / 2.0;
    case Shape::Ring: return ring_distance(e, p);
    case Shape::TailedRing: {
      const double ring = ring_distance(e, p);
      if (e.tail_px <= 0.0) return ring;
      const double start = e.size_px / 2.0 - e.width_px;
      const Point mid = along(e.center, e.orientation_deg, start + e.tail_px / 2.0);
      return std::min(ring, box_distance(mid, e.orientation_deg, e.tail_px / 2.0, e.width_px / 2.0, p));
    }
    case Shape::Square: return box_distance(e.center, e.orientation_deg, e.size_px / 2.0, e.size_px / 2.0, p);
  }
  return 0.0;
}

namespace detail {

double orientation_distance(double a_deg, double b_deg) {
  double d = std::fmod(std::abs(a_deg - b_deg), 180.0);
  return d > 90.0 ? 180.0 - d : d;
}

Rgb hsv(double hue_deg, double sat, double val) {
  double h = std::fmod(hue_deg, 360.0);
  if (h < 0) h += 360.0;
  const double c = val * sat;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) r = c, g = x;
  else if (hp < 2) r = x, g = c;
  else if (hp < 3) g = c, b = x;
  else if (hp < 4) g = x, b = c;
  else if (hp < 5) r = x, b = c;
  else r = c, b = x;
  const double m = val - c;
  auto q = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  return {q(r + m), q(g + m), q(b + m)};
}

Rgb gray(double luma) {
  const auto v = static_cast<std::uint8_t>(std::lround(std::clamp(luma, 0.0, 255.0)));
  return {v, v, v};
}

double bounding_radius(const ElementRecord& e) {
  switch (e.shape) {
    case Shape::Bar:
    case Shape::Corner: return std::hypot(e.size_px / 2.0, e.width_px / 2.0);
    case Shape::Disk:
    case Shape::Ring:
    case Shape::TexturePatch: return e.size_px / 2.0;
    case Shape::TailedRing: return std::max(e.size_px / 2.0, e.size_px / 2.0 - e.width_px + e.tail_px) + e.width_px;
    case Shape::Square: return e.size_px * std::numbers::sqrt2 / 2.0;
  }
  return 0.0;
}

ValueNoise::ValueNoise(Dims canvas, double lattice_px, Rng& rng) : lattice_px_(lattice_px) {
  cols_ = static_cast<int>(std::ceil(canvas.width / lattice_px)) + 2;
  rows_ = static_cast<int>(std::ceil(canvas.height / lattice_px)) + 2;
  values_.resize(static_cast<std::size_t>(cols_) * rows_);
  for (double& v : values_) v = uniform(rng, -1.0, 1.0);
}

double ValueNoise::operator()(double x, double y) const {
  const double gx = x / lattice_px_, gy = y / lattice_px_;
  const int i = std::clamp(static_cast<int>(std::floor(gx)), 0, cols_ - 2);
  const int j = std::clamp(static_cast<int>(std::floor(gy)), 0, rows_ - 2);
  auto smooth = [](double t) { return t * t * (3.0 - 2.0 * t); };
  const double fx = smooth(std::clamp(gx - i, 0.0, 1.0));
  const double fy = smooth(std::clamp(gy - j, 0.0, 1.0));
  auto at = [&](int a, int b) { return values_[static_cast<std::size_t>(b) * cols_ + a]; };
  const double top = at(i, j) + fx * (at(i + 1, j) - at(i, j));
  const double bot = at(i, j + 1) + fx * (at(i + 1, j + 1) - at(i, j + 1));
  return top + fy * (bot - top);
}

}  // namespace detail

}  // namespace sal::stimgen
