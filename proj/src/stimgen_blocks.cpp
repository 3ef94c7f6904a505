// Scene layouts for the 15 stimulus blocks.

#include <algorithm>
#include <array>
#include <cmath>

#include "stimgen_internal.hpp"

namespace sal::stimgen::detail {

namespace {

constexpr Rgb kWhite{255, 255, 255};

struct Context {
  const StimulusSpec& spec;
  Rng& rng;
  double cell_w, cell_h;
  double bar_len, bar_w, disk_d, ring_t, square_s, patch_d;
  double delta;

  double px(double deg) const { return deg * spec.px_per_deg; }
  double cell_min() const { return std::min(cell_w, cell_h); }
};

struct GridLayout {
  int cols, rows;
  std::vector<Point> sites;  // row-major

  const Point& at(int c, int r) const { return sites[static_cast<std::size_t>(r) * cols + c]; }
};

GridLayout jittered_grid(const Context& ctx) {
  const auto& g = ctx.spec.geometry;
  GridLayout grid{g.grid_cols, g.grid_rows, {}};
  grid.sites.reserve(static_cast<std::size_t>(g.grid_cols) * g.grid_rows);
  for (int r = 0; r < g.grid_rows; ++r) {
    for (int c = 0; c < g.grid_cols; ++c) {
      const double jx = uniform(ctx.rng, -g.jitter, g.jitter);
      const double jy = uniform(ctx.rng, -g.jitter, g.jitter);
      grid.sites.push_back({(c + 0.5 + jx) * ctx.cell_w, (r + 0.5 + jy) * ctx.cell_h});
    }
  }
  return grid;
}

Point target_point(const Context& ctx) {
  if (!ctx.spec.placement.randomized) return ctx.spec.placement.fixed;
  return place_target(ctx.rng, ctx.spec.canvas, ctx.px(ctx.spec.geometry.placement_margin_deg));
}

std::pair<int, int> cell_of(const Context& ctx, const GridLayout& grid, Point p) {
  const int c = std::clamp(static_cast<int>(p.x / ctx.cell_w), 0, grid.cols - 1);
  const int r = std::clamp(static_cast<int>(p.y / ctx.cell_h), 0, grid.rows - 1);
  return {c, r};
}

// Grid sites far enough from the target to leave room for it.
std::vector<Point> sites_around(const Context& ctx, const GridLayout& grid, Point target) {
  const double exclusion = 0.6 * ctx.cell_min();
  std::vector<Point> out;
  for (const auto& p : grid.sites)
    if (std::hypot(p.x - target.x, p.y - target.y) >= exclusion) out.push_back(p);
  return out;
}

ElementRecord bar(Point p, double theta, double len, double width, Rgb color) {
  ElementRecord e;
  e.shape = Shape::Bar;
  e.center = p;
  e.orientation_deg = theta;
  e.size_px = len;
  e.width_px = width;
  e.color = color;
  return e;
}

ElementRecord disk(Point p, double diameter, Rgb color) {
  ElementRecord e;
  e.shape = Shape::Disk;
  e.center = p;
  e.size_px = diameter;
  e.color = color;
  return e;
}

ElementRecord marked(ElementRecord e) {
  e.target = true;
  return e;
}

double wrap180(double deg) {
  double d = std::fmod(deg, 180.0);
  return d < 0 ? d + 180.0 : d;
}

// Balanced assignment of values to n sites, in random order.
std::vector<double> balanced(std::span<const double> values, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = values[i % values.size()];
  shuffle(out.begin(), out.end(), rng);
  return out;
}

double segment_distance(Point p, Point a, Point b) {
  const double vx = b.x - a.x, vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

bool on_canvas(const Context& ctx, Point p) {
  return p.x >= 0 && p.y >= 0 && p.x < ctx.spec.canvas.width && p.y < ctx.spec.canvas.height;
}

// Singleton search: distractors from make_distractor on the grid, the target
// on its own placement.
template <class MakeDistractor>
Scene singleton(Context& ctx, MakeDistractor make_distractor, const ElementRecord& target_template) {
  Scene scene;
  const auto grid = jittered_grid(ctx);
  const Point t = target_point(ctx);
  const auto sites = sites_around(ctx, grid, t);
  for (std::size_t i = 0; i < sites.size(); ++i) scene.elements.push_back(make_distractor(sites[i], i, sites.size()));
  ElementRecord target = target_template;
  target.center = t;
  target.target = true;
  scene.elements.push_back(target);
  scene.target_center = t;
  return scene;
}

// --- free viewing --------------------------------------------------------

Scene corner_salience(Context& ctx) {
  const double theta = uniform(ctx.rng, 0.0, 180.0);
  auto corner = [&](double bend) {
    ElementRecord e = bar({}, theta, ctx.bar_len, ctx.bar_w, kWhite);
    e.shape = Shape::Corner;
    e.bend_deg = bend;
    return e;
  };
  return singleton(
      ctx, [&](Point p, std::size_t, std::size_t) {
        auto e = corner(0.0);
        e.center = p;
        return e;
      },
      corner(ctx.delta));
}

// Texture region whose membership is decided per grid cell.
template <class InRegion, class Make>
Scene texture_region(Context& ctx, InRegion in_region, Make make) {
  Scene scene;
  const auto grid = jittered_grid(ctx);
  const Point t = target_point(ctx);
  const auto [tc, tr] = cell_of(ctx, grid, t);
  std::vector<ElementRecord> region;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      if (in_region(c, r, tc, tr)) {
        region.push_back(marked(make(grid.at(c, r), true)));
      } else {
        scene.elements.push_back(make(grid.at(c, r), false));
      }
    }
  }
  scene.elements.insert(scene.elements.end(), region.begin(), region.end());
  scene.target_center = grid.at(tc, tr);
  return scene;
}

bool in_patch(int c, int r, int tc, int tr) { return std::abs(c - tc) <= 1 && std::abs(r - tr) <= 1; }

Scene segmentation_by_angle(Context& ctx, int subtype) {
  const double theta = uniform(ctx.rng, 0.0, 180.0);
  auto make = [&](Point p, bool inside) {
    return bar(p, wrap180(inside ? theta + ctx.delta : theta), ctx.bar_len, ctx.bar_w, kWhite);
  };
  if (subtype == 1) return texture_region(ctx, [](int c, int, int tc, int) { return c == tc; }, make);
  return texture_region(ctx, in_patch, make);
}

Scene segmentation_by_length(Context& ctx) {
  const double theta = uniform(ctx.rng, 0.0, 180.0);
  const double base = 0.6 * ctx.bar_len;
  return texture_region(ctx, in_patch, [&](Point p, bool inside) {
    return bar(p, theta, inside ? base * ctx.delta : base, ctx.bar_w, kWhite);
  });
}

Scene contour_integration(Context& ctx) {
  Scene scene;
  const auto grid = jittered_grid(ctx);
  const Point t = target_point(ctx);
  const double phi = uniform(ctx.rng, 0.0, 180.0);
  const double spacing = ctx.cell_min() / ctx.delta;
  const int half = static_cast<int>(std::floor(1.5 * ctx.cell_min() / spacing));
  const double ux = std::cos(deg2rad(phi)), uy = -std::sin(deg2rad(phi));
  const Point a{t.x - half * spacing * ux, t.y - half * spacing * uy};
  const Point b{t.x + half * spacing * ux, t.y + half * spacing * uy};

  for (const auto& p : grid.sites) {
    const double theta = uniform(ctx.rng, 0.0, 180.0);
    if (segment_distance(p, a, b) < 0.6 * ctx.cell_min()) continue;
    scene.elements.push_back(bar(p, theta, ctx.bar_len, ctx.bar_w, kWhite));
  }
  for (int i = -half; i <= half; ++i) {
    const Point p{t.x + i * spacing * ux, t.y + i * spacing * uy};
    if (!on_canvas(ctx, p)) continue;
    scene.elements.push_back(marked(bar(p, phi, ctx.bar_len, ctx.bar_w, kWhite)));
  }
  scene.target_center = t;
  return scene;
}

Scene grouping_by_distance(Context& ctx, int subtype) {
  Scene scene;
  const auto grid = jittered_grid(ctx);
  const Point t = target_point(ctx);
  const auto [tc, tr] = cell_of(ctx, grid, t);
  const Point anchor = grid.at(tc, tr);
  auto make = [&](Point p) {
    return subtype == 1 ? disk(p, ctx.disk_d, kWhite) : bar(p, 90.0, ctx.bar_len, ctx.bar_w, kWhite);
  };
  std::vector<ElementRecord> group;
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const Point p = grid.at(c, r);
      if (in_patch(c, r, tc, tr)) {
        const Point q{anchor.x + (p.x - anchor.x) / ctx.delta, anchor.y + (p.y - anchor.y) / ctx.delta};
        group.push_back(marked(make(q)));
      } else {
        scene.elements.push_back(make(p));
      }
    }
  }
  scene.elements.insert(scene.elements.end(), group.begin(), group.end());
  scene.target_center = anchor;
  return scene;
}

// --- visual search -------------------------------------------------------

Scene feature_conjunction(Context& ctx, int subtype) {
  const Rgb red = hsv(0.0, 0.8, 0.9);
  const Rgb shifted = hsv(ctx.delta, 0.8, 0.9);
  const Rgb green = hsv(120.0, 0.8, 0.9);
  auto mk = [&](double theta, Rgb color) { return bar({}, wrap180(theta), ctx.bar_len, ctx.bar_w, color); };
  auto at = [](ElementRecord e, Point p) {
    e.center = p;
    return e;
  };
  switch (subtype) {
    case 1:
      return singleton(ctx, [&](Point p, std::size_t, std::size_t) { return at(mk(90.0, red), p); },
                       mk(90.0, shifted));
    case 2:
      return singleton(ctx, [&](Point p, std::size_t, std::size_t) { return at(mk(90.0, red), p); },
                       mk(90.0 + ctx.delta, red));
    case 3: {
      // distractors: (red, vertical) and (shifted hue, horizontal); target shares
      // its color with one group and its orientation with the other.
      std::vector<int> kinds;
      return singleton(
          ctx,
          [&](Point p, std::size_t i, std::size_t n) {
            if (kinds.empty()) {
              const std::array<double, 2> v{0.0, 1.0};
              for (double k : balanced(v, n, ctx.rng)) kinds.push_back(static_cast<int>(k));
            }
            return kinds[i] == 0 ? at(mk(90.0, red), p) : at(mk(0.0, shifted), p);
          },
          mk(90.0, shifted));
    }
    default: {
      std::vector<int> kinds;
      return singleton(
          ctx,
          [&](Point p, std::size_t i, std::size_t n) {
            if (kinds.empty()) {
              const std::array<double, 2> v{0.0, 1.0};
              for (double k : balanced(v, n, ctx.rng)) kinds.push_back(static_cast<int>(k));
            }
            return kinds[i] == 0 ? at(mk(90.0, red), p) : at(mk(90.0 + ctx.delta, green), p);
          },
          mk(90.0, green));
    }
  }
}

Scene search_asymmetry(Context& ctx, int subtype) {
  const double tail = (ctx.delta - 1.0) / 2.0 * (ctx.disk_d / 2.0);
  auto ring = [&](double tail_px) {
    ElementRecord e;
    e.shape = Shape::TailedRing;
    e.size_px = ctx.disk_d;
    e.width_px = ctx.ring_t;
    e.orientation_deg = 300.0;
    e.tail_px = tail_px;
    e.color = kWhite;
    return e;
  };
  const double distractor_tail = subtype == 1 ? 0.0 : tail;
  const double target_tail = subtype == 1 ? tail : 0.0;
  return singleton(
      ctx,
      [&](Point p, std::size_t, std::size_t) {
        auto e = ring(distractor_tail);
        e.center = p;
        return e;
      },
      ring(target_tail));
}

Scene rough_surface(Context& ctx, int subtype) {
  constexpr double kBackgroundAmplitude = 0.05;
  Scene scene;
  const Point t = target_point(ctx);
  const double lattice = ctx.px(subtype == 1 ? 0.2 : 0.5);
  scene.surface = RoughSurface{127.0, kBackgroundAmplitude, ValueNoise(ctx.spec.canvas, std::max(lattice, 1.0), ctx.rng)};
  ElementRecord patch;
  patch.shape = Shape::TexturePatch;
  patch.center = t;
  patch.size_px = ctx.patch_d;
  patch.roughness = kBackgroundAmplitude + ctx.delta;
  patch.target = true;
  scene.elements.push_back(patch);
  scene.target_center = t;
  return scene;
}

Scene color_search(Context& ctx, int subtype) {
  // Target hue walks from blue towards yellow through cyan and green.
  constexpr double kBaseHue = 240.0;
  const Rgb base = hsv(kBaseHue, 0.7, 0.9);
  const Rgb shifted = hsv(kBaseHue - ctx.delta, 0.7, 0.9);
  auto make = [&](Rgb color) {
    switch (subtype) {
      case 2: return bar({}, 90.0, ctx.bar_len, ctx.bar_w, color);
      case 4: {
        ElementRecord e;
        e.shape = Shape::Square;
        e.size_px = ctx.square_s;
        e.color = color;
        return e;
      }
      default: return disk({}, ctx.disk_d, color);
    }
  };
  Scene scene = singleton(
      ctx,
      [&](Point p, std::size_t, std::size_t) {
        auto e = make(base);
        e.center = p;
        return e;
      },
      make(shifted));
  if (subtype == 3) scene.background = hsv(30.0, 0.3, 0.5);
  return scene;
}

Scene brightness_search(Context& ctx, int subtype) {
  const bool brighter = subtype == 1;
  const double distractor = brighter ? 96.0 : 160.0;
  const double target = brighter ? distractor + ctx.delta * (255.0 - distractor) : distractor * (1.0 - ctx.delta);
  Scene scene = singleton(
      ctx, [&](Point p, std::size_t, std::size_t) { return disk(p, ctx.disk_d, gray(distractor)); },
      disk({}, ctx.disk_d, gray(target)));
  scene.background = brighter ? Rgb{0, 0, 0} : Rgb{255, 255, 255};
  return scene;
}

Scene orientation_search(Context& ctx) {
  return singleton(
      ctx, [&](Point p, std::size_t, std::size_t) { return bar(p, 90.0, ctx.bar_len, ctx.bar_w, kWhite); },
      bar({}, wrap180(90.0 + ctx.delta), ctx.bar_len, ctx.bar_w, kWhite));
}

Scene size_search(Context& ctx) {
  return singleton(
      ctx, [&](Point p, std::size_t, std::size_t) { return disk(p, ctx.disk_d, kWhite); },
      disk({}, ctx.disk_d * ctx.delta, kWhite));
}

Scene heterogeneous_orientation(Context& ctx, int subtype) {
  const double spread = 10.0 * subtype;
  const std::array<double, 5> offsets{-spread, -spread / 2.0, 0.0, spread / 2.0, spread};
  std::vector<double> assigned;
  return singleton(
      ctx,
      [&](Point p, std::size_t i, std::size_t n) {
        if (assigned.empty()) assigned = balanced(offsets, n, ctx.rng);
        return bar(p, wrap180(90.0 + assigned[i]), ctx.bar_len, ctx.bar_w, kWhite);
      },
      bar({}, wrap180(90.0 + ctx.delta), ctx.bar_len, ctx.bar_w, kWhite));
}

Scene nonlinear_orientation(Context& ctx, int subtype) {
  Scene scene;
  const auto grid = jittered_grid(ctx);
  const Point t = target_point(ctx);
  for (const auto& p : sites_around(ctx, grid, t))
    scene.elements.push_back(bar(p, wrap180(nonlinear_field_deg(subtype, p, ctx.spec.canvas)), ctx.bar_len, ctx.bar_w, kWhite));
  scene.elements.push_back(
      marked(bar(t, wrap180(nonlinear_field_deg(subtype, t, ctx.spec.canvas) + ctx.delta), ctx.bar_len, ctx.bar_w, kWhite)));
  scene.target_center = t;
  return scene;
}

Scene categorical_orientation(Context& ctx, int subtype) {
  constexpr std::array<double, 3> kBase{90.0, 0.0, 45.0};
  const double base = kBase[subtype - 1];
  const std::array<double, 2> flanks{base - 20.0, base + 20.0};
  std::vector<double> assigned;
  // The target leaves the steeper category at half the nominal contrast, so
  // its distance to the nearest distractor orientation grows monotonically.
  return singleton(
      ctx,
      [&](Point p, std::size_t i, std::size_t n) {
        if (assigned.empty()) assigned = balanced(flanks, n, ctx.rng);
        return bar(p, wrap180(assigned[i]), ctx.bar_len, ctx.bar_w, kWhite);
      },
      bar({}, wrap180(base + 20.0 + ctx.delta / 2.0), ctx.bar_len, ctx.bar_w, kWhite));
}

}  // namespace

Scene build_scene(const StimulusSpec& spec, Rng& rng) {
  const auto& g = spec.geometry;
  Context ctx{spec,
              rng,
              static_cast<double>(spec.canvas.width) / g.grid_cols,
              static_cast<double>(spec.canvas.height) / g.grid_rows,
              g.bar_length_deg * spec.px_per_deg,
              g.bar_width_deg * spec.px_per_deg,
              g.disk_diameter_deg * spec.px_per_deg,
              g.ring_thickness_deg * spec.px_per_deg,
              g.square_side_deg * spec.px_per_deg,
              2.0 * g.patch_radius_deg * spec.px_per_deg,
              contrast_value(spec.block, spec.subtype, spec.psi, spec.psi_steps).value};

  const double largest = std::max({ctx.bar_len, ctx.disk_d, ctx.square_s});
  if (ctx.cell_min() < 1.25 * largest)
    throw Error(ErrorCode::RenderOverflow, spec.image_id() + ": grid cells (" + std::to_string(ctx.cell_min()) +
                                               " px) too small for " + std::to_string(largest) + " px elements");

  switch (spec.block) {
    case 1: return corner_salience(ctx);
    case 2: return segmentation_by_angle(ctx, spec.subtype);
    case 3: return segmentation_by_length(ctx);
    case 4: return contour_integration(ctx);
    case 5: return grouping_by_distance(ctx, spec.subtype);
    case 6: return feature_conjunction(ctx, spec.subtype);
    case 7: return search_asymmetry(ctx, spec.subtype);
    case 8: return rough_surface(ctx, spec.subtype);
    case 9: return color_search(ctx, spec.subtype);
    case 10: return brightness_search(ctx, spec.subtype);
    case 11: return orientation_search(ctx);
    case 12: return size_search(ctx);
    case 13: return heterogeneous_orientation(ctx, spec.subtype);
    case 14: return nonlinear_orientation(ctx, spec.subtype);
    default: return categorical_orientation(ctx, spec.subtype);
  }
}

}  // namespace sal::stimgen::detail

namespace sal::stimgen {

double nonlinear_field_deg(int subtype, Point p, Dims canvas) {
  const double cx = canvas.width / 2.0, cy = canvas.height / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  switch (subtype) {
    case 1: return 90.0 + 45.0 * std::sin(two_pi * p.x / (canvas.width / 2.0));
    case 2: return 90.0 + 45.0 * std::sin(two_pi * p.y / (canvas.height / 2.0));
    case 3: return std::atan2(-(p.y - cy), p.x - cx) * 180.0 / std::numbers::pi + 90.0;  // concentric
    case 4: return std::atan2(-(p.y - cy), p.x - cx) * 180.0 / std::numbers::pi;         // radial
    default: throw Error(ErrorCode::UnknownSubtype, "block 14 has 4 subtypes");
  }
}

}  // namespace sal::stimgen
