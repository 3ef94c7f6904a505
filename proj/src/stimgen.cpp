#include "sal/stimgen.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <optional>

#include "sal/image_io.hpp"
#include "stimgen_internal.hpp"

namespace sal::stimgen {

namespace {

void paint(RgbImage& image, const ElementRecord& e, const detail::RoughSurface* surface) {
  const double r = detail::bounding_radius(e) + 1.0;
  const int x0 = std::max(0, static_cast<int>(std::floor(e.center.x - r)));
  const int x1 = std::min(image.width() - 1, static_cast<int>(std::ceil(e.center.x + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(e.center.y - r)));
  const int y1 = std::min(image.height() - 1, static_cast<int>(std::ceil(e.center.y + r)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const Point p{x + 0.5, y + 0.5};
      if (signed_distance(e, p) > 0.0) continue;
      if (e.shape == Shape::TexturePatch && surface) {
        image.set(x, y, detail::gray(surface->base_luma + 127.0 * e.roughness * surface->noise(p.x, p.y)));
      } else {
        image.set(x, y, e.color);
      }
    }
  }
}

void mark(Mask& mask, const ElementRecord& e, double dilation) {
  const double r = detail::bounding_radius(e) + dilation + 1.0;
  const int x0 = std::max(0, static_cast<int>(std::floor(e.center.x - r)));
  const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(e.center.x + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(e.center.y - r)));
  const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(e.center.y + r)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (signed_distance(e, {x + 0.5, y + 0.5}) <= dilation) mask(x, y) = 1;
}

}  // namespace

void StimulusSpec::validate() const {
  const auto& b = stimgen::block(block);
  if (subtype < 1 || subtype > b.subtypes)
    throw Error(ErrorCode::UnknownSubtype, "block " + std::to_string(block) + " subtype " + std::to_string(subtype));
  if (psi_steps < 1 || psi < 1 || psi > psi_steps)
    throw Error(ErrorCode::UnknownPsi, "psi " + std::to_string(psi) + " outside 1.." + std::to_string(psi_steps));
  if (canvas.width <= 0 || canvas.height <= 0) throw Error(ErrorCode::InvalidArgument, "canvas must be non-empty");
  if (!(px_per_deg > 0.0)) throw Error(ErrorCode::InvalidArgument, "px_per_deg must be positive");
  if (geometry.grid_cols < 1 || geometry.grid_rows < 1) throw Error(ErrorCode::InvalidArgument, "grid must be non-empty");
  if (!placement.randomized) {
    const auto p = placement.fixed;
    if (!(p.x >= 0 && p.y >= 0 && p.x < canvas.width && p.y < canvas.height))
      throw Error(ErrorCode::InfeasiblePlacement, "fixed target position outside the canvas");
  }
}

std::string StimulusSpec::image_id() const {
  return std::to_string(block) + "_" + std::to_string(subtype) + "_" + std::to_string(psi);
}

Point place_target(Rng& rng, Dims canvas, double margin_px) {
  if (margin_px < 0 || 2.0 * margin_px >= canvas.width || 2.0 * margin_px >= canvas.height)
    throw Error(ErrorCode::InfeasiblePlacement, "margin " + std::to_string(margin_px) + " px leaves no room on a " +
                                                    std::to_string(canvas.width) + "x" + std::to_string(canvas.height) +
                                                    " canvas");
  const double x = uniform(rng, margin_px, canvas.width - margin_px);
  const double y = uniform(rng, margin_px, canvas.height - margin_px);
  return {x, y};
}

std::size_t mask_count(const Mask& mask) {
  return static_cast<std::size_t>(std::count_if(mask.values().begin(), mask.values().end(), [](auto v) { return v != 0; }));
}

bool mask_invariants_hold(const Stimulus& s) {
  if (!(s.aoi_mask.dims() == s.spec.canvas) || !(s.image.dims() == s.spec.canvas)) return false;
  const auto n = mask_count(s.aoi_mask);
  if (n == 0 || 4 * n > s.aoi_mask.size()) return false;
  const int cx = static_cast<int>(std::floor(s.target_center.x));
  const int cy = static_cast<int>(std::floor(s.target_center.y));
  if (cx < 0 || cy < 0 || cx >= s.aoi_mask.width() || cy >= s.aoi_mask.height()) return false;
  return s.aoi_mask(cx, cy) != 0;
}

Stimulus generate_stimulus(const StimulusSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  auto scene = detail::build_scene(spec, rng);

  // Draw distractors first so targets are never occluded.
  std::stable_partition(scene.elements.begin(), scene.elements.end(), [](const auto& e) { return !e.target; });

  Stimulus s;
  s.spec = spec;
  s.image = RgbImage(spec.canvas.width, spec.canvas.height, scene.background);
  if (scene.surface) {
    const auto& surf = *scene.surface;
    s.background_roughness = surf.amplitude;
    for (int y = 0; y < spec.canvas.height; ++y)
      for (int x = 0; x < spec.canvas.width; ++x)
        s.image.set(x, y, detail::gray(surf.base_luma + 127.0 * surf.amplitude * surf.noise(x + 0.5, y + 0.5)));
  }
  const detail::RoughSurface* surface = scene.surface ? &*scene.surface : nullptr;
  for (const auto& e : scene.elements) paint(s.image, e, surface);

  s.aoi_mask = Mask(spec.canvas);
  const double dilation = spec.geometry.mask_dilation_deg * spec.px_per_deg;
  for (const auto& e : scene.elements)
    if (e.target) mark(s.aoi_mask, e, dilation);

  s.target_center = scene.target_center;
  s.elements = std::move(scene.elements);
  if (!mask_invariants_hold(s))
    throw Error(ErrorCode::RenderOverflow, spec.image_id() + ": salient-region mask violates its size invariants (" +
                                               std::to_string(mask_count(s.aoi_mask)) + " px set)");
  return s;
}

std::uint64_t stimulus_seed(std::uint64_t master_seed, int block, int subtype, int psi, int psi_steps) {
  return derive_seed({master_seed, static_cast<std::uint64_t>(block), static_cast<std::uint64_t>(subtype),
                      static_cast<std::uint64_t>(psi), static_cast<std::uint64_t>(psi_steps)});
}

std::vector<StimulusSpec> dataset_specs(const GeneratorConfig& config) {
  std::vector<int> blocks = config.blocks;
  if (blocks.empty())
    for (const auto& b : all_blocks()) blocks.push_back(b.id);
  for (int psi : config.psi_levels)
    if (psi < 1 || psi > config.psi_steps)
      throw Error(ErrorCode::UnknownPsi, "psi level " + std::to_string(psi) + " outside 1.." +
                                             std::to_string(config.psi_steps));

  std::vector<StimulusSpec> specs;
  for (int b : blocks) {
    const auto& info = block(b);
    for (int sub = 1; sub <= info.subtypes; ++sub) {
      for (int psi : config.psi_levels) {
        StimulusSpec spec;
        spec.block = b;
        spec.subtype = sub;
        spec.psi = psi;
        spec.psi_steps = config.psi_steps;
        spec.canvas = config.canvas;
        spec.px_per_deg = config.px_per_deg;
        spec.geometry = config.geometry;
        spec.seed = stimulus_seed(config.master_seed, b, sub, psi, config.psi_steps);
        specs.push_back(spec);
      }
    }
  }
  return specs;
}

std::vector<Stimulus> generate_dataset(const GeneratorConfig& config, kernels::Exec exec) {
  const auto specs = dataset_specs(config);
  std::vector<Stimulus> out(specs.size());
  std::vector<std::optional<std::string>> failures(specs.size());
  const long n = static_cast<long>(specs.size());
  auto one = [&](long i) {
    try {
      out[i] = generate_stimulus(specs[i]);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  };
  if (exec == kernels::Exec::Serial) {
    for (long i = 0; i < n; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one(i);
  }
  for (std::size_t i = 0; i < failures.size(); ++i)
    if (failures[i]) throw Error(ErrorCode::RenderOverflow, "stimulus " + specs[i].image_id() + " failed: " + *failures[i]);
  return out;
}

nlohmann::json spec_to_json(const StimulusSpec& spec) {
  const auto& g = spec.geometry;
  nlohmann::json j;
  j["block"] = spec.block;
  j["subtype"] = spec.subtype;
  j["psi"] = spec.psi;
  j["psi_steps"] = spec.psi_steps;
  j["canvas"] = {spec.canvas.width, spec.canvas.height};
  j["px_per_deg"] = spec.px_per_deg;
  j["seed"] = spec.seed;
  if (spec.placement.randomized) {
    j["target_placement"] = "RandomizedUniform";
  } else {
    j["target_placement"] = {{"fixed", {spec.placement.fixed.x, spec.placement.fixed.y}}};
  }
  j["geometry"] = {{"grid_cols", g.grid_cols},
                   {"grid_rows", g.grid_rows},
                   {"jitter", g.jitter},
                   {"bar_length_deg", g.bar_length_deg},
                   {"bar_width_deg", g.bar_width_deg},
                   {"disk_diameter_deg", g.disk_diameter_deg},
                   {"ring_thickness_deg", g.ring_thickness_deg},
                   {"square_side_deg", g.square_side_deg},
                   {"patch_radius_deg", g.patch_radius_deg},
                   {"mask_dilation_deg", g.mask_dilation_deg},
                   {"placement_margin_deg", g.placement_margin_deg}};
  return j;
}

StimulusSpec spec_from_json(const nlohmann::json& j) {
  StimulusSpec spec;
  spec.block = j.at("block").get<int>();
  spec.subtype = j.at("subtype").get<int>();
  spec.psi = j.at("psi").get<int>();
  spec.psi_steps = j.value("psi_steps", kDefaultPsiSteps);
  spec.canvas = {j.at("canvas").at(0).get<int>(), j.at("canvas").at(1).get<int>()};
  spec.px_per_deg = j.at("px_per_deg").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  const auto& tp = j.at("target_placement");
  if (tp.is_object()) spec.placement = Placement::at(tp.at("fixed").at(0).get<double>(), tp.at("fixed").at(1).get<double>());
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    auto& out = spec.geometry;
    out.grid_cols = g.value("grid_cols", out.grid_cols);
    out.grid_rows = g.value("grid_rows", out.grid_rows);
    out.jitter = g.value("jitter", out.jitter);
    out.bar_length_deg = g.value("bar_length_deg", out.bar_length_deg);
    out.bar_width_deg = g.value("bar_width_deg", out.bar_width_deg);
    out.disk_diameter_deg = g.value("disk_diameter_deg", out.disk_diameter_deg);
    out.ring_thickness_deg = g.value("ring_thickness_deg", out.ring_thickness_deg);
    out.square_side_deg = g.value("square_side_deg", out.square_side_deg);
    out.patch_radius_deg = g.value("patch_radius_deg", out.patch_radius_deg);
    out.mask_dilation_deg = g.value("mask_dilation_deg", out.mask_dilation_deg);
    out.placement_margin_deg = g.value("placement_margin_deg", out.placement_margin_deg);
  }
  spec.validate();
  return spec;
}

nlohmann::json meta_json(const Stimulus& s) {
  const auto feature = contrast_value(s.spec.block, s.spec.subtype, s.spec.psi, s.spec.psi_steps);
  nlohmann::json j;
  j["image_id"] = s.spec.image_id();
  j["block_name"] = std::string(s.spec.block_info().name);
  j["task"] = to_string(s.spec.task());
  j["difficulty"] = to_string(s.spec.difficulty());
  j["feature"] = {{"kind", to_string(feature.kind)}, {"value", feature.value}};
  j["spec"] = spec_to_json(s.spec);
  j["target_center"] = {s.target_center.x, s.target_center.y};
  j["mask_pixels"] = mask_count(s.aoi_mask);
  j["background_roughness"] = s.background_roughness;
  auto& elements = j["element_log"] = nlohmann::json::array();
  for (const auto& e : s.elements) {
    nlohmann::json r{{"shape", to_string(e.shape)},
                     {"position", {e.center.x, e.center.y}},
                     {"orientation_deg", e.orientation_deg},
                     {"size_px", e.size_px},
                     {"width_px", e.width_px},
                     {"color", {e.color.r, e.color.g, e.color.b}},
                     {"target", e.target}};
    if (e.shape == Shape::Corner) r["bend_deg"] = e.bend_deg;
    if (e.shape == Shape::TailedRing) r["tail_px"] = e.tail_px;
    if (e.shape == Shape::TexturePatch) r["roughness"] = e.roughness;
    elements.push_back(std::move(r));
  }
  return j;
}

WrittenFiles write_stimulus(const Stimulus& s, const std::filesystem::path& out_dir) {
  const std::string id = s.spec.image_id();
  WrittenFiles files{out_dir / (id + ".png"), out_dir / (id + "_mask.png"), out_dir / (id + "_meta.json")};
  io::write_png(files.image, s.image);
  io::write_png(files.mask, io::mask_to_u8(s.aoi_mask));
  std::ofstream meta(files.meta);
  if (!meta) throw Error(ErrorCode::IoError, "cannot write " + files.meta.string());
  meta << meta_json(s).dump(2) << '\n';
  return files;
}

}  // namespace sal::stimgen
