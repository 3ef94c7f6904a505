#pragma once

// Procedural psychophysical stimuli: 15 pop-out blocks (33 subtypes), each
// rendered at a feature-contrast level psi with an automatically derived
// ground-truth mask of the salient region.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sal/grid.hpp"
#include "sal/kernels.hpp"
#include "sal/rng.hpp"

namespace sal::stimgen {

enum class Task { FreeViewing, VisualSearch };
enum class Difficulty { Hard, Easy };

const char* to_string(Task t);         // "FV" / "VS"
const char* to_string(Difficulty d);   // "hard" / "easy"

struct BlockId {
  int id;
  Task task;
  std::string_view name;
  int subtypes;
};

inline constexpr int kBlockCount = 15;
inline constexpr int kDefaultPsiSteps = 7;

std::span<const BlockId> all_blocks();
const BlockId& block(int id);  // throws InvalidArgument outside 1..15
int total_subtypes();

// Hard for the lower four of seven contrast levels; finer grids are mapped
// onto the same split proportionally.
Difficulty difficulty(int psi, int psi_steps = kDefaultPsiSteps);

enum class FeatureKind {
  OrientationDeg,
  BrightnessLevel,
  ColorDistance,
  SizeRatio,
  SpacingRatio,
  AngleDeg,
  LengthRatio,
  ContinuityGapRatio,
  RoughnessAmplitude,
};

const char* to_string(FeatureKind k);

struct FeatureDelta {
  FeatureKind kind;
  double value;
};

struct ContrastRange {
  double at_zero;  // value the linear map would reach at psi = 0
  double at_max;   // value at the top contrast level
};

ContrastRange contrast_range(FeatureKind kind);
FeatureKind feature_kind(int block, int subtype);

// Linear map of psi / psi_steps onto the kind's range.
// Throws UnknownSubtype / UnknownPsi on bad arguments.
FeatureDelta contrast_value(int block, int subtype, int psi, int psi_steps = kDefaultPsiSteps);

// Visual-angle geometry of the elements; everything in degrees except the grid.
struct Geometry {
  int grid_cols = 12;
  int grid_rows = 9;
  double jitter = 0.15;        // fraction of a cell
  double bar_length_deg = 1.0;
  double bar_width_deg = 0.25;
  double disk_diameter_deg = 0.8;
  double ring_thickness_deg = 0.1;
  double square_side_deg = 0.7;
  double patch_radius_deg = 1.5;   // rough-surface target
  double mask_dilation_deg = 0.5;
  double placement_margin_deg = 0.5;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct Placement {
  bool randomized = true;
  Point fixed;

  static Placement uniform() { return {}; }
  static Placement at(double x, double y) { return {false, {x, y}}; }
};

struct StimulusSpec {
  int block = 11;
  int subtype = 1;
  int psi = 7;
  int psi_steps = kDefaultPsiSteps;
  Dims canvas{1280, 1024};
  double px_per_deg = 40.0;
  std::uint64_t seed = 0;
  Placement placement;
  Geometry geometry;

  void validate() const;
  Task task() const { return block_info().task; }
  Difficulty difficulty() const { return stimgen::difficulty(psi, psi_steps); }
  const BlockId& block_info() const { return stimgen::block(block); }
  std::string image_id() const;  // "<block>_<subtype>_<psi>"
};

enum class Shape { Bar, Corner, Disk, Ring, TailedRing, Square, TexturePatch };

const char* to_string(Shape s);

// One rendered element. Orientation is in degrees, counter-clockwise from the
// +x axis as seen on screen. size_px is the length (bars, corners), the
// diameter (disks, rings, patches) or the side (squares).
struct ElementRecord {
  Shape shape = Shape::Bar;
  Point center;
  double orientation_deg = 0.0;
  double size_px = 0.0;
  double width_px = 0.0;   // bar width or ring thickness
  Rgb color;
  double bend_deg = 0.0;   // Corner: deviation from straight
  double tail_px = 0.0;    // TailedRing: tail length
  double roughness = 0.0;  // TexturePatch: noise amplitude (fraction of range)
  bool target = false;

  bool operator==(const ElementRecord&) const = default;
};

struct Stimulus {
  StimulusSpec spec;
  RgbImage image;
  Mask aoi_mask;
  Point target_center;
  std::vector<ElementRecord> elements;
  double background_roughness = 0.0;
};

// Uniform point in [margin, w - margin) x [margin, h - margin).
// Throws InfeasiblePlacement when the margins leave no room.
Point place_target(Rng& rng, Dims canvas, double margin_px);

// Orientation (deg) of the smooth distractor field used by block 14.
double nonlinear_field_deg(int subtype, Point p, Dims canvas);

// Signed distance (px) from p to the element's footprint; <= 0 inside.
double signed_distance(const ElementRecord& e, Point p);

Stimulus generate_stimulus(const StimulusSpec& spec);

std::uint64_t stimulus_seed(std::uint64_t master_seed, int block, int subtype, int psi, int psi_steps);

struct GeneratorConfig {
  std::vector<int> blocks;  // empty = all
  std::vector<int> psi_levels{1, 2, 3, 4, 5, 6, 7};
  int psi_steps = kDefaultPsiSteps;
  Dims canvas{1280, 1024};
  double px_per_deg = 40.0;
  std::uint64_t master_seed = 0;
  Geometry geometry;
};

// Specs in (block, subtype, psi) order with per-stimulus derived seeds.
std::vector<StimulusSpec> dataset_specs(const GeneratorConfig& config);

// Renders every spec (in parallel for Exec::Parallel); the result order and
// content do not depend on the schedule. A failing spec aborts with an
// Error naming its image id.
std::vector<Stimulus> generate_dataset(const GeneratorConfig& config, kernels::Exec exec = kernels::Exec::Parallel);

// Mask statistics used by the invariant checks.
std::size_t mask_count(const Mask& mask);
bool mask_invariants_hold(const Stimulus& s);

nlohmann::json spec_to_json(const StimulusSpec& spec);
StimulusSpec spec_from_json(const nlohmann::json& j);
nlohmann::json meta_json(const Stimulus& s);

struct WrittenFiles {
  std::filesystem::path image, mask, meta;
};

// Writes <out>/<id>.png, <id>_mask.png and <id>_meta.json.
WrittenFiles write_stimulus(const Stimulus& s, const std::filesystem::path& out_dir);

}  // namespace sal::stimgen
