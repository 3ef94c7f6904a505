#include <array>
#include <string>

#include "sal/stimgen.hpp"

namespace sal::stimgen {

namespace {

// Subtype counts follow the image rows of the published dataset figures.
constexpr std::array<BlockId, kBlockCount> kBlocks{{
    {1, Task::FreeViewing, "Corner Salience", 1},
    {2, Task::FreeViewing, "Visual Segmentation by Bar Angle", 2},
    {3, Task::FreeViewing, "Visual Segmentation by Bar Length", 1},
    {4, Task::FreeViewing, "Contour Integration by Bar Continuity", 1},
    {5, Task::FreeViewing, "Perceptual Grouping by Distance", 2},
    {6, Task::VisualSearch, "Feature and Conjunctive Search", 4},
    {7, Task::VisualSearch, "Search Asymmetries", 2},
    {8, Task::VisualSearch, "Search in a Rough Surface", 2},
    {9, Task::VisualSearch, "Color Search", 4},
    {10, Task::VisualSearch, "Brightness Search", 2},
    {11, Task::VisualSearch, "Orientation Search", 1},
    {12, Task::VisualSearch, "Dissimilar Size Search", 1},
    {13, Task::VisualSearch, "Orientation Search with Heterogeneous distractors", 3},
    {14, Task::VisualSearch, "Orientation Search with Non-linear patterns", 4},
    {15, Task::VisualSearch, "Orientation search with distinct Categorization", 3},
}};

}  // namespace

const char* to_string(Task t) { return t == Task::FreeViewing ? "FV" : "VS"; }
const char* to_string(Difficulty d) { return d == Difficulty::Hard ? "hard" : "easy"; }

const char* to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::OrientationDeg: return "OrientationDeg";
    case FeatureKind::BrightnessLevel: return "BrightnessLevel";
    case FeatureKind::ColorDistance: return "ColorDistance";
    case FeatureKind::SizeRatio: return "SizeRatio";
    case FeatureKind::SpacingRatio: return "SpacingRatio";
    case FeatureKind::AngleDeg: return "AngleDeg";
    case FeatureKind::LengthRatio: return "LengthRatio";
    case FeatureKind::ContinuityGapRatio: return "ContinuityGapRatio";
    case FeatureKind::RoughnessAmplitude: return "RoughnessAmplitude";
  }
  return "?";
}

const char* to_string(Shape s) {
  switch (s) {
    case Shape::Bar: return "bar";
    case Shape::Corner: return "corner";
    case Shape::Disk: return "disk";
    case Shape::Ring: return "ring";
    case Shape::TailedRing: return "tailed_ring";
    case Shape::Square: return "square";
    case Shape::TexturePatch: return "texture_patch";
  }
  return "?";
}

std::span<const BlockId> all_blocks() { return kBlocks; }

const BlockId& block(int id) {
  if (id < 1 || id > kBlockCount) throw Error(ErrorCode::InvalidArgument, "block id out of range: " + std::to_string(id));
  return kBlocks[id - 1];
}

int total_subtypes() {
  int n = 0;
  for (const auto& b : kBlocks) n += b.subtypes;
  return n;
}

Difficulty difficulty(int psi, int psi_steps) {
  // psi / steps <= 4 / 7, in integers
  return psi * kDefaultPsiSteps <= 4 * psi_steps ? Difficulty::Hard : Difficulty::Easy;
}

ContrastRange contrast_range(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::OrientationDeg:
    case FeatureKind::AngleDeg: return {0.0, 90.0};
    case FeatureKind::BrightnessLevel: return {0.0, 1.0};
    case FeatureKind::ColorDistance: return {0.0, 180.0};
    case FeatureKind::SizeRatio: return {1.0, 2.5};
    case FeatureKind::SpacingRatio:
    case FeatureKind::LengthRatio:
    case FeatureKind::ContinuityGapRatio: return {1.0, 3.0};
    case FeatureKind::RoughnessAmplitude: return {0.0, 0.5};
  }
  return {0.0, 0.0};
}

FeatureKind feature_kind(int block_id, int subtype) {
  const auto& b = block(block_id);
  if (subtype < 1 || subtype > b.subtypes)
    throw Error(ErrorCode::UnknownSubtype, "block " + std::to_string(block_id) + " has " + std::to_string(b.subtypes) +
                                               " subtypes, got " + std::to_string(subtype));
  switch (block_id) {
    case 1: return FeatureKind::AngleDeg;
    case 2: return FeatureKind::OrientationDeg;
    case 3: return FeatureKind::LengthRatio;
    case 4: return FeatureKind::ContinuityGapRatio;
    case 5: return FeatureKind::SpacingRatio;
    case 6: return (subtype == 1 || subtype == 3) ? FeatureKind::ColorDistance : FeatureKind::OrientationDeg;
    case 7: return FeatureKind::LengthRatio;
    case 8: return FeatureKind::RoughnessAmplitude;
    case 9: return FeatureKind::ColorDistance;
    case 10: return FeatureKind::BrightnessLevel;
    case 12: return FeatureKind::SizeRatio;
    default: return FeatureKind::OrientationDeg;  // 11, 13, 14, 15
  }
}

FeatureDelta contrast_value(int block_id, int subtype, int psi, int psi_steps) {
  const FeatureKind kind = feature_kind(block_id, subtype);
  if (psi_steps < 1) throw Error(ErrorCode::UnknownPsi, "psi_steps must be >= 1");
  if (psi < 1 || psi > psi_steps)
    throw Error(ErrorCode::UnknownPsi, "psi " + std::to_string(psi) + " outside 1.." + std::to_string(psi_steps));
  const auto range = contrast_range(kind);
  if (psi == psi_steps) return {kind, range.at_max};
  const double t = static_cast<double>(psi) / psi_steps;
  return {kind, range.at_zero + (range.at_max - range.at_zero) * t};
}

}  // namespace sal::stimgen
