#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sal/grid.hpp"
#include "sal/kernels.hpp"

namespace sal::fixdata {

struct FixationRecord {
  std::string image_id;
  std::string participant_id;
  int index = 1;  // 1-based order within the trial
  double x = 0.0;
  double y = 0.0;
  double duration_ms = 0.0;

  int px() const;  // pixel column (floor of x)
  int py() const;
};

struct ScanPath {
  std::string image_id;
  std::string participant_id;
  std::vector<FixationRecord> fixations;  // sorted by index, nonempty
};

enum class OutOfBounds { Drop, Clamp };

struct LoadOptions {
  Dims default_dims{1280, 1024};
  std::map<std::string, Dims> dims_by_image;
  OutOfBounds policy = OutOfBounds::Drop;

  Dims dims_for(const std::string& image_id) const;
};

struct LoadResult {
  std::vector<ScanPath> scanpaths;  // ordered by (image_id, participant_id)
  std::size_t dropped = 0;          // out-of-bounds records excluded
  std::size_t clamped = 0;

  std::size_t warnings() const { return dropped + clamped; }
};

inline constexpr const char* kCsvHeader = "image_id,participant_id,index,x,y,duration_ms";

// CSV with header `image_id,participant_id,index,x,y,duration_ms`.
// Throws ParseError (with line number) on malformed rows and
// Error(NonMonotoneIndex) on a repeated (image, participant, index).
LoadResult load_fixations(const std::filesystem::path& path, const LoadOptions& options = {});
LoadResult parse_fixations(std::istream& in, const LoadOptions& options = {});

void write_fixations(const std::filesystem::path& path, std::span<const ScanPath> scanpaths);

// Pooled fixation counts; every fixation must fall inside dims
// (DimensionMismatch otherwise).
struct FixationMap {
  CountGrid counts;

  Dims dims() const { return counts.dims(); }
  std::size_t total() const;
};

FixationMap fixation_map(std::span<const ScanPath> scanpaths, Dims dims);
FixationMap fixation_map(std::span<const FixationRecord> fixations, Dims dims);

enum class Normalization { SumToOne, MaxToOne };

struct DensityParams {
  double sigma_deg = 1.0;
  double px_per_deg = 40.0;
  Normalization normalization = Normalization::SumToOne;

  double sigma_px() const { return sigma_deg * px_per_deg; }
};

// Gaussian fixation density. Each fixation's kernel (truncated at 3 sigma)
// is renormalized to unit mass inside the canvas before normalization, so no
// probability is lost at the borders.
Map density_map(const FixationMap& fmap, const DensityParams& params = {},
                kernels::Exec exec = kernels::Exec::Parallel);

// Set k-1 holds every fixation with index k (k = 1..max_index) across the
// given scanpaths; later fixations are discarded.
std::vector<std::vector<FixationRecord>> split_by_gaze_index(std::span<const ScanPath> scanpaths, int max_index);

// Scanpaths of one image.
std::vector<ScanPath> for_image(std::span<const ScanPath> scanpaths, const std::string& image_id);

}  // namespace sal::fixdata
