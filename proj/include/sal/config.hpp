#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sal/bench.hpp"
#include "sal/metrics.hpp"
#include "sal/models.hpp"
#include "sal/stimgen.hpp"

namespace sal::config {

namespace fs = std::filesystem;

struct RunConfig {
  // [run]
  fs::path out_dir = "run";
  std::uint64_t master_seed = 0;
  int jobs = 0;  // 0: OpenMP default

  // [generate]
  std::vector<int> blocks;  // empty: all
  std::vector<int> psi_levels{1, 2, 3, 4, 5, 6, 7};
  int psi_steps = stimgen::kDefaultPsiSteps;
  Dims canvas{1280, 1024};
  double px_per_deg = 40.0;

  // [predict]
  std::vector<std::string> models{"center", "sr", "pft", "dog"};
  models::ModelConfig model_config;
  std::optional<fs::path> maps_dir;  // default: <out_dir>/maps

  // [evaluate]
  std::vector<metrics::Metric> metrics{metrics::Metric::SI};
  bool metrics_explicit = false;  // set by the config file or --metrics
  std::optional<fs::path> fixations;
  bench::ShufflePool shuffle_pool = bench::ShufflePool::SameTask;
  int gaze_max_index = 3;
  std::size_t gaze_min_count = 10;
  double density_sigma_deg = 1.0;

  // [report]
  bool report_csv = true;
  bool report_svg = true;
  std::string baseline = "center";

  fs::path resolved_maps_dir() const { return maps_dir ? *maps_dir : out_dir / "maps"; }
  fs::path manifest_path() const { return out_dir / "manifest.json"; }
  fs::path report_dir() const { return out_dir / "report"; }

  stimgen::GeneratorConfig generator() const;
  void validate() const;  // throws ConfigError
};

// Sectioned key = value file; unknown sections or keys are errors.
RunConfig load_config(const fs::path& path);
RunConfig parse_config(const std::string& text);

// Comma-separated list helpers shared with the command line.
std::vector<std::string> split_list(const std::string& s);
std::vector<int> parse_int_list(const std::string& s, const char* what);
std::vector<metrics::Metric> parse_metric_list(const std::string& s);

}  // namespace sal::config
