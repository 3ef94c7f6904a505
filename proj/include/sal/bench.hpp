#pragma once

// Evaluation harness: scores predictor maps against masks and fixations and
// aggregates the scores into the analysis groupings.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sal/fixdata.hpp"
#include "sal/grid.hpp"
#include "sal/metrics.hpp"
#include "sal/stimgen.hpp"

namespace sal::bench {

using stimgen::Difficulty;
using stimgen::Task;
using metrics::Metric;

struct GroupKey {
  int block = 0;
  int subtype = 0;
  int psi = 0;
  Difficulty difficulty = Difficulty::Hard;
  Task task = Task::FreeViewing;

  static GroupKey from_spec(const stimgen::StimulusSpec& spec);
  bool operator==(const GroupKey&) const = default;
};

struct EvalItem {
  std::string image_id;
  GroupKey group;
  Dims dims;
  Mask mask;  // may be empty when SI is not requested
};

EvalItem make_item(const stimgen::Stimulus& s);
std::vector<EvalItem> make_items(std::span<const stimgen::Stimulus> stimuli);

// Supplies the saliency map of one model for one item. Called concurrently.
using MapSource = std::function<Map(const EvalItem& item, const std::string& model)>;

struct ReportRow {
  std::string image_id;
  GroupKey group;
  std::string model;
  Metric metric = Metric::SI;
  double value = 0.0;
  std::size_t n_positives = 0;
  bool degenerate = false;  // +inf SI sentinel
};

struct ReportTable {
  std::vector<ReportRow> rows;  // ordered by (item, model, metric) as requested
};

enum class ShufflePool { SameTask, Global };

struct EvalOptions {
  std::vector<Metric> metrics{Metric::SI};
  std::uint64_t master_seed = 0;
  ShufflePool pool = ShufflePool::SameTask;
  metrics::SamplingParams borji;
  int sauc_splits = 100;
  int sauc_samples = 0;  // 0: as many as fixations
  bool sauc_full_pool = false;
  fixdata::DensityParams density;
  double center_sigma_frac = 1.0 / 6.0;  // InfoGain baseline
};

// Per-(image, model, metric) RNG seed for the sampled metrics.
std::uint64_t pair_seed(std::uint64_t master, const std::string& image_id, const std::string& model, Metric metric);

// One row per (item, model, metric). Fixation metrics need scanpaths for
// every item, SI needs masks; MissingInput otherwise. Maps whose size differs
// from the item are resized bilinearly before scoring.
ReportTable evaluate_all(std::span<const std::string> models, std::span<const EvalItem> items, const MapSource& maps,
                         const std::vector<fixdata::ScanPath>* fixations, const EvalOptions& options);

enum class GroupField { Block, Subtype, Psi, Difficulty, Task };

struct GroupLabel {
  std::string model;
  Metric metric = Metric::SI;
  std::optional<int> block, subtype, psi;
  std::optional<Difficulty> difficulty;
  std::optional<Task> task;

  bool operator<(const GroupLabel& o) const;
  bool operator==(const GroupLabel&) const = default;
};

struct GroupStat {
  GroupLabel label;
  std::optional<double> mean;  // empty when every row was excluded
  std::size_t count = 0;
  double stderr_ = 0.0;  // sample std / sqrt(count); 0 for one row
  std::size_t excluded = 0;
};

// Groups by model, metric and the requested fields; ordered by label.
std::vector<GroupStat> group_scores(const ReportTable& table, std::span<const GroupField> by);

struct CurvePoint {
  int x = 0;  // fixation index or psi
  double mean = 0.0;
  std::size_t count = 0;
  double stderr_ = 0.0;
};

struct GazeCurve {
  std::string model;
  std::vector<CurvePoint> points;  // count = positives used
};

struct ContrastCurve {
  std::string model;
  std::optional<int> block;        // empty: pooled over blocks
  std::vector<CurvePoint> points;  // count = rows averaged
  std::size_t excluded = 0;
};

struct GazeOptions {
  int max_index = 3;
  std::size_t min_count = 10;
  ShufflePool pool = ShufflePool::SameTask;
  bool full_pool = true;
  int splits = 100;
  std::uint64_t master_seed = 0;
};

// For k = 1..max_index: sAUC per image with only its index-k fixations as
// positives and other images' index-k fixations as negatives; the point value
// is the mean over images. Points with fewer than min_count positives are
// left out.
GazeCurve gaze_wise_sauc(const std::string& model, std::span<const EvalItem> items, const MapSource& maps,
                         std::span<const fixdata::ScanPath> scanpaths, const GazeOptions& options);

ContrastCurve si_vs_contrast(const ReportTable& table, const std::string& model,
                             std::optional<int> block = std::nullopt);

// Rank correlation with average ranks for ties.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct DeltaRow {
  std::string image_id;
  GroupKey group;
  std::string model;
  Metric metric = Metric::SI;
  double delta = 0.0;
};

struct BaselineComparison {
  std::string baseline;
  std::vector<DeltaRow> rows;
  // Spearman of each model's pooled SI-vs-psi curve against the baseline's;
  // empty when undefined (constant curve or fewer than two levels).
  std::map<std::string, std::optional<double>> curve_rho;
};

BaselineComparison compare_to_baseline(const ReportTable& table, const std::string& baseline);

std::vector<std::string> table_models(const ReportTable& table);  // first-seen order
std::vector<Metric> table_metrics(const ReportTable& table);

}  // namespace sal::bench
