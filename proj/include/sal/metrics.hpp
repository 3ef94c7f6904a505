#pragma once

// Saliency evaluation metrics. Maps and fixation grids must have identical
// dimensions (DimensionMismatch otherwise); resample beforehand with
// match_dims when a model works at a different resolution.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sal/grid.hpp"
#include "sal/rng.hpp"

namespace sal::metrics {

enum class Metric { AUCJudd, AUCBorji, sAUC, NSS, CC, SIM, KL, InfoGain, SI };

inline constexpr Metric kAllMetrics[] = {Metric::AUCJudd, Metric::AUCBorji, Metric::sAUC, Metric::NSS, Metric::CC,
                                         Metric::SIM,     Metric::KL,       Metric::InfoGain, Metric::SI};

const char* to_string(Metric m);
// Accepts the canonical names case-insensitively, with or without '_'.
std::optional<Metric> metric_from_string(std::string_view name);

bool needs_fixations(Metric m);  // everything except SI

struct MetricScore {
  Metric metric;
  double value;
  std::size_t n_positives;
  bool degenerate = false;  // SI with an all-zero background; value is +inf
};

struct Pixel {
  int x = 0;
  int y = 0;
  bool operator==(const Pixel&) const = default;
};

inline constexpr double kKlEpsilon = 1e-7;
inline constexpr double kInfoGainEpsilon = std::numeric_limits<double>::epsilon();

// Area under the ROC curve built by thresholding at every distinct positive
// value: TPR = share of positives >= t, FPR = share of negatives >= t,
// closed with (0,0) and (1,1) and integrated with the trapezoid rule.
double roc_auc(std::span<const double> positives, std::span<const double> negatives);

// Saliency values at fixated pixels, one entry per fixation.
std::vector<double> values_at_fixations(const Map& s, const CountGrid& fixations);

MetricScore auc_judd(const Map& s, const CountGrid& fixations);

struct SamplingParams {
  int n_splits = 100;
  int n_samples = 0;  // 0: as many negatives as fixations
};

MetricScore auc_borji(const Map& s, const CountGrid& fixations, const SamplingParams& params, Rng& rng);

// Negative locations for shuffled metrics, pooled from other images.
struct ShuffleSet {
  std::vector<Pixel> negatives;
  int sample_count = 0;   // per split; 0: as many as fixations
  int split_count = 100;
  bool full_pool = false;  // use every negative once instead of sampling
};

MetricScore sauc(const Map& s, const CountGrid& fixations, const ShuffleSet& shuffle, Rng& rng);
// Exact variant on an explicit negative list.
MetricScore sauc_with_negatives(const Map& s, const CountGrid& fixations, std::span<const Pixel> negatives);

MetricScore nss(const Map& s, const CountGrid& fixations);
MetricScore cc(const Map& s, const Map& density);
MetricScore sim(const Map& s, const Map& density);
MetricScore kl(const Map& s, const Map& density, double epsilon = kKlEpsilon);
MetricScore info_gain(const Map& s, const CountGrid& fixations, const Map& baseline,
                      double epsilon = kInfoGainEpsilon);
MetricScore saliency_index(const Map& s, const Mask& mask);

// Bilinear resample of s to dims (exact copy when they already match).
Map match_dims(const Map& s, Dims dims);

// s / sum(s); throws InvalidMap unless s is nonnegative with positive mass.
Map normalize_sum(const Map& s);

}  // namespace sal::metrics
