#pragma once

// Direct, unoptimized reference computations used as test oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sal/grid.hpp"
#include "sal/rng.hpp"

namespace oracle {

inline sal::Map random_map(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  sal::Rng rng(seed);
  sal::Map m(w, h);
  for (double& v : m.values()) v = sal::uniform(rng, lo, hi);
  return m;
}

// ROC area by listing every threshold (each distinct positive value) and
// counting, with no sorting tricks.
inline double roc_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  std::vector<double> thresholds = pos;
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  std::reverse(thresholds.begin(), thresholds.end());
  std::vector<double> tpr{0.0}, fpr{0.0};
  for (double t : thresholds) {
    double tp = 0, fp = 0;
    for (double v : pos) tp += v >= t;
    for (double v : neg) fp += v >= t;
    tpr.push_back(tp / pos.size());
    fpr.push_back(fp / neg.size());
  }
  tpr.push_back(1.0);
  fpr.push_back(1.0);
  double area = 0.0;
  for (std::size_t i = 1; i < tpr.size(); ++i) area += (fpr[i] - fpr[i - 1]) * (tpr[i] + tpr[i - 1]) / 2.0;
  return area;
}

}  // namespace oracle
