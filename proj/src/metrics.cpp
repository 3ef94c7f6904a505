#include "sal/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

#include "sal/kernels.hpp"

namespace sal::metrics {

namespace {

void require_finite(const Map& s, const char* what) {
  for (double v : s.values())
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidMap, std::string(what) + " contains non-finite values");
}

std::size_t fixation_total(const CountGrid& f) {
  std::size_t n = 0;
  for (auto c : f.values()) n += c;
  return n;
}

double mean_of(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

std::string canonical(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != '_' && c != '-') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

const char* to_string(Metric m) {
  switch (m) {
    case Metric::AUCJudd: return "AUC_Judd";
    case Metric::AUCBorji: return "AUC_Borji";
    case Metric::sAUC: return "sAUC";
    case Metric::NSS: return "NSS";
    case Metric::CC: return "CC";
    case Metric::SIM: return "SIM";
    case Metric::KL: return "KL";
    case Metric::InfoGain: return "InfoGain";
    case Metric::SI: return "SI";
  }
  return "?";
}

std::optional<Metric> metric_from_string(std::string_view name) {
  const auto key = canonical(name);
  for (Metric m : kAllMetrics)
    if (canonical(to_string(m)) == key) return m;
  if (key == "ig") return Metric::InfoGain;
  return std::nullopt;
}

bool needs_fixations(Metric m) { return m != Metric::SI; }

double roc_auc(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty()) throw Error(ErrorCode::NoFixations, "ROC needs at least one positive");
  if (negatives.empty()) throw Error(ErrorCode::NoNegatives, "ROC needs at least one negative");
  std::vector<double> pos(positives.begin(), positives.end());
  std::vector<double> neg(negatives.begin(), negatives.end());
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::sort(neg.begin(), neg.end(), std::greater<>());
  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());

  double area = 0.0, prev_tpr = 0.0, prev_fpr = 0.0;
  std::size_t i = 0, j = 0;
  while (i < pos.size()) {
    const double t = pos[i];
    while (i < pos.size() && pos[i] >= t) ++i;
    while (j < neg.size() && neg[j] >= t) ++j;
    const double tpr = i / np, fpr = j / nn;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  area += (1.0 - prev_fpr) * (1.0 + prev_tpr) / 2.0;
  return area;
}

std::vector<double> values_at_fixations(const Map& s, const CountGrid& fixations) {
  require_same_dims(s.dims(), fixations.dims(), "saliency map and fixation map differ in size");
  std::vector<double> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::uint32_t k = 0; k < fixations[i]; ++k) out.push_back(s[i]);
  return out;
}

MetricScore auc_judd(const Map& s, const CountGrid& fixations) {
  require_finite(s, "saliency map");
  const auto pos = values_at_fixations(s, fixations);
  if (pos.empty()) throw Error(ErrorCode::NoFixations, "AUC-Judd without fixations");
  std::vector<double> neg;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (fixations[i] == 0) neg.push_back(s[i]);
  return {Metric::AUCJudd, roc_auc(pos, neg), pos.size()};
}

MetricScore auc_borji(const Map& s, const CountGrid& fixations, const SamplingParams& params, Rng& rng) {
  require_finite(s, "saliency map");
  const auto pos = values_at_fixations(s, fixations);
  if (pos.empty()) throw Error(ErrorCode::NoFixations, "AUC-Borji without fixations");
  if (params.n_splits < 1) throw Error(ErrorCode::InvalidArgument, "n_splits must be >= 1");
  const std::size_t n = params.n_samples > 0 ? static_cast<std::size_t>(params.n_samples) : pos.size();
  std::vector<double> neg(n);
  double acc = 0.0;
  for (int split = 0; split < params.n_splits; ++split) {
    for (auto& v : neg) v = s[uniform_index(rng, s.size())];
    acc += roc_auc(pos, neg);
  }
  return {Metric::AUCBorji, acc / params.n_splits, pos.size()};
}

MetricScore sauc_with_negatives(const Map& s, const CountGrid& fixations, std::span<const Pixel> negatives) {
  require_finite(s, "saliency map");
  const auto pos = values_at_fixations(s, fixations);
  if (pos.empty()) throw Error(ErrorCode::NoFixations, "sAUC without fixations");
  if (negatives.empty()) throw Error(ErrorCode::EmptyShuffleSet, "sAUC needs shuffled negatives");
  std::vector<double> neg;
  neg.reserve(negatives.size());
  for (const auto& p : negatives) {
    if (p.x < 0 || p.y < 0 || p.x >= s.width() || p.y >= s.height())
      throw Error(ErrorCode::DimensionMismatch, "shuffled negative outside the map");
    neg.push_back(s(p.x, p.y));
  }
  return {Metric::sAUC, roc_auc(pos, neg), pos.size()};
}

MetricScore sauc(const Map& s, const CountGrid& fixations, const ShuffleSet& shuffle, Rng& rng) {
  if (shuffle.negatives.empty()) throw Error(ErrorCode::EmptyShuffleSet, "sAUC needs shuffled negatives");
  if (shuffle.full_pool) return sauc_with_negatives(s, fixations, shuffle.negatives);
  if (shuffle.split_count < 1) throw Error(ErrorCode::InvalidArgument, "split_count must be >= 1");
  const std::size_t n_pos = fixation_total(fixations);
  if (n_pos == 0) throw Error(ErrorCode::NoFixations, "sAUC without fixations");
  const std::size_t n = shuffle.sample_count > 0 ? static_cast<std::size_t>(shuffle.sample_count) : n_pos;
  std::vector<Pixel> sample(n);
  double acc = 0.0;
  std::size_t used = 0;
  for (int split = 0; split < shuffle.split_count; ++split) {
    for (auto& p : sample) p = shuffle.negatives[uniform_index(rng, shuffle.negatives.size())];
    const auto score = sauc_with_negatives(s, fixations, sample);
    acc += score.value;
    used = score.n_positives;
  }
  return {Metric::sAUC, acc / shuffle.split_count, used};
}

MetricScore nss(const Map& s, const CountGrid& fixations) {
  require_finite(s, "saliency map");
  const auto pos = values_at_fixations(s, fixations);
  if (pos.empty()) throw Error(ErrorCode::NoFixations, "NSS without fixations");
  const double mu = mean_of(s.values());
  double var = 0.0;
  for (double v : s.values()) var += (v - mu) * (v - mu);
  const double sd = std::sqrt(var / static_cast<double>(s.size()));
  if (sd == 0.0) return {Metric::NSS, 0.0, pos.size()};
  double acc = 0.0;
  for (double v : pos) acc += (v - mu) / sd;
  return {Metric::NSS, acc / static_cast<double>(pos.size()), pos.size()};
}

MetricScore cc(const Map& s, const Map& density) {
  require_same_dims(s.dims(), density.dims(), "saliency map and density map differ in size");
  require_finite(s, "saliency map");
  require_finite(density, "density map");
  if (s.empty()) throw Error(ErrorCode::InvalidMap, "empty map");
  const double ma = mean_of(s.values()), mb = mean_of(density.values());
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = s[i] - ma, b = density[i] - mb;
    sab += a * b;
    saa += a * a;
    sbb += b * b;
  }
  if (saa == 0.0 || sbb == 0.0) return {Metric::CC, 0.0, 0};
  return {Metric::CC, std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0), 0};
}

Map normalize_sum(const Map& s) {
  require_finite(s, "map");
  double total = 0.0;
  for (double v : s.values()) {
    if (v < 0.0) throw Error(ErrorCode::InvalidMap, "probability normalization of a map with negative values");
    total += v;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidMap, "probability normalization of an all-zero map");
  Map out = s;
  for (double& v : out.values()) v /= total;
  return out;
}

MetricScore sim(const Map& s, const Map& density) {
  require_same_dims(s.dims(), density.dims(), "saliency map and density map differ in size");
  const Map p = normalize_sum(s), q = normalize_sum(density);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::min(p[i], q[i]);
  return {Metric::SIM, std::min(acc, 1.0), 0};
}

MetricScore kl(const Map& s, const Map& density, double epsilon) {
  require_same_dims(s.dims(), density.dims(), "saliency map and density map differ in size");
  const Map p = normalize_sum(s), q = normalize_sum(density);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += q[i] * std::log(epsilon + q[i] / (p[i] + epsilon));
  return {Metric::KL, acc, 0};
}

MetricScore info_gain(const Map& s, const CountGrid& fixations, const Map& baseline, double epsilon) {
  require_same_dims(s.dims(), baseline.dims(), "saliency map and baseline differ in size");
  const Map p = normalize_sum(s), b = normalize_sum(baseline);
  const auto ps = values_at_fixations(p, fixations);
  if (ps.empty()) throw Error(ErrorCode::NoFixations, "InfoGain without fixations");
  const auto bs = values_at_fixations(b, fixations);
  double acc = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) acc += std::log2(ps[i] + epsilon) - std::log2(bs[i] + epsilon);
  return {Metric::InfoGain, acc / static_cast<double>(ps.size()), ps.size()};
}

MetricScore saliency_index(const Map& s, const Mask& mask) {
  require_same_dims(s.dims(), mask.dims(), "saliency map and mask differ in size");
  require_finite(s, "saliency map");
  double in_sum = 0.0, out_sum = 0.0;
  std::size_t in_n = 0, out_n = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0.0) throw Error(ErrorCode::InvalidMap, "saliency index of a map with negative values");
    if (mask[i]) {
      in_sum += s[i];
      ++in_n;
    } else {
      out_sum += s[i];
      ++out_n;
    }
  }
  if (in_n == 0 || out_n == 0) throw Error(ErrorCode::InvalidArgument, "mask must have set and unset pixels");
  const double st = in_sum / static_cast<double>(in_n);
  const double sb = out_sum / static_cast<double>(out_n);
  if (sb == 0.0) return {Metric::SI, std::numeric_limits<double>::infinity(), in_n, true};
  return {Metric::SI, (st - sb) / sb, in_n};
}

Map match_dims(const Map& s, Dims dims) { return kernels::resize_bilinear(s, dims); }

}  // namespace sal::metrics
