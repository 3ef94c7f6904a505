#include "sal/bench.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "sal/models.hpp"
#include "sal/rng.hpp"

namespace sal::bench {

namespace {

using fixdata::ScanPath;
using metrics::Pixel;

bool wants(std::span<const Metric> ms, Metric m) { return std::find(ms.begin(), ms.end(), m) != ms.end(); }

bool same_pool(ShufflePool pool, Task a, Task b) { return pool == ShufflePool::Global || a == b; }

Pixel rescale(const fixdata::FixationRecord& f, Dims from, Dims to) {
  auto axis = [](double v, int src, int dst) {
    const int p = static_cast<int>(std::floor(v * dst / src));
    return std::clamp(p, 0, dst - 1);
  };
  return {axis(f.x, from.width, to.width), axis(f.y, from.height, to.height)};
}

struct Stats {
  double mean = 0.0;
  double stderr_ = 0.0;
};

Stats mean_stderr(std::span<const double> v) {
  Stats s;
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
  }
  return s;
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

Map checked_map(const MapSource& maps, const EvalItem& item, const std::string& model) {
  Map s = maps(item, model);
  if (s.empty()) throw Error(ErrorCode::InvalidMap, "empty map for " + model + " on " + item.image_id);
  if (!(s.dims() == item.dims)) s = metrics::match_dims(s, item.dims);
  return s;
}

void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

GroupKey GroupKey::from_spec(const stimgen::StimulusSpec& spec) {
  return {spec.block, spec.subtype, spec.psi, spec.difficulty(), spec.task()};
}

EvalItem make_item(const stimgen::Stimulus& s) {
  return {s.spec.image_id(), GroupKey::from_spec(s.spec), s.image.dims(), s.aoi_mask};
}

std::vector<EvalItem> make_items(std::span<const stimgen::Stimulus> stimuli) {
  std::vector<EvalItem> out;
  out.reserve(stimuli.size());
  for (const auto& s : stimuli) out.push_back(make_item(s));
  return out;
}

std::uint64_t pair_seed(std::uint64_t master, const std::string& image_id, const std::string& model, Metric metric) {
  return derive_seed({master, fnv1a64(image_id), fnv1a64(model), static_cast<std::uint64_t>(metric)});
}

ReportTable evaluate_all(std::span<const std::string> models, std::span<const EvalItem> items, const MapSource& maps,
                         const std::vector<ScanPath>* fixations, const EvalOptions& options) {
  const auto& ms = options.metrics;
  if (ms.empty()) throw Error(ErrorCode::InvalidArgument, "no metrics requested");
  if (models.empty()) throw Error(ErrorCode::InvalidArgument, "no models requested");

  std::map<std::string, std::vector<ScanPath>> paths;
  for (Metric m : ms) {
    if (metrics::needs_fixations(m)) {
      if (!fixations)
        throw Error(ErrorCode::MissingInput, std::string(metrics::to_string(m)) + " requires fixation data" +
                                                 (items.empty() ? "" : " (image " + items.front().image_id + ")"));
    } else {
      for (const auto& it : items) {
        if (it.mask.empty())
          throw Error(ErrorCode::MissingInput, std::string("SI requires a mask (image ") + it.image_id + ")");
        require_same_dims(it.mask.dims(), it.dims, "mask and image differ in size");
      }
    }
  }
  const bool need_fix = std::any_of(ms.begin(), ms.end(), metrics::needs_fixations);
  if (need_fix) {
    for (const auto& sp : *fixations) paths[sp.image_id].push_back(sp);
    for (const auto& it : items)
      if (paths[it.image_id].empty())
        for (Metric m : ms)
          if (metrics::needs_fixations(m))
            throw Error(ErrorCode::MissingInput,
                        std::string(metrics::to_string(m)) + " has no fixations for image " + it.image_id);
  }

  // Shuffled negatives: every fixation of every other image in the pool.
  std::vector<std::vector<Pixel>> negatives(items.size());
  if (wants(ms, Metric::sAUC)) {
    for (std::size_t i = 0; i < items.size(); ++i)
      for (std::size_t j = 0; j < items.size(); ++j) {
        if (i == j || !same_pool(options.pool, items[i].group.task, items[j].group.task)) continue;
        for (const auto& sp : paths[items[j].image_id])
          for (const auto& f : sp.fixations) negatives[i].push_back(rescale(f, items[j].dims, items[i].dims));
      }
  }

  std::vector<std::vector<ReportRow>> slots(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  const long n_items = static_cast<long>(items.size());

#pragma omp parallel for schedule(dynamic)
  for (long ii = 0; ii < n_items; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const EvalItem& item = items[i];
    try {
      fixdata::FixationMap fmap;
      Map density, baseline;
      if (need_fix) {
        fmap = fixdata::fixation_map(paths.at(item.image_id), item.dims);
        if (wants(ms, Metric::CC) || wants(ms, Metric::SIM) || wants(ms, Metric::KL))
          density = fixdata::density_map(fmap, options.density, kernels::Exec::Serial);
        if (wants(ms, Metric::InfoGain)) baseline = models::predict_center_gaussian(item.dims, options.center_sigma_frac);
      }
      for (const auto& model : models) {
        const Map s = checked_map(maps, item, model);
        for (Metric m : ms) {
          Rng rng(pair_seed(options.master_seed, item.image_id, model, m));
          metrics::MetricScore score{m, 0.0, 0};
          switch (m) {
            case Metric::AUCJudd: score = metrics::auc_judd(s, fmap.counts); break;
            case Metric::AUCBorji: score = metrics::auc_borji(s, fmap.counts, options.borji, rng); break;
            case Metric::sAUC: {
              metrics::ShuffleSet set{negatives[i], options.sauc_samples, options.sauc_splits, options.sauc_full_pool};
              score = metrics::sauc(s, fmap.counts, set, rng);
              break;
            }
            case Metric::NSS: score = metrics::nss(s, fmap.counts); break;
            case Metric::CC: score = metrics::cc(s, density); break;
            case Metric::SIM: score = metrics::sim(s, density); break;
            case Metric::KL: score = metrics::kl(s, density); break;
            case Metric::InfoGain: score = metrics::info_gain(s, fmap.counts, baseline); break;
            case Metric::SI: score = metrics::saliency_index(s, item.mask); break;
          }
          slots[i].push_back({item.image_id, item.group, model, m, score.value, score.n_positives, score.degenerate});
        }
      }
    } catch (const Error& e) {
      errors[i] = std::make_exception_ptr(Error(e.code(), item.image_id + ": " + e.what()));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  rethrow_first(errors);

  ReportTable table;
  for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(table.rows));
  return table;
}

bool GroupLabel::operator<(const GroupLabel& o) const {
  return std::tie(model, metric, block, subtype, psi, difficulty, task) <
         std::tie(o.model, o.metric, o.block, o.subtype, o.psi, o.difficulty, o.task);
}

std::vector<GroupStat> group_scores(const ReportTable& table, std::span<const GroupField> by) {
  auto has = [&](GroupField f) { return std::find(by.begin(), by.end(), f) != by.end(); };
  struct Acc {
    std::vector<double> values;
    std::size_t excluded = 0;
  };
  std::map<GroupLabel, Acc> groups;
  for (const auto& r : table.rows) {
    GroupLabel l;
    l.model = r.model;
    l.metric = r.metric;
    if (has(GroupField::Block)) l.block = r.group.block;
    if (has(GroupField::Subtype)) l.subtype = r.group.subtype;
    if (has(GroupField::Psi)) l.psi = r.group.psi;
    if (has(GroupField::Difficulty)) l.difficulty = r.group.difficulty;
    if (has(GroupField::Task)) l.task = r.group.task;
    auto& acc = groups[l];
    if (r.degenerate || !std::isfinite(r.value))
      ++acc.excluded;
    else
      acc.values.push_back(r.value);
  }
  std::vector<GroupStat> out;
  for (const auto& [label, acc] : groups) {
    GroupStat g;
    g.label = label;
    g.count = acc.values.size();
    g.excluded = acc.excluded;
    if (!acc.values.empty()) {
      const auto s = mean_stderr(acc.values);
      g.mean = s.mean;
      g.stderr_ = s.stderr_;
    }
    out.push_back(std::move(g));
  }
  return out;
}

GazeCurve gaze_wise_sauc(const std::string& model, std::span<const EvalItem> items, const MapSource& maps,
                         std::span<const ScanPath> scanpaths, const GazeOptions& options) {
  if (options.max_index < 1) throw Error(ErrorCode::InvalidArgument, "max_index must be >= 1");
  if (scanpaths.empty()) throw Error(ErrorCode::NoFixations, "gaze-wise sAUC needs fixation data");

  // by_index[k][i]: index-(k+1) fixations of item i.
  const auto K = static_cast<std::size_t>(options.max_index);
  std::vector<std::vector<std::vector<fixdata::FixationRecord>>> by_index(K,
                                                                           std::vector<std::vector<fixdata::FixationRecord>>(items.size()));
  {
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < items.size(); ++i) index_of[items[i].image_id] = i;
    for (const auto& sp : scanpaths) {
      auto it = index_of.find(sp.image_id);
      if (it == index_of.end()) continue;
      for (const auto& f : sp.fixations)
        if (f.index >= 1 && f.index <= options.max_index) by_index[f.index - 1][it->second].push_back(f);
    }
  }

  // values[k][i]: sAUC of item i at index k+1, when it has positives.
  std::vector<std::vector<std::optional<metrics::MetricScore>>> values(
      K, std::vector<std::optional<metrics::MetricScore>>(items.size()));
  std::vector<std::exception_ptr> errors(items.size());
  const long n_items = static_cast<long>(items.size());

#pragma omp parallel for schedule(dynamic)
  for (long ii = 0; ii < n_items; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const EvalItem& item = items[i];
    try {
      bool any = false;
      for (std::size_t k = 0; k < K; ++k) any = any || !by_index[k][i].empty();
      if (!any) continue;
      const Map s = checked_map(maps, item, model);
      for (std::size_t k = 0; k < K; ++k) {
        if (by_index[k][i].empty()) continue;
        const auto fmap = fixdata::fixation_map(by_index[k][i], item.dims);
        metrics::ShuffleSet set;
        set.full_pool = options.full_pool;
        set.split_count = options.splits;
        for (std::size_t j = 0; j < items.size(); ++j) {
          if (j == i || !same_pool(options.pool, item.group.task, items[j].group.task)) continue;
          for (const auto& f : by_index[k][j]) set.negatives.push_back(rescale(f, items[j].dims, item.dims));
        }
        Rng rng(derive_seed({pair_seed(options.master_seed, item.image_id, model, Metric::sAUC), k + 1}));
        values[k][i] = metrics::sauc(s, fmap.counts, set, rng);
      }
    } catch (const Error& e) {
      errors[i] = std::make_exception_ptr(Error(e.code(), item.image_id + ": " + e.what()));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  rethrow_first(errors);

  GazeCurve curve{model, {}};
  for (std::size_t k = 0; k < K; ++k) {
    std::vector<double> per_image;
    std::size_t positives = 0;
    for (const auto& v : values[k])
      if (v) {
        per_image.push_back(v->value);
        positives += v->n_positives;
      }
    if (per_image.empty() || positives < options.min_count) continue;
    const auto s = mean_stderr(per_image);
    curve.points.push_back({static_cast<int>(k + 1), s.mean, positives, s.stderr_});
  }
  return curve;
}

ContrastCurve si_vs_contrast(const ReportTable& table, const std::string& model, std::optional<int> block) {
  std::map<int, std::vector<double>> by_psi;
  ContrastCurve curve{model, block, {}, 0};
  for (const auto& r : table.rows) {
    if (r.model != model || r.metric != Metric::SI) continue;
    if (block && r.group.block != *block) continue;
    auto& v = by_psi[r.group.psi];
    if (r.degenerate || !std::isfinite(r.value))
      ++curve.excluded;
    else
      v.push_back(r.value);
  }
  for (const auto& [psi, v] : by_psi) {
    if (v.empty()) continue;
    const auto s = mean_stderr(v);
    curve.points.push_back({psi, s.mean, v.size(), s.stderr_});
  }
  return curve;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorCode::LengthMismatch, "spearman inputs differ in length");
  if (xs.size() < 2) throw Error(ErrorCode::LengthMismatch, "spearman needs at least two points");
  const auto rx = average_ranks(xs), ry = average_ranks(ys);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::DegenerateConstantInput, "spearman of a constant sequence");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<std::string> table_models(const ReportTable& table) {
  std::vector<std::string> out;
  for (const auto& r : table.rows)
    if (std::find(out.begin(), out.end(), r.model) == out.end()) out.push_back(r.model);
  return out;
}

std::vector<Metric> table_metrics(const ReportTable& table) {
  std::vector<Metric> out;
  for (const auto& r : table.rows)
    if (std::find(out.begin(), out.end(), r.metric) == out.end()) out.push_back(r.metric);
  return out;
}

BaselineComparison compare_to_baseline(const ReportTable& table, const std::string& baseline) {
  std::map<std::pair<std::string, Metric>, const ReportRow*> base;
  for (const auto& r : table.rows)
    if (r.model == baseline) base[{r.image_id, r.metric}] = &r;
  if (base.empty()) throw Error(ErrorCode::MissingInput, "no rows for baseline model " + baseline);

  BaselineComparison out{baseline, {}, {}};
  for (const auto& r : table.rows) {
    auto it = base.find({r.image_id, r.metric});
    if (it == base.end())
      throw Error(ErrorCode::MissingInput, "baseline " + baseline + " has no " + metrics::to_string(r.metric) +
                                               " row for image " + r.image_id);
    const double d = r.value - it->second->value;
    out.rows.push_back({r.image_id, r.group, r.model, r.metric, std::isnan(d) ? 0.0 : d});
  }

  const auto base_curve = si_vs_contrast(table, baseline);
  for (const auto& model : table_models(table)) {
    const auto curve = si_vs_contrast(table, model);
    std::vector<double> a, b;
    for (const auto& p : curve.points)
      for (const auto& q : base_curve.points)
        if (p.x == q.x) {
          a.push_back(p.mean);
          b.push_back(q.mean);
        }
    std::optional<double> rho;
    if (a.size() >= 2) {
      try {
        rho = spearman(a, b);
      } catch (const Error&) {
      }
    }
    out.curve_rho[model] = rho;
  }
  return out;
}

}  // namespace sal::bench
