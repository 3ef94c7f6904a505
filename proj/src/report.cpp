#include "sal/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace sal::report {

using nlohmann::json;
using metrics::Metric;

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> json_opt(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Metric metric_of(const std::string& s) {
  const auto m = metrics::metric_from_string(s);
  if (!m) throw Error(ErrorCode::InvalidArgument, "unknown metric in report: " + s);
  return *m;
}

stimgen::Task task_of(const std::string& s) {
  if (s == "FV") return stimgen::Task::FreeViewing;
  if (s == "VS") return stimgen::Task::VisualSearch;
  throw Error(ErrorCode::InvalidArgument, "unknown task in report: " + s);
}

stimgen::Difficulty difficulty_of(const std::string& s) {
  if (s == "hard") return stimgen::Difficulty::Hard;
  if (s == "easy") return stimgen::Difficulty::Easy;
  throw Error(ErrorCode::InvalidArgument, "unknown difficulty in report: " + s);
}

void write_text(const fs::path& path, const std::string& text, Written& w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
  w.files.push_back(path);
}

struct Frame {
  double left = 70, right = 160, top = 40, bottom = 50, width = 720, height = 420;
  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

std::pair<double, double> padded_range(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

void svg_header(std::ostringstream& os, const Frame& f, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << f.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title)
     << "</text>\n";
}

void svg_axes(std::ostringstream& os, const Frame& f, double ylo, double yhi, const std::string& y_label) {
  const double x0 = f.left, y0 = f.top + f.plot_h();
  os << "<line x1=\"" << x0 << "\" y1=\"" << f.top << "\" x2=\"" << x0 << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 + f.plot_w() << "\" y2=\"" << y0
     << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = ylo + (yhi - ylo) * i / 4.0;
    const double y = y0 - f.plot_h() * i / 4.0;
    os << "<line x1=\"" << x0 - 4 << "\" y1=\"" << y << "\" x2=\"" << x0 << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x0 - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << format_number(std::round(v * 1000) / 1000)
       << "</text>\n";
  }
  os << "<text transform=\"translate(16," << f.top + f.plot_h() / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape_xml(y_label) << "</text>\n";
}

void svg_legend(std::ostringstream& os, const Frame& f, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double x = f.width - f.right + 16, y = f.top + 10 + 18.0 * i;
    os << "<rect x=\"" << x << "\" y=\"" << y - 9 << "\" width=\"12\" height=\"12\" fill=\"" << kPalette[i % 8]
       << "\"/>\n";
    os << "<text x=\"" << x + 18 << "\" y=\"" << y + 2 << "\">" << escape_xml(names[i]) << "</text>\n";
  }
}

std::string long_csv(const std::vector<bench::GroupStat>& stats, const std::string& column,
                     const std::function<std::string(const bench::GroupLabel&)>& key) {
  std::ostringstream os;
  os << "model,metric," << column << ",mean,count,stderr,excluded\n";
  for (const auto& g : stats)
    os << g.label.model << ',' << metrics::to_string(g.label.metric) << ',' << key(g.label) << ',' << opt_number(g.mean)
       << ',' << g.count << ',' << format_number(g.stderr_) << ',' << g.excluded << '\n';
  return os.str();
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

BaselineSummary summarize(const bench::BaselineComparison& cmp) {
  BaselineSummary s{cmp.baseline, {}, cmp.curve_rho};
  std::map<std::pair<std::string, Metric>, std::pair<std::vector<double>, std::size_t>> acc;
  std::vector<std::pair<std::string, Metric>> order;
  for (const auto& r : cmp.rows) {
    const auto key = std::make_pair(r.model, r.metric);
    if (!acc.count(key)) order.push_back(key);
    auto& a = acc[key];
    if (std::isfinite(r.delta))
      a.first.push_back(r.delta);
    else
      ++a.second;
  }
  for (const auto& key : order) {
    const auto& [vals, excluded] = acc[key];
    DeltaSummary d{key.first, key.second, std::nullopt, vals.size(), excluded};
    if (!vals.empty()) {
      double t = 0.0;
      for (double v : vals) t += v;
      d.mean_delta = t / static_cast<double>(vals.size());
    }
    s.deltas.push_back(d);
  }
  return s;
}

json to_json(const Report& r) {
  json j;
  j["master_seed"] = r.master_seed;
  j["models"] = r.models;
  json ms = json::array();
  for (Metric m : r.metrics) ms.push_back(metrics::to_string(m));
  j["metrics"] = ms;
  j["fixation_based"] = r.fixation_based;
  j["notes"] = r.notes;
  json rows = json::array();
  for (const auto& row : r.table.rows) {
    json o;
    o["image_id"] = row.image_id;
    o["block"] = row.group.block;
    o["subtype"] = row.group.subtype;
    o["psi"] = row.group.psi;
    o["difficulty"] = stimgen::to_string(row.group.difficulty);
    o["task"] = stimgen::to_string(row.group.task);
    o["model"] = row.model;
    o["metric"] = metrics::to_string(row.metric);
    if (row.degenerate || !std::isfinite(row.value)) {
      o["value"] = nullptr;
      o["excluded"] = true;
    } else {
      o["value"] = row.value;
    }
    o["n_positives"] = row.n_positives;
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  json gaze = json::array();
  for (const auto& c : r.gaze) {
    json pts = json::array();
    for (const auto& p : c.points)
      pts.push_back({{"index", p.x}, {"mean", p.mean}, {"count", p.count}, {"stderr", p.stderr_}});
    gaze.push_back({{"model", c.model}, {"points", pts}});
  }
  j["gaze_curves"] = std::move(gaze);
  if (r.baseline) {
    json b;
    b["baseline"] = r.baseline->baseline;
    json ds = json::array();
    for (const auto& d : r.baseline->deltas)
      ds.push_back({{"model", d.model},
                    {"metric", metrics::to_string(d.metric)},
                    {"mean_delta", opt_json(d.mean_delta)},
                    {"count", d.count},
                    {"excluded", d.excluded}});
    b["deltas"] = ds;
    json rho = json::object();
    for (const auto& [m, v] : r.baseline->curve_rho) rho[m] = opt_json(v);
    b["curve_rho"] = rho;
    j["baseline_comparison"] = b;
  } else {
    j["baseline_comparison"] = nullptr;
  }
  return j;
}

Report from_json(const json& j) {
  try {
    Report r;
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.models = j.at("models").get<std::vector<std::string>>();
    for (const auto& m : j.at("metrics")) r.metrics.push_back(metric_of(m.get<std::string>()));
    r.fixation_based = j.at("fixation_based").get<bool>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& o : j.at("rows")) {
      bench::ReportRow row;
      row.image_id = o.at("image_id").get<std::string>();
      row.group.block = o.at("block").get<int>();
      row.group.subtype = o.at("subtype").get<int>();
      row.group.psi = o.at("psi").get<int>();
      row.group.difficulty = difficulty_of(o.at("difficulty").get<std::string>());
      row.group.task = task_of(o.at("task").get<std::string>());
      row.model = o.at("model").get<std::string>();
      row.metric = metric_of(o.at("metric").get<std::string>());
      if (o.at("value").is_null()) {
        row.value = std::numeric_limits<double>::infinity();
        row.degenerate = true;
      } else {
        row.value = o.at("value").get<double>();
      }
      row.n_positives = o.at("n_positives").get<std::size_t>();
      r.table.rows.push_back(std::move(row));
    }
    for (const auto& c : j.at("gaze_curves")) {
      bench::GazeCurve g{c.at("model").get<std::string>(), {}};
      for (const auto& p : c.at("points"))
        g.points.push_back({p.at("index").get<int>(), p.at("mean").get<double>(), p.at("count").get<std::size_t>(),
                            p.at("stderr").get<double>()});
      r.gaze.push_back(std::move(g));
    }
    const auto& b = j.at("baseline_comparison");
    if (!b.is_null()) {
      BaselineSummary s;
      s.baseline = b.at("baseline").get<std::string>();
      for (const auto& d : b.at("deltas"))
        s.deltas.push_back({d.at("model").get<std::string>(), metric_of(d.at("metric").get<std::string>()),
                            json_opt(d.at("mean_delta")), d.at("count").get<std::size_t>(),
                            d.at("excluded").get<std::size_t>()});
      for (const auto& [m, v] : b.at("curve_rho").items()) s.curve_rho[m] = json_opt(v);
      r.baseline = std::move(s);
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed report JSON: ") + e.what());
  }
}

void write_report_json(const fs::path& path, const Report& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << to_json(r).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

Report read_report_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingInput, "report input missing: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "malformed report JSON " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series) {
  Frame f;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  std::tie(ylo, yhi) = padded_range(ylo, yhi);
  if (!(xhi > xlo)) xlo -= 0.5, xhi += 0.5;
  auto px = [&](double x) { return f.left + (x - xlo) / (xhi - xlo) * f.plot_w(); };
  auto py = [&](double y) { return f.top + f.plot_h() - (y - ylo) / (yhi - ylo) * f.plot_h(); };

  std::ostringstream os;
  svg_header(os, f, title);
  svg_axes(os, f, ylo, yhi, y_label);
  std::set<double> xs;
  for (const auto& s : series)
    for (const auto& p : s.points) xs.insert(p.first);
  for (double x : xs)
    os << "<text x=\"" << px(x) << "\" y=\"" << f.top + f.plot_h() + 16 << "\" text-anchor=\"middle\">"
       << format_number(x) << "</text>\n";
  os << "<text x=\"" << f.left + f.plot_w() / 2 << "\" y=\"" << f.height - 10 << "\" text-anchor=\"middle\">"
     << escape_xml(x_label) << "</text>\n";
  std::vector<std::string> names;
  for (std::size_t i = 0; i < series.size(); ++i) {
    names.push_back(series[i].name);
    const char* color = kPalette[i % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : series[i].points) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n";
    for (const auto& [x, y] : series[i].points)
      os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
  }
  svg_legend(os, f, names);
  os << "</svg>\n";
  return os.str();
}

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<std::string>& series_names, const std::vector<BarGroup>& groups) {
  Frame f;
  double ylo = 0.0, yhi = 0.0;
  for (const auto& g : groups)
    for (const auto& v : g.values)
      if (v) {
        ylo = std::min(ylo, *v);
        yhi = std::max(yhi, *v);
      }
  std::tie(ylo, yhi) = padded_range(ylo, yhi);
  auto py = [&](double y) { return f.top + f.plot_h() - (y - ylo) / (yhi - ylo) * f.plot_h(); };

  std::ostringstream os;
  svg_header(os, f, title);
  svg_axes(os, f, ylo, yhi, y_label);
  const double slot = groups.empty() ? f.plot_w() : f.plot_w() / static_cast<double>(groups.size());
  const double bar = slot * 0.8 / static_cast<double>(std::max<std::size_t>(1, series_names.size()));
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const double gx = f.left + slot * gi + slot * 0.1;
    for (std::size_t si = 0; si < groups[gi].values.size(); ++si) {
      const auto& v = groups[gi].values[si];
      if (!v) continue;
      const double y1 = py(std::max(*v, 0.0)), y2 = py(std::min(*v, 0.0));
      os << "<rect x=\"" << gx + bar * si << "\" y=\"" << y1 << "\" width=\"" << bar << "\" height=\"" << y2 - y1
         << "\" fill=\"" << kPalette[si % 8] << "\"/>\n";
    }
    os << "<text x=\"" << gx + slot * 0.4 << "\" y=\"" << f.top + f.plot_h() + 16 << "\" text-anchor=\"middle\">"
       << escape_xml(groups[gi].label) << "</text>\n";
  }
  if (ylo < 0.0 && yhi > 0.0)
    os << "<line x1=\"" << f.left << "\" y1=\"" << py(0) << "\" x2=\"" << f.left + f.plot_w() << "\" y2=\"" << py(0)
       << "\" stroke=\"#888\"/>\n";
  svg_legend(os, f, series_names);
  os << "</svg>\n";
  return os.str();
}

Written write_aggregates(const Report& r, const fs::path& dir, bool csv, bool svg) {
  Written w;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string());

  const auto models = bench::table_models(r.table);
  const bool has_si = std::any_of(r.table.rows.begin(), r.table.rows.end(),
                                  [](const bench::ReportRow& row) { return row.metric == Metric::SI; });

  if (has_si) {
    // Per-block SI, one column per model.
    std::map<int, std::vector<std::optional<double>>> per_block;
    std::vector<BarGroup> bars;
    {
      const std::vector<bench::GroupField> by{bench::GroupField::Block};
      for (const auto& g : bench::group_scores(r.table, by)) {
        if (g.label.metric != Metric::SI) continue;
        auto& row = per_block[*g.label.block];
        row.resize(models.size());
        const auto mi = std::find(models.begin(), models.end(), g.label.model) - models.begin();
        row[mi] = g.mean;
      }
    }
    std::ostringstream pb;
    pb << "block";
    for (const auto& m : models) pb << ',' << m;
    pb << '\n';
    for (const auto& [block, vals] : per_block) {
      pb << block;
      for (const auto& v : vals) pb << ',' << opt_number(v);
      pb << '\n';
      bars.push_back({std::to_string(block), vals});
    }
    if (csv) write_text(dir / "si_per_block.csv", pb.str(), w);
    if (svg) write_text(dir / "si_per_block.svg", bar_chart_svg("Mean SI per block", "SI", models, bars), w);

    // SI vs psi, pooled over blocks.
    std::map<int, std::vector<std::optional<double>>> per_psi;
    std::vector<Series> series;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      const auto curve = bench::si_vs_contrast(r.table, models[mi]);
      Series s{models[mi], {}};
      for (const auto& p : curve.points) {
        auto& row = per_psi[p.x];
        row.resize(models.size());
        row[mi] = p.mean;
        s.points.emplace_back(p.x, p.mean);
      }
      series.push_back(std::move(s));
    }
    std::ostringstream sp;
    sp << "psi";
    for (const auto& m : models) sp << ',' << m;
    sp << '\n';
    for (auto& [psi, vals] : per_psi) {
      vals.resize(models.size());
      sp << psi;
      for (const auto& v : vals) sp << ',' << opt_number(v);
      sp << '\n';
    }
    if (csv) write_text(dir / "si_vs_psi.csv", sp.str(), w);
    if (svg) write_text(dir / "si_vs_psi.svg", line_chart_svg("Mean SI vs feature contrast", "psi", "SI", series), w);
  } else {
    w.notes.push_back("no SI rows; per-block and SI-vs-psi sections skipped");
  }

  {
    const std::vector<bench::GroupField> by{bench::GroupField::Difficulty};
    const auto stats = bench::group_scores(r.table, by);
    if (csv)
      write_text(dir / "easy_hard.csv",
                 long_csv(stats, "difficulty", [](const bench::GroupLabel& l) { return stimgen::to_string(*l.difficulty); }),
                 w);
    if (svg && has_si) {
      std::vector<BarGroup> bars{{"easy", std::vector<std::optional<double>>(models.size())},
                                 {"hard", std::vector<std::optional<double>>(models.size())}};
      for (const auto& g : stats) {
        if (g.label.metric != Metric::SI) continue;
        const auto mi = std::find(models.begin(), models.end(), g.label.model) - models.begin();
        bars[*g.label.difficulty == stimgen::Difficulty::Easy ? 0 : 1].values[mi] = g.mean;
      }
      write_text(dir / "easy_hard.svg", bar_chart_svg("Mean SI by difficulty", "SI", models, bars), w);
    }
  }
  {
    const std::vector<bench::GroupField> by{bench::GroupField::Task};
    const auto stats = bench::group_scores(r.table, by);
    if (csv)
      write_text(dir / "fv_vs.csv",
                 long_csv(stats, "task", [](const bench::GroupLabel& l) { return stimgen::to_string(*l.task); }), w);
    if (svg && has_si) {
      std::vector<BarGroup> bars{{"FV", std::vector<std::optional<double>>(models.size())},
                                 {"VS", std::vector<std::optional<double>>(models.size())}};
      for (const auto& g : stats) {
        if (g.label.metric != Metric::SI) continue;
        const auto mi = std::find(models.begin(), models.end(), g.label.model) - models.begin();
        bars[*g.label.task == stimgen::Task::FreeViewing ? 0 : 1].values[mi] = g.mean;
      }
      write_text(dir / "fv_vs.svg", bar_chart_svg("Mean SI by task", "SI", models, bars), w);
    }
  }

  if (r.gaze.empty()) {
    w.notes.push_back("no fixation-based rows; gaze-wise section skipped");
  } else {
    std::ostringstream gw;
    gw << "model,index,mean,count,stderr\n";
    std::vector<Series> series;
    for (const auto& c : r.gaze) {
      Series s{c.model, {}};
      for (const auto& p : c.points) {
        gw << c.model << ',' << p.x << ',' << format_number(p.mean) << ',' << p.count << ',' << format_number(p.stderr_)
           << '\n';
        s.points.emplace_back(p.x, p.mean);
      }
      series.push_back(std::move(s));
    }
    if (csv) write_text(dir / "gaze_wise.csv", gw.str(), w);
    if (svg) write_text(dir / "gaze_wise.svg", line_chart_svg("Gaze-wise sAUC", "fixation index", "sAUC", series), w);
  }

  if (r.baseline && csv) {
    std::ostringstream bl;
    bl << "model,metric,mean_delta,count,excluded,curve_rho\n";
    for (const auto& d : r.baseline->deltas) {
      std::string rho;
      const auto it = r.baseline->curve_rho.find(d.model);
      if (d.metric == Metric::SI && it != r.baseline->curve_rho.end()) rho = opt_number(it->second);
      bl << d.model << ',' << metrics::to_string(d.metric) << ',' << opt_number(d.mean_delta) << ',' << d.count << ','
         << d.excluded << ',' << rho << '\n';
    }
    write_text(dir / ("delta_vs_" + r.baseline->baseline + ".csv"), bl.str(), w);
  }
  return w;
}

}  // namespace sal::report
