#pragma once

// Report serialization (JSON rows), aggregate CSVs and SVG charts.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sal/bench.hpp"

namespace sal::report {

namespace fs = std::filesystem;

struct DeltaSummary {
  std::string model;
  metrics::Metric metric = metrics::Metric::SI;
  std::optional<double> mean_delta;  // finite deltas only
  std::size_t count = 0;
  std::size_t excluded = 0;
};

struct BaselineSummary {
  std::string baseline;
  std::vector<DeltaSummary> deltas;
  std::map<std::string, std::optional<double>> curve_rho;
};

BaselineSummary summarize(const bench::BaselineComparison& cmp);

struct Report {
  std::uint64_t master_seed = 0;
  std::vector<std::string> models;
  std::vector<metrics::Metric> metrics;
  bool fixation_based = false;
  std::vector<std::string> notes;
  bench::ReportTable table;
  std::vector<bench::GazeCurve> gaze;
  std::optional<BaselineSummary> baseline;
};

// Infinite SI values are written as null with "excluded": true.
nlohmann::json to_json(const Report& r);
Report from_json(const nlohmann::json& j);  // InvalidArgument on malformed input

void write_report_json(const fs::path& path, const Report& r);
Report read_report_json(const fs::path& path);  // MissingInput if absent

struct Written {
  std::vector<fs::path> files;
  std::vector<std::string> notes;
};

// Aggregate CSVs (per-block SI, SI vs psi, easy/hard, FV/VS, gaze-wise,
// baseline deltas) and SVG charts into dir.
Written write_aggregates(const Report& r, const fs::path& dir, bool csv, bool svg);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<Series>& series);

struct BarGroup {
  std::string label;
  std::vector<std::optional<double>> values;  // one per series name
};

std::string bar_chart_svg(const std::string& title, const std::string& y_label,
                          const std::vector<std::string>& series_names, const std::vector<BarGroup>& groups);

std::string format_number(double v);

}  // namespace sal::report
