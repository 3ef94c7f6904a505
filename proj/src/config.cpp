#include "sal/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sal::config {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  T v{};
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end || s.empty()) fail("invalid number for " + key + ": '" + raw + "'");
  return v;
}

bool parse_bool(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  fail("invalid boolean for " + key + ": '" + raw + "'");
}

Dims parse_dims(const std::string& raw) {
  const auto x = raw.find('x');
  if (x == std::string::npos) fail("canvas must look like 1280x1024");
  return {parse_number<int>(raw.substr(0, x), "canvas"), parse_number<int>(raw.substr(x + 1), "canvas")};
}

std::vector<models::ScalePair> parse_scales(const std::string& raw) {
  std::vector<models::ScalePair> out;
  for (const auto& item : split_list(raw)) {
    const auto c = item.find(':');
    if (c == std::string::npos) fail("dog_scales entries must look like center:surround");
    out.push_back({parse_number<double>(item.substr(0, c), "dog_scales"),
                   parse_number<double>(item.substr(c + 1), "dog_scales")});
  }
  return out;
}

using Setter = void (*)(RunConfig&, const std::string&);

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s{
      {"run",
       {{"out_dir", [](RunConfig& c, const std::string& v) { c.out_dir = trim(v); }},
        {"master_seed", [](RunConfig& c, const std::string& v) { c.master_seed = parse_number<std::uint64_t>(v, "master_seed"); }},
        {"jobs", [](RunConfig& c, const std::string& v) { c.jobs = parse_number<int>(v, "jobs"); }}}},
      {"generate",
       {{"blocks",
         [](RunConfig& c, const std::string& v) {
           c.blocks = trim(v) == "all" ? std::vector<int>{} : parse_int_list(v, "blocks");
         }},
        {"psi", [](RunConfig& c, const std::string& v) { c.psi_levels = parse_int_list(v, "psi"); }},
        {"psi_steps", [](RunConfig& c, const std::string& v) { c.psi_steps = parse_number<int>(v, "psi_steps"); }},
        {"canvas", [](RunConfig& c, const std::string& v) { c.canvas = parse_dims(v); }},
        {"px_per_deg", [](RunConfig& c, const std::string& v) { c.px_per_deg = parse_number<double>(v, "px_per_deg"); }}}},
      {"predict",
       {{"models", [](RunConfig& c, const std::string& v) { c.models = split_list(v); }},
        {"maps_dir",
         [](RunConfig& c, const std::string& v) {
           if (!trim(v).empty()) c.maps_dir = trim(v);
         }},
        {"resize_width",
         [](RunConfig& c, const std::string& v) { c.model_config.resize_width_px = parse_number<int>(v, "resize_width"); }},
        {"smoothing_sigma",
         [](RunConfig& c, const std::string& v) {
           c.model_config.smoothing_sigma_px = parse_number<double>(v, "smoothing_sigma");
         }},
        {"dog_scales", [](RunConfig& c, const std::string& v) { c.model_config.dog_scales = parse_scales(v); }},
        {"dog_width", [](RunConfig& c, const std::string& v) { c.model_config.dog_width_px = parse_number<int>(v, "dog_width"); }},
        {"center_sigma_frac",
         [](RunConfig& c, const std::string& v) {
           c.model_config.center_sigma_frac = parse_number<double>(v, "center_sigma_frac");
         }}}},
      {"evaluate",
       {{"metrics",
         [](RunConfig& c, const std::string& v) {
           c.metrics = parse_metric_list(v);
           c.metrics_explicit = true;
         }},
        {"fixations",
         [](RunConfig& c, const std::string& v) {
           if (!trim(v).empty()) c.fixations = trim(v);
         }},
        {"shuffle_pool",
         [](RunConfig& c, const std::string& v) {
           const auto s = trim(v);
           if (s == "task")
             c.shuffle_pool = bench::ShufflePool::SameTask;
           else if (s == "global")
             c.shuffle_pool = bench::ShufflePool::Global;
           else
             fail("shuffle_pool must be 'task' or 'global'");
         }},
        {"gaze_max_index",
         [](RunConfig& c, const std::string& v) { c.gaze_max_index = parse_number<int>(v, "gaze_max_index"); }},
        {"gaze_min_count",
         [](RunConfig& c, const std::string& v) { c.gaze_min_count = parse_number<std::size_t>(v, "gaze_min_count"); }},
        {"density_sigma_deg",
         [](RunConfig& c, const std::string& v) { c.density_sigma_deg = parse_number<double>(v, "density_sigma_deg"); }}}},
      {"report",
       {{"csv", [](RunConfig& c, const std::string& v) { c.report_csv = parse_bool(v, "csv"); }},
        {"svg", [](RunConfig& c, const std::string& v) { c.report_svg = parse_bool(v, "svg"); }},
        {"baseline", [](RunConfig& c, const std::string& v) { c.baseline = trim(v); }}}},
  };
  return s;
}

}  // namespace

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(parse_number<int>(item, what));
  if (out.empty()) fail(std::string(what) + " must not be empty");
  return out;
}

std::vector<metrics::Metric> parse_metric_list(const std::string& s) {
  std::vector<metrics::Metric> out;
  for (const auto& item : split_list(s)) {
    const auto m = metrics::metric_from_string(item);
    if (!m) fail("unknown metric: " + item);
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) fail("metric list must not be empty");
  return out;
}

stimgen::GeneratorConfig RunConfig::generator() const {
  stimgen::GeneratorConfig g;
  g.blocks = blocks;
  g.psi_levels = psi_levels;
  g.psi_steps = psi_steps;
  g.canvas = canvas;
  g.px_per_deg = px_per_deg;
  g.master_seed = master_seed;
  return g;
}

void RunConfig::validate() const {
  if (out_dir.empty()) fail("out_dir must be set");
  if (jobs < 0) fail("jobs must be >= 0");
  if (psi_steps < 1) fail("psi_steps must be >= 1");
  if (psi_levels.empty()) fail("psi selection is empty");
  for (int p : psi_levels)
    if (p < 1 || p > psi_steps) fail("psi level " + std::to_string(p) + " outside 1.." + std::to_string(psi_steps));
  for (int b : blocks)
    if (b < 1 || b > stimgen::kBlockCount) fail("block " + std::to_string(b) + " outside 1..15");
  if (canvas.width <= 0 || canvas.height <= 0) fail("canvas must be positive");
  if (!(px_per_deg > 0.0)) fail("px_per_deg must be > 0");
  if (models.empty()) fail("model list is empty");
  if (metrics.empty()) fail("metric list is empty");
  if (gaze_max_index < 1) fail("gaze_max_index must be >= 1");
  if (!(density_sigma_deg > 0.0)) fail("density_sigma_deg must be > 0");
  try {
    model_config.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    fail(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  const auto& sch = schema();
  for (const auto& [section, body] : tree) {
    auto sit = sch.find(section);
    if (sit == sch.end()) fail("unknown config section [" + section + "]");
    if (body.empty() && !body.data().empty()) fail("key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      auto kit = sit->second.find(key);
      if (kit == sit->second.end()) fail("unknown config key " + section + "." + key);
      kit->second(c, value.data());
    }
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace sal::config
