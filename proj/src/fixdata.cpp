#include "sal/fixdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <tuple>

namespace sal::fixdata {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view field, std::size_t line, const char* name) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
    throw ParseError(line, std::string("invalid ") + name + " '" + std::string(field) + "'");
  return value;
}

}  // namespace

int FixationRecord::px() const { return static_cast<int>(std::floor(x)); }
int FixationRecord::py() const { return static_cast<int>(std::floor(y)); }

Dims LoadOptions::dims_for(const std::string& image_id) const {
  const auto it = dims_by_image.find(image_id);
  return it == dims_by_image.end() ? default_dims : it->second;
}

LoadResult parse_fixations(std::istream& in, const LoadOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++line_no;
  {
    const auto header = split_csv(line);
    const auto expected = split_csv(kCsvHeader);
    if (header != expected) throw ParseError(line_no, std::string("expected header '") + kCsvHeader + "'");
  }

  LoadResult result;
  std::vector<FixationRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw ParseError(line_no, "expected 6 fields, got " + std::to_string(f.size()));
    FixationRecord r;
    r.image_id = std::string(f[0]);
    r.participant_id = std::string(f[1]);
    if (r.image_id.empty() || r.participant_id.empty()) throw ParseError(line_no, "empty identifier");
    r.index = parse_number<int>(f[2], line_no, "index");
    r.x = parse_number<double>(f[3], line_no, "x");
    r.y = parse_number<double>(f[4], line_no, "y");
    r.duration_ms = parse_number<double>(f[5], line_no, "duration_ms");
    if (r.index < 1) throw ParseError(line_no, "fixation index must be >= 1");
    if (!std::isfinite(r.x) || !std::isfinite(r.y)) throw ParseError(line_no, "non-finite coordinate");
    if (!(r.duration_ms >= 0.0)) throw ParseError(line_no, "negative duration");

    const Dims d = options.dims_for(r.image_id);
    const bool inside = r.x >= 0 && r.y >= 0 && r.x < d.width && r.y < d.height;
    if (!inside) {
      if (options.policy == OutOfBounds::Drop) {
        ++result.dropped;
        continue;
      }
      r.x = std::clamp(r.x, 0.0, d.width - 1.0);
      r.y = std::clamp(r.y, 0.0, d.height - 1.0);
      ++result.clamped;
    }
    records.push_back(std::move(r));
  }

  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.image_id, a.participant_id, a.index) < std::tie(b.image_id, b.participant_id, b.index);
  });
  for (auto& r : records) {
    if (result.scanpaths.empty() || result.scanpaths.back().image_id != r.image_id ||
        result.scanpaths.back().participant_id != r.participant_id) {
      result.scanpaths.push_back({r.image_id, r.participant_id, {}});
    }
    auto& fixations = result.scanpaths.back().fixations;
    if (!fixations.empty() && fixations.back().index == r.index)
      throw Error(ErrorCode::NonMonotoneIndex, "duplicate fixation index " + std::to_string(r.index) + " for image '" +
                                                   r.image_id + "', participant '" + r.participant_id + "'");
    fixations.push_back(std::move(r));
  }
  return result;
}

LoadResult load_fixations(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_fixations(in, options);
}

void write_fixations(const std::filesystem::path& path, std::span<const ScanPath> scanpaths) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << kCsvHeader << '\n';
  out.precision(17);
  for (const auto& sp : scanpaths)
    for (const auto& f : sp.fixations)
      out << f.image_id << ',' << f.participant_id << ',' << f.index << ',' << f.x << ',' << f.y << ',' << f.duration_ms
          << '\n';
}

std::size_t FixationMap::total() const {
  std::size_t n = 0;
  for (auto c : counts.values()) n += c;
  return n;
}

FixationMap fixation_map(std::span<const FixationRecord> fixations, Dims dims) {
  FixationMap fmap{CountGrid(dims)};
  for (const auto& f : fixations) {
    const int x = f.px(), y = f.py();
    if (x < 0 || y < 0 || x >= dims.width || y >= dims.height)
      throw Error(ErrorCode::DimensionMismatch, "fixation (" + std::to_string(f.x) + ", " + std::to_string(f.y) +
                                                    ") outside " + std::to_string(dims.width) + "x" +
                                                    std::to_string(dims.height));
    ++fmap.counts(x, y);
  }
  return fmap;
}

FixationMap fixation_map(std::span<const ScanPath> scanpaths, Dims dims) {
  FixationMap fmap{CountGrid(dims)};
  for (const auto& sp : scanpaths) {
    const auto one = fixation_map(std::span<const FixationRecord>(sp.fixations), dims);
    for (std::size_t i = 0; i < one.counts.size(); ++i) fmap.counts[i] += one.counts[i];
  }
  return fmap;
}

Map density_map(const FixationMap& fmap, const DensityParams& params, kernels::Exec exec) {
  if (!(params.sigma_deg > 0.0) || !(params.px_per_deg > 0.0))
    throw Error(ErrorCode::InvalidArgument, "density sigma and px_per_deg must be positive");
  const Dims dims = fmap.dims();
  const std::size_t total = fmap.total();
  if (total == 0) {
    if (params.normalization == Normalization::SumToOne)
      throw Error(ErrorCode::EmptyFixationMap, "SumToOne density of an empty fixation map");
    return Map(dims);
  }

  const auto taps = kernels::gaussian_taps(params.sigma_px());
  const auto mx = kernels::in_bounds_mass(taps, dims.width);
  const auto my = kernels::in_bounds_mass(taps, dims.height);
  Map weights(dims);
  for (int y = 0; y < dims.height; ++y)
    for (int x = 0; x < dims.width; ++x)
      if (const auto c = fmap.counts(x, y)) weights(x, y) = c / (mx[x] * my[y]);

  Map density = kernels::separable_convolve(weights, taps, taps, exec);
  double norm = 0.0;
  if (params.normalization == Normalization::SumToOne) {
    for (double v : density.values()) norm += v;
  } else {
    for (double v : density.values()) norm = std::max(norm, v);
  }
  for (double& v : density.values()) v /= norm;
  return density;
}

std::vector<std::vector<FixationRecord>> split_by_gaze_index(std::span<const ScanPath> scanpaths, int max_index) {
  if (max_index < 1) throw Error(ErrorCode::InvalidArgument, "max_index must be >= 1");
  std::vector<std::vector<FixationRecord>> sets(max_index);
  for (const auto& sp : scanpaths)
    for (const auto& f : sp.fixations)
      if (f.index <= max_index) sets[f.index - 1].push_back(f);
  return sets;
}

std::vector<ScanPath> for_image(std::span<const ScanPath> scanpaths, const std::string& image_id) {
  std::vector<ScanPath> out;
  for (const auto& sp : scanpaths)
    if (sp.image_id == image_id) out.push_back(sp);
  return out;
}

}  // namespace sal::fixdata
