#include "sal/cli.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sal/image_io.hpp"
#include "sal/kernels.hpp"
#include "sal/models.hpp"
#include "sal/report.hpp"
#include "sal/stimgen.hpp"

namespace sal::cli {

using nlohmann::json;

namespace {

fs::path map_path(const config::RunConfig& c, const std::string& model, const std::string& image_id) {
  return c.resolved_maps_dir() / model / (image_id + ".png");
}

void apply_jobs(const config::RunConfig& c) {
  if (c.jobs > 0) kernels::set_num_threads(c.jobs);
}

bool writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) return false;
  const auto probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) return false;
  }
  fs::remove(probe, ec);
  return true;
}

// Runs body and converts library errors into exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

Mask load_mask(const fs::path& path) {
  const Map m = io::read_png_gray(path);
  Mask out(m.dims());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] >= 0.5 ? 1 : 0;
  return out;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::MissingInput:
    case ErrorCode::UnknownModel:
    case ErrorCode::UnknownSubtype:
    case ErrorCode::UnknownPsi:
    case ErrorCode::ParseError:
    case ErrorCode::NonMonotoneIndex:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

void write_manifest(const fs::path& path, const Manifest& m) {
  json j;
  j["master_seed"] = m.master_seed;
  j["psi_steps"] = m.psi_steps;
  json arr = json::array();
  for (const auto& e : m.entries)
    arr.push_back({{"image_id", e.image_id},
                   {"image", e.image.generic_string()},
                   {"mask", e.mask.generic_string()},
                   {"meta", e.meta.generic_string()},
                   {"block", e.group.block},
                   {"subtype", e.group.subtype},
                   {"psi", e.group.psi},
                   {"width", e.dims.width},
                   {"height", e.dims.height}});
  j["stimuli"] = arr;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MissingInput, "manifest not found: " + path.string() + " (run generate first)");
  try {
    json j;
    in >> j;
    Manifest m;
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.psi_steps = j.at("psi_steps").get<int>();
    for (const auto& o : j.at("stimuli")) {
      ManifestEntry e;
      e.image_id = o.at("image_id").get<std::string>();
      e.image = o.at("image").get<std::string>();
      e.mask = o.at("mask").get<std::string>();
      e.meta = o.at("meta").get<std::string>();
      e.group.block = o.at("block").get<int>();
      e.group.subtype = o.at("subtype").get<int>();
      e.group.psi = o.at("psi").get<int>();
      e.group.difficulty = stimgen::difficulty(e.group.psi, m.psi_steps);
      e.group.task = stimgen::block(e.group.block).task;
      e.dims = {o.at("width").get<int>(), o.at("height").get<int>()};
      m.entries.push_back(std::move(e));
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MissingInput, "malformed manifest " + path.string() + ": " + e.what());
  }
}

config::RunConfig resolve(const Overrides& o) {
  config::RunConfig c = o.config ? config::load_config(*o.config) : config::RunConfig{};
  if (o.out) c.out_dir = *o.out;
  if (o.seed) c.master_seed = *o.seed;
  if (o.jobs) c.jobs = *o.jobs;
  if (o.models) c.models = config::split_list(*o.models);
  if (o.metrics) {
    c.metrics = config::parse_metric_list(*o.metrics);
    c.metrics_explicit = true;
  }
  if (o.fixations) c.fixations = *o.fixations;
  if (o.maps_dir) c.maps_dir = *o.maps_dir;
  c.validate();
  return c;
}

int cmd_generate(const config::RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    c.validate();
    apply_jobs(c);
    if (!writable_dir(c.out_dir)) {
      err << "error: output directory not writable: " << c.out_dir.string() << '\n';
      return kExitUsage;
    }
    const auto specs = stimgen::dataset_specs(c.generator());
    std::vector<ManifestEntry> entries(specs.size());
    std::vector<std::string> failures(specs.size());
    const long n = static_cast<long>(specs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      const auto& spec = specs[static_cast<std::size_t>(i)];
      try {
        const auto s = stimgen::generate_stimulus(spec);
        const auto files = stimgen::write_stimulus(s, c.out_dir);
        entries[static_cast<std::size_t>(i)] = {spec.image_id(),
                                                files.image.filename(),
                                                files.mask.filename(),
                                                files.meta.filename(),
                                                bench::GroupKey::from_spec(spec),
                                                spec.canvas};
      } catch (const std::exception& e) {
        failures[static_cast<std::size_t>(i)] =
            std::string(e.what()) + "\n  spec: " + stimgen::spec_to_json(spec).dump();
      }
    }
    bool failed = false;
    for (std::size_t i = 0; i < failures.size(); ++i)
      if (!failures[i].empty()) {
        err << "error: generation failed for " << specs[i].image_id() << ": " << failures[i] << '\n';
        failed = true;
      }
    if (failed) return kExitFailure;
    write_manifest(c.manifest_path(), {c.master_seed, c.psi_steps, std::move(entries)});
    out << "generated " << specs.size() << " stimuli in " << c.out_dir.string() << '\n';
    return kExitOk;
  });
}

int cmd_predict(const config::RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    c.validate();
    apply_jobs(c);
    for (const auto& id : c.models)
      if (!models::is_registered(id)) {
        err << "error: unknown model id '" << id << "'; registered predictors:\n" << models::registry_listing();
        return kExitUsage;
      }
    const auto manifest = read_manifest(c.manifest_path());
    std::vector<std::unique_ptr<models::Predictor>> predictors;
    for (const auto& id : c.models) {
      predictors.push_back(models::make_predictor(id, c.model_config));
      std::error_code ec;
      fs::create_directories(c.resolved_maps_dir() / id, ec);
      if (ec) {
        err << "error: cannot create " << (c.resolved_maps_dir() / id).string() << '\n';
        return kExitUsage;
      }
    }
    const auto& entries = manifest.entries;
    std::vector<std::string> failures(entries.size());
    const long n = static_cast<long>(entries.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      const auto& e = entries[static_cast<std::size_t>(i)];
      try {
        const auto image = io::read_png_rgb(c.out_dir / e.image);
        for (std::size_t m = 0; m < predictors.size(); ++m)
          io::write_png(map_path(c, c.models[m], e.image_id), io::to_u16(predictors[m]->predict(image)));
      } catch (const std::exception& ex) {
        failures[static_cast<std::size_t>(i)] = ex.what();
      }
    }
    std::size_t failed = 0;
    for (std::size_t i = 0; i < failures.size(); ++i)
      if (!failures[i].empty()) {
        err << "error: " << entries[i].image_id << ": " << failures[i] << '\n';
        ++failed;
      }
    if (failed) {
      err << failed << " of " << entries.size() << " images failed\n";
      return kExitFailure;
    }
    out << "wrote " << entries.size() * predictors.size() << " maps to " << c.resolved_maps_dir().string() << '\n';
    return kExitOk;
  });
}

int cmd_evaluate(const config::RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    c.validate();
    apply_jobs(c);
    const auto manifest = read_manifest(c.manifest_path());
    if (manifest.entries.empty()) {
      err << "error: manifest lists no stimuli\n";
      return kExitUsage;
    }

    report::Report rep;
    rep.master_seed = c.master_seed;
    rep.models = c.models;
    rep.metrics = c.metrics;
    if (!c.fixations) {
      std::vector<std::string> need;
      for (auto m : c.metrics)
        if (metrics::needs_fixations(m)) need.push_back(metrics::to_string(m));
      if (!need.empty() && c.metrics_explicit) {
        err << "error: metric(s) require fixation data but no fixation file was given:";
        for (const auto& n : need) err << ' ' << n;
        err << '\n';
        return kExitUsage;
      }
      rep.metrics = {metrics::Metric::SI};
      rep.notes.push_back("no fixation data; metrics restricted to SI");
      out << "note: no fixation data; metrics restricted to SI\n";
    }
    rep.fixation_based = c.fixations.has_value();

    std::vector<bench::EvalItem> items;
    const bool need_mask =
        std::find(rep.metrics.begin(), rep.metrics.end(), metrics::Metric::SI) != rep.metrics.end();
    for (const auto& e : manifest.entries) {
      bench::EvalItem it{e.image_id, e.group, e.dims, {}};
      if (need_mask) it.mask = load_mask(c.out_dir / e.mask);
      items.push_back(std::move(it));
    }

    std::size_t missing = 0;
    for (const auto& model : c.models)
      for (const auto& it : items)
        if (!fs::exists(map_path(c, model, it.image_id))) {
          if (missing == 0) err << "error: missing saliency map " << map_path(c, model, it.image_id).string() << '\n';
          ++missing;
        }
    if (missing) {
      err << missing << " map file(s) missing; run predict or check --maps-dir\n";
      return kExitUsage;
    }

    std::optional<fixdata::LoadResult> fix;
    if (c.fixations) {
      fixdata::LoadOptions lo;
      lo.default_dims = manifest.entries.front().dims;
      for (const auto& e : manifest.entries) lo.dims_by_image[e.image_id] = e.dims;
      fix = fixdata::load_fixations(*c.fixations, lo);
      if (fix->warnings()) out << "note: " << fix->dropped << " fixation(s) dropped out of bounds\n";
    }

    const bench::MapSource source = [&](const bench::EvalItem& item, const std::string& model) {
      return models::load_external_map(map_path(c, model, item.image_id), item.dims).map;
    };
    bench::EvalOptions eo;
    eo.metrics = rep.metrics;
    eo.master_seed = c.master_seed;
    eo.pool = c.shuffle_pool;
    eo.density.sigma_deg = c.density_sigma_deg;
    eo.center_sigma_frac = c.model_config.center_sigma_frac;
    rep.table = bench::evaluate_all(c.models, items, source, fix ? &fix->scanpaths : nullptr, eo);

    if (fix) {
      bench::GazeOptions go;
      go.max_index = c.gaze_max_index;
      go.min_count = c.gaze_min_count;
      go.pool = c.shuffle_pool;
      go.master_seed = c.master_seed;
      for (const auto& model : c.models) rep.gaze.push_back(bench::gaze_wise_sauc(model, items, source, fix->scanpaths, go));
    }
    if (std::find(c.models.begin(), c.models.end(), c.baseline) != c.models.end())
      rep.baseline = report::summarize(bench::compare_to_baseline(rep.table, c.baseline));

    std::error_code ec;
    fs::create_directories(c.report_dir(), ec);
    if (ec) {
      err << "error: cannot create " << c.report_dir().string() << '\n';
      return kExitUsage;
    }
    report::write_report_json(c.report_dir() / "report.json", rep);
    out << "evaluated " << items.size() << " images x " << c.models.size() << " models: " << rep.table.rows.size()
        << " rows -> " << (c.report_dir() / "report.json").string() << '\n';
    return kExitOk;
  });
}

int cmd_report(const config::RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto rep = report::read_report_json(c.report_dir() / "report.json");
    if (rep.table.rows.empty()) {
      err << "error: report table is empty\n";
      return kExitUsage;
    }
    const auto written = report::write_aggregates(rep, c.report_dir(), c.report_csv, c.report_svg);
    for (const auto& n : written.notes) out << "note: " << n << '\n';
    out << "wrote " << written.files.size() << " report files to " << c.report_dir().string() << '\n';
    return kExitOk;
  });
}

int run(int argc, char** argv) {
  CLI::App app{"Synthetic pop-out stimuli and saliency benchmark"};
  app.require_subcommand(1, 1);
  Overrides o;
  std::string config_path, out_dir, models, metrics, fixations, maps_dir;
  std::uint64_t seed = 0;
  int jobs = 0;
  auto* opt_config = app.add_option("--config", config_path, "Run configuration (INI)");
  auto* opt_out = app.add_option("--out", out_dir, "Output directory");
  auto* opt_seed = app.add_option("--seed", seed, "Master seed");
  auto* opt_jobs = app.add_option("--jobs", jobs, "Worker threads (0: all)")->check(CLI::NonNegativeNumber);
  auto* opt_models = app.add_option("--models", models, "Comma-separated model ids");
  auto* opt_metrics = app.add_option("--metrics", metrics, "Comma-separated metrics");
  auto* opt_fix = app.add_option("--fixations", fixations, "Fixation CSV");
  auto* opt_maps = app.add_option("--maps-dir", maps_dir, "Saliency map directory");

  auto* gen = app.add_subcommand("generate", "Render stimuli, masks and metadata");
  auto* pred = app.add_subcommand("predict", "Compute saliency maps for the manifest");
  auto* eval = app.add_subcommand("evaluate", "Score maps and write report.json");
  auto* rep = app.add_subcommand("report", "Write aggregate CSVs and SVG charts");
  for (auto* s : {gen, pred, eval, rep}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (*opt_config) o.config = config_path;
  if (*opt_out) o.out = out_dir;
  if (*opt_seed) o.seed = seed;
  if (*opt_jobs) o.jobs = jobs;
  if (*opt_models) o.models = models;
  if (*opt_metrics) o.metrics = metrics;
  if (*opt_fix) o.fixations = fixations;
  if (*opt_maps) o.maps_dir = maps_dir;

  config::RunConfig c;
  try {
    c = resolve(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  if (gen->parsed()) return cmd_generate(c, std::cout, std::cerr);
  if (pred->parsed()) return cmd_predict(c, std::cout, std::cerr);
  if (eval->parsed()) return cmd_evaluate(c, std::cout, std::cerr);
  return cmd_report(c, std::cout, std::cerr);
}

}  // namespace sal::cli
