#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sal/cli.hpp"
#include "sal/config.hpp"

using namespace sal;
using namespace sal::config;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_config(text).validate();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Config, DefaultsWhenEmpty) {
  const auto c = parse_config("");
  EXPECT_EQ(c.out_dir, fs::path("run"));
  EXPECT_EQ(c.models, (std::vector<std::string>{"center", "sr", "pft", "dog"}));
  EXPECT_EQ(c.metrics, std::vector<metrics::Metric>{metrics::Metric::SI});
  EXPECT_FALSE(c.metrics_explicit);
  EXPECT_EQ(c.resolved_maps_dir(), fs::path("run") / "maps");
  EXPECT_EQ(c.psi_levels.size(), 7u);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParsesEverySection) {
  const auto c = parse_config(R"(
[run]
out_dir = /tmp/x
master_seed = 42
jobs = 3

[generate]
blocks = 9, 10
psi = 5,6,7
canvas = 640x512
px_per_deg = 20

[predict]
models = sr,dog
maps_dir = /tmp/maps
resize_width = 128
smoothing_sigma = 2.5
dog_scales = 1:3, 2:6
dog_width = 0

[evaluate]
metrics = NSS, sAUC, SI
fixations = fix.csv
shuffle_pool = global
gaze_max_index = 4
gaze_min_count = 5

[report]
svg = false
baseline = sr
)");
  EXPECT_EQ(c.out_dir, fs::path("/tmp/x"));
  EXPECT_EQ(c.master_seed, 42u);
  EXPECT_EQ(c.jobs, 3);
  EXPECT_EQ(c.blocks, (std::vector<int>{9, 10}));
  EXPECT_EQ(c.psi_levels, (std::vector<int>{5, 6, 7}));
  EXPECT_EQ(c.canvas, (Dims{640, 512}));
  EXPECT_EQ(c.px_per_deg, 20.0);
  EXPECT_EQ(c.models, (std::vector<std::string>{"sr", "dog"}));
  EXPECT_EQ(c.resolved_maps_dir(), fs::path("/tmp/maps"));
  EXPECT_EQ(c.model_config.resize_width_px, 128);
  EXPECT_EQ(c.model_config.smoothing_sigma_px, 2.5);
  ASSERT_EQ(c.model_config.dog_scales.size(), 2u);
  EXPECT_EQ(c.model_config.dog_scales[1].surround, 6.0);
  EXPECT_EQ(c.model_config.dog_width_px, 0);
  EXPECT_EQ(c.metrics.size(), 3u);
  EXPECT_TRUE(c.metrics_explicit);
  EXPECT_EQ(*c.fixations, fs::path("fix.csv"));
  EXPECT_EQ(c.shuffle_pool, bench::ShufflePool::Global);
  EXPECT_EQ(c.gaze_max_index, 4);
  EXPECT_EQ(c.gaze_min_count, 5u);
  EXPECT_TRUE(c.report_csv);
  EXPECT_FALSE(c.report_svg);
  EXPECT_EQ(c.baseline, "sr");
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.generator().blocks, c.blocks);
}

TEST(Config, RejectsUnknownAndMalformedEntries) {
  EXPECT_EQ(code_of("[run]\ncolour = red\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[extras]\na = 1\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[run]\nmaster_seed = abc\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[generate]\nblocks = 16\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[generate]\ncanvas = 640\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[predict]\ndog_scales = 4:2\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[predict]\nresize_width = 8\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[evaluate]\nmetrics = EMD\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[evaluate]\nshuffle_pool = nearby\n"), ErrorCode::ConfigError);
  EXPECT_EQ(code_of("[report]\ncsv = maybe\n"), ErrorCode::ConfigError);
  EXPECT_THROW(load_config("/nonexistent/sal.ini"), Error);
}

TEST(Config, ListHelpers) {
  EXPECT_EQ(split_list(" a, b ,,c "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(parse_int_list("1,2, 3", "x"), (std::vector<int>{1, 2, 3}));
  EXPECT_THROW(parse_int_list("1,x", "x"), Error);
  EXPECT_EQ(parse_metric_list("auc_judd,kl").size(), 2u);
}

TEST(Config, CommandLineOverridesWinOverFile) {
  const auto dir = fs::temp_directory_path() / "sal_config_override";
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "c.ini");
    f << "[run]\nout_dir = from_file\nmaster_seed = 1\n[predict]\nmodels = dog\n";
  }
  cli::Overrides o;
  o.config = dir / "c.ini";
  o.seed = 9;
  o.models = "center,sr";
  o.metrics = "NSS";
  const auto c = cli::resolve(o);
  EXPECT_EQ(c.out_dir, fs::path("from_file"));
  EXPECT_EQ(c.master_seed, 9u);
  EXPECT_EQ(c.models, (std::vector<std::string>{"center", "sr"}));
  EXPECT_TRUE(c.metrics_explicit);
  o.out = dir / "elsewhere";
  EXPECT_EQ(cli::resolve(o).out_dir, dir / "elsewhere");
}
