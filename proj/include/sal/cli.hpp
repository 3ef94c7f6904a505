#pragma once

// Command implementations behind the salbench tool. Exit codes: 0 success,
// 1 runtime failure, 2 configuration or input error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sal/bench.hpp"
#include "sal/config.hpp"

namespace sal::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int exit_code_for(ErrorCode code);

struct ManifestEntry {
  std::string image_id;
  fs::path image, mask, meta;  // relative to the manifest directory
  bench::GroupKey group;
  Dims dims;
};

struct Manifest {
  std::uint64_t master_seed = 0;
  int psi_steps = 7;
  std::vector<ManifestEntry> entries;
};

void write_manifest(const fs::path& path, const Manifest& m);
Manifest read_manifest(const fs::path& path);  // MissingInput if absent

struct Overrides {
  std::optional<fs::path> config;
  std::optional<fs::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> models;
  std::optional<std::string> metrics;
  std::optional<fs::path> fixations;
  std::optional<fs::path> maps_dir;
};

// Config file (if any) with command-line overrides applied, validated.
config::RunConfig resolve(const Overrides& o);

int cmd_generate(const config::RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_predict(const config::RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_evaluate(const config::RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_report(const config::RunConfig& c, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace sal::cli
