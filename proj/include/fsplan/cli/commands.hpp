#pragma once

#include "fsplan/cli/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsplan::cli {

namespace fs = std::filesystem;

/// Git blob hash: SHA-1 over "blob <size>\0" followed by the content.
std::string git_blob_sha1(const fs::path& file);

/// Raised when an upstream artifact is absent or no longer matches the
/// manifest of the command that produced it.
struct MissingArtifact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pipeline commands in dependency order.
inline const std::vector<std::string> kCommands{"mc", "train", "distill", "sample", "metrics", "plan-eval"};

/// Every command writes into <root>/<command>/: its outputs, the resolved
/// config.json and manifest.json (input and output hashes, report list).
/// Reports are the CSV files that replay compares; wall-clock timings are
/// outputs but not reports.
void run_command(const std::string& command, const RunConfig& cfg, const fs::path& root);

void cmd_mc(const RunConfig& cfg, const fs::path& root);
void cmd_train(const RunConfig& cfg, const fs::path& root);
void cmd_distill(const RunConfig& cfg, const fs::path& root);
void cmd_sample(const RunConfig& cfg, const fs::path& root);
void cmd_metrics(const RunConfig& cfg, const fs::path& root);
void cmd_plan_eval(const RunConfig& cfg, const fs::path& root);

struct ReplayDiff {
  std::string report;
  std::string original;
  std::string replayed;  // empty when the file is missing
};

/// Re-runs every command recorded under `root` (in pipeline order) with its
/// echoed config into `into`, then compares report hashes.
std::vector<ReplayDiff> replay(const fs::path& root, const fs::path& into);

/// Per-command stream seed: scenario-specific and independent across commands.
std::uint64_t command_seed(std::uint64_t root_seed, const std::string& command, sim::Branch b);

}  // namespace fsplan::cli
