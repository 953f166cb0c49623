#pragma once

#include "fsplan/diffusion/teacher.hpp"
#include "fsplan/distill/distill.hpp"
#include "fsplan/planner/planner.hpp"
#include "fsplan/sim/simulation.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fsplan::cli {

struct McConfig {
  int count = 100000;
};

struct DistillConfig {
  int dataset_size = 200000;
  diffusion::DenoiserArch student_arch{};
  // Pretraining runs the teacher loop on a one-step schedule.
  std::vector<double> pretrain_percentiles{100.0, 50.0, 25.0, 10.0, 0.0};
  int pretrain_prior_sims = 20000;
  int pretrain_sims_per_round = 2000;
  int pretrain_steps_per_round = 2000;
  distill::SupervisedConfig supervised{};
  distill::GanConfig gan{};
  int validation_size = 1000;  // held-out teacher records for checkpoint selection
  int metric_k = 5;
};

struct SampleConfig {
  int count = 2000;         // samples per model for the metrics
  int timing_count = 1000;  // samples per timed batch
  int timing_repeats = 3;
};

struct MetricsConfig {
  int k = 5;
};

struct PlanEvalConfig {
  int count = 20000;  // paired rollouts per scenario
  planner::PlannerConfig planner{};
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::vector<sim::Branch> scenarios{sim::Branch::East, sim::Branch::West, sim::Branch::South, sim::Branch::North};
  sim::SimConfig sim{};
  McConfig mc{};
  diffusion::TeacherConfig teacher{};
  DistillConfig distill{};
  SampleConfig sample{};
  MetricsConfig metrics{};
  PlanEvalConfig plan_eval{};

  void validate() const;
};

/// Defaults overlaid with the keys present in `j`; unknown keys throw.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
RunConfig load_config(const std::filesystem::path& path);

/// "east", "west", "south", "north" or "all".
std::vector<sim::Branch> parse_scenarios(const std::string& name);

}  // namespace fsplan::cli
