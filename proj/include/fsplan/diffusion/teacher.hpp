#pragma once

#include "fsplan/diffusion/diffusion.hpp"
#include "fsplan/nn/adamw.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace fsplan::diffusion {

/// One simulated (noise, achieved robustness, initial state) triple.
struct Record {
  sim::NoiseSequence eps;
  double rho = 0.0;
  sim::Vec8 s0 = sim::Vec8::Zero();
  std::uint8_t scenario_code = 0;  // packed sim::Scenario
};

/// Draws one noise sequence per conditioning entry.
using NoiseSampler =
    std::function<std::vector<sim::NoiseSequence>(const std::vector<Conditioning>&, std::mt19937_64&)>;

/// Simulates `count` IDM episodes with intruders from `spawn`. Item i uses
/// the stream derive_rng(seed, i) for its scenario and initial state; the
/// noise comes from the prior (null sampler) or from `sampler` at
/// `rho_threshold`, drawn as one batch from derive_rng(seed, count).
std::vector<Record> collect_records(const sim::Simulator& sim, sim::Branch spawn, int count, std::uint64_t seed,
                                    const NoiseSampler& sampler = nullptr, double rho_threshold = 0.0);

struct RegressionBatch {
  std::vector<std::size_t> index;
  std::vector<int> k;
  Mat z;
};

/// Fixed draw of (record, step, noise) triples. When `elite` is non-empty a
/// fraction `elite_fraction` of the batch is drawn from those record indices.
RegressionBatch draw_regression_batch(std::size_t n_records, int batch, const VarianceSchedule& sch,
                                      std::mt19937_64& rng, const std::vector<std::size_t>& elite = {},
                                      double elite_fraction = 0.0);

/// Mean squared prediction error on a batch (noise, or the clean sample for
/// clean-predicting models); optionally accumulates the
/// parameter gradient of that mean into `grad`.
double regression_loss(const DenoiserModel& model, const std::vector<Record>& data, const RegressionBatch& b,
                       nn::ParamVector<float>* grad = nullptr);

/// `steps` AdamW steps of noise-prediction regression, conditioning on the
/// achieved robustness. Returns the mean training loss of the last 10% of steps.
double fit_denoiser(DenoiserModel& model, nn::AdamW& opt, const std::vector<Record>& data, int steps, int batch,
                    std::mt19937_64& rng, const std::vector<std::size_t>& elite = {},
                    double elite_fraction = 0.0);

/// q-th percentile (nearest lower rank) of the values, q in [0, 100].
double percentile(std::vector<double> values, double q);

struct TeacherConfig {
  int K = 1000;
  DenoiserArch arch{};
  ConditionBounds bounds{};
  std::vector<double> percentiles{100.0, 50.0, 25.0, 10.0, 0.0};
  int prior_sims = 20000;     // round 0 draws from the prior
  int sims_per_round = 2000;  // later rounds sample the model
  int steps_per_round = 2000;
  int batch = 256;
  double lr = 1e-3;
  double weight_decay = 1e-5;
  int validation_batch = 1024;
  // Share of each minibatch drawn from records at or below the next round's
  // robustness percentile (the final round reuses its own).
  double elite_fraction = 0.5;
  // One-step students run the same loop with a clean-predicting net.
  bool predicts_clean = false;
};

struct RoundLog {
  int round = 0;
  double threshold = 0.0;
  int sims = 0;
  int failures = 0;
  int elite = 0;
  int fit_elite = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
};

struct TeacherResult {
  DenoiserModel model;
  nn::AdamW optimizer;
  std::vector<Record> data;
  std::vector<RoundLog> rounds;
};

/// Iterative rounds: round 0 draws prior noise; round r > 0 samples the
/// current model at the q_r-th percentile of all robustness values seen so
/// far. Every round refits the denoiser on the pooled data. Throws
/// std::runtime_error when a round produces no sample at or below its
/// threshold. `K` of the config sets the schedule, so the same loop
/// pretrains one-step students.
TeacherResult train_teacher(const sim::Simulator& sim, sim::Branch scenario, const TeacherConfig& cfg,
                            std::uint64_t seed);

/// Produces `count` records from seed; prior noise when the sampler is null.
using Collector = std::function<std::vector<Record>(int count, std::uint64_t seed, const NoiseSampler& sampler,
                                                    double rho_threshold)>;

/// Same loop over an arbitrary record source with prior scale `prior_std`.
TeacherResult train_teacher(const Collector& collect, double prior_std, sim::Branch scenario,
                            const TeacherConfig& cfg, std::uint64_t seed);

}  // namespace fsplan::diffusion
