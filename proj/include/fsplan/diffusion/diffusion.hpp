#pragma once

#include "fsplan/nn/checkpoint.hpp"
#include "fsplan/nn/network.hpp"
#include "fsplan/sim/simulation.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <functional>
#include <random>
#include <vector>

namespace fsplan::diffusion {

using Mat = Eigen::MatrixXd;
using MatF = Eigen::MatrixXf;

/// beta[k] and alpha_bar[k] for k = 0..K; beta[0] is unused (0) and alpha_bar[0] = 1.
struct VarianceSchedule {
  int K = 0;
  std::vector<double> beta;
  std::vector<double> alpha_bar;
};

/// alpha_bar_k = f(k)/f(0), f(k) = cos^2(((k/K)+s)/(1+s) * pi/2); beta_k = 1 - alpha_bar_k/alpha_bar_{k-1},
/// clipped at 0.999 (alpha_bar is then rebuilt as the product of 1 - beta).
VarianceSchedule cosine_schedule(int K, double s = 0.008);
VarianceSchedule schedule_from_betas(std::vector<double> betas);

struct Diffused {
  Eigen::VectorXd x;
  Eigen::VectorXd z;
};

/// x_k = sqrt(abar_k) x0 + sqrt(1 - abar_k) z.
Diffused forward_diffuse(const Eigen::VectorXd& x0, int k, const VarianceSchedule& sch,
                         std::mt19937_64& rng);

/// Noise prediction z_hat for a column batch of x_k at step k.
using NoisePredictor = std::function<Mat(const Mat& x, int k)>;

/// mu = (x_k - beta_k / sqrt(1 - abar_k) * z_hat) / sqrt(1 - beta_k); adds sqrt(beta_k) z for k > 1.
/// With clip_x0 > 0 the clean estimate implied by z_hat is first clamped to
/// [-clip_x0, clip_x0] and z_hat recomputed from it.
Mat reverse_step(const VarianceSchedule& sch, const Mat& x, const Mat& z_hat, int k, std::mt19937_64& rng,
                 double clip_x0 = 0.0);

/// Ancestral chain from x_K down to x_0.
Mat ancestral_sample(const VarianceSchedule& sch, const NoisePredictor& predict, Mat x_K,
                     std::mt19937_64& rng, double clip_x0 = 0.0);

Mat standard_normal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// Conditioning: robustness threshold and initial state.
struct Conditioning {
  double rho_threshold = 0.0;
  sim::Vec8 s0 = sim::Vec8::Zero();
};

/// Min-max bounds mapping conditioning values onto [-1, 1].
struct ConditionBounds {
  double rho_lo = 0.0;
  double rho_hi = 0.5;
  sim::Vec8 s0_lo = (sim::Vec8() << -0.7, -0.7, -0.6, -0.6, -0.7, -0.7, -0.6, -0.6).finished();
  sim::Vec8 s0_hi = (sim::Vec8() << 0.7, 0.7, 0.6, 0.6, 0.7, 0.7, 0.6, 0.6).finished();
  bool relative_s0 = false;  // intruder position relative to the ego
};

inline constexpr int kStepEmbedding = 32;
inline constexpr int kCondDim = 1 + sim::kStateDim;
inline constexpr int kDenoiserInput = sim::kNoiseLength + kStepEmbedding + kCondDim;

/// Sinusoidal features of the denoising step (16 frequencies, sin and cos).
Eigen::VectorXf step_embedding(int k);
Eigen::VectorXf condition_features(const Conditioning& c, const ConditionBounds& b);

struct DenoiserArch {
  int hidden = 128;
  int blocks = 3;
};

/// Conditional noise predictor over the flattened 92-dim sequence plus the
/// fixed normalization constants. Also serves as the one-step student when
/// the schedule has K = 1.
struct DenoiserModel {
  nn::Network<float> net;
  VarianceSchedule schedule;
  Eigen::VectorXd data_scale = Eigen::VectorXd::Ones(sim::kNoiseLength);  // per component
  double prior_std = 1.0;                                                   // sqrt(gamma)
  double clip_x0 = 8.0;  // normalized units, 0 disables
  ConditionBounds bounds;
  sim::Branch scenario = sim::Branch::South;
  // The net outputs the clean estimate instead of the noise. Used by the
  // one-step student, where a noise output would be amplified by
  // sqrt(beta / (1 - beta)) in the reverse step.
  bool predicts_clean = false;

  static DenoiserModel create(const DenoiserArch& arch, VarianceSchedule schedule, double prior_std,
                              sim::Branch scenario, std::mt19937_64& rng);

  /// Network input for a batch of normalized x at step k with per-column conditioning.
  MatF network_input(const Mat& x, int k, const MatF& cond_features) const;
  /// Noise estimate z_hat whatever the net outputs.
  Mat predict_noise(const Mat& x, int k, const MatF& cond_features) const;

  Eigen::VectorXd normalize(const sim::NoiseSequence& eps) const;
  sim::NoiseSequence denormalize(const Eigen::VectorXd& x) const;

  MatF condition_matrix(const std::vector<Conditioning>& conds) const;
};

/// One sample per conditioning entry, columns drawn in order from `rng`.
std::vector<sim::NoiseSequence> sample(const DenoiserModel& model, const std::vector<Conditioning>& conds,
                                       std::mt19937_64& rng);
sim::NoiseSequence sample_one(const DenoiserModel& model, const Conditioning& cond, std::mt19937_64& rng);

void save_model(const std::filesystem::path& path, const DenoiserModel& m, const nn::AdamW* opt = nullptr);
DenoiserModel load_model(const std::filesystem::path& path);
nn::Sections model_sections(const DenoiserModel& m);
DenoiserModel model_from_checkpoint(nn::Checkpoint ck);

}  // namespace fsplan::diffusion
