#pragma once

#include "fsplan/diffusion/diffusion.hpp"
#include "fsplan/diffusion/teacher.hpp"
#include "fsplan/nn/adamw.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

namespace fsplan::distill {

using diffusion::Conditioning;
using diffusion::DenoiserModel;
using diffusion::Mat;
using diffusion::MatF;
using TeacherRecord = diffusion::Record;

inline constexpr std::uint32_t kDatasetVersion = 1;

/// "CFTD", u32 version, u32 count, then per record float32 eps[92] (row-major
/// 23x4), float32 rho, float32 s0[8]. The scenario code is not stored.
void write_dataset(const std::filesystem::path& path, std::span<const TeacherRecord> records);
std::vector<TeacherRecord> read_dataset(const std::filesystem::path& path);

/// Record j draws its scenario and initial state from derive_rng(seed, j);
/// teacher noise for all records comes as one batch from derive_rng(seed, N)
/// at rho_threshold = 0. Noise and s0 are rounded to float32 before the
/// episode runs, so stored records re-simulate exactly.
std::vector<TeacherRecord> build_teacher_dataset(const DenoiserModel& teacher, const sim::Simulator& sim, int count,
                                                 std::uint64_t seed);

/// Re-simulates every record with the scenario re-derived from (seed, j).
/// Returns the index of the first record whose float32 robustness differs, or -1.
long verify_teacher_dataset(const sim::Simulator& sim, sim::Branch scenario, std::span<const TeacherRecord> records,
                            std::uint64_t seed);

/// One-step student: a clean-predicting denoiser on the K = 1 cosine schedule
/// (beta_hat = 0.999), so the net output is the reverse-step mean itself.
DenoiserModel create_student(const diffusion::DenoiserArch& arch, double prior_std, sim::Branch scenario,
                             std::mt19937_64& rng, double beta_hat = 0.0);
double beta_hat(const DenoiserModel& student);

sim::NoiseSequence student_sample(const DenoiserModel& student, const Conditioning& cond, std::mt19937_64& rng);

/// Normalized teacher samples with their conditioning (record's achieved rho).
struct Batch {
  Mat x;   // 92 x B
  MatF cond;
};
Batch gather_batch(const DenoiserModel& model, std::span<const TeacherRecord> data,
                   const std::vector<std::size_t>& index);

/// Student forward diffusion x~ = sqrt(1 - beta_hat) x + sqrt(beta_hat) z and
/// its one-step reconstruction (the mean of the final reverse step).
struct Reconstruction {
  Mat x_tilde;
  Mat eps_hat;
  nn::Network<float>::Cache cache;
};
Reconstruction reconstruct(const DenoiserModel& student, const Batch& batch, const Mat& z, bool keep_cache);
/// d eps_hat / d(net output).
double output_gain(const DenoiserModel& student);

struct SupervisedConfig {
  int steps = 50000;
  int batch = 256;
  double lr = 1e-3;
  double weight_decay = 1e-5;
};

/// Mean over elements of (eps_hat - eps)^2; gradient into `grad` when given.
double supervised_loss(const DenoiserModel& student, const Batch& batch, const Mat& z,
                       nn::ParamVector<float>* grad = nullptr);

/// Returns the mean loss of the last 10% of steps.
double supervised_pretrain(DenoiserModel& student, nn::AdamW& opt, std::span<const TeacherRecord> data,
                           const SupervisedConfig& cfg, std::mt19937_64& rng);

struct GanLosses {
  double generator_adv = 0.0;      // mean -log M(eps_hat)
  double discriminator_adv = 0.0;  // mean -log(1 - M(eps_hat)) - log M(eps)
  double distill = 0.0;            // mean ||eps_hat - eps_hat_teacher||^2
  double total = 0.0;              // generator_adv + lambda * distill
  int saturated = 0;               // discriminator outputs hit the clamp
};

inline constexpr double kProbClamp = 1e-7;

/// Batch-averaged losses from discriminator probabilities on fake (student)
/// and real (teacher) samples; columns of the matrices are samples.
GanLosses gan_losses(const Eigen::ArrayXd& m_fake, const Eigen::ArrayXd& m_real, const Mat& eps_hat,
                     const Mat& eps_hat_teacher, double lambda);

/// Unconditional scorer over normalized eps: one residual block, linear logit.
nn::Network<float> make_discriminator(int hidden, std::mt19937_64& rng);
Eigen::ArrayXd discriminator_prob(const nn::Network<float>& disc, const Mat& x,
                                  nn::Network<float>::Cache* cache = nullptr);

/// Teacher reconstruction of a batch: diffuse to a uniform random step and
/// denoise in one shot. Treated as a constant target by the generator.
using TeacherTarget = std::function<Mat(const Mat& eps_hat, const MatF& cond, std::mt19937_64& rng)>;
TeacherTarget teacher_target(const DenoiserModel& teacher);

struct GanConfig {
  int iterations = 2000;
  int batch = 2048;
  double lr = 3e-4;
  double generator_weight_decay = 0.6;
  double discriminator_weight_decay = 0.1;
  double lambda = 1.0;
  double beta1 = 0.5;  // Adam first-moment decay for both players
  int discriminator_hidden = 256;
  int checkpoint_every = 100;   // validation interval C
  int divergence_window = 200;  // moving median length
  int divergence_patience = 100;
  double divergence_factor = 10.0;
};

struct GanLog {
  int iteration = 0;
  GanLosses losses;
  double validation = 0.0;
};

/// Alternating optimizer state. Each step touches only its own network.
class GanTrainer {
 public:
  GanTrainer(DenoiserModel& student, TeacherTarget teacher, const GanConfig& cfg, std::mt19937_64& rng);

  const nn::Network<float>& discriminator() const { return disc_; }
  nn::Network<float>& discriminator() { return disc_; }

  /// Draws the student reconstruction for a batch (z from rng).
  Mat generate(const Batch& b, std::mt19937_64& rng) const;
  GanLosses discriminator_step(const Batch& b, const Mat& eps_hat);
  GanLosses generator_step(const Batch& b, std::mt19937_64& rng);

 private:
  DenoiserModel& student_;
  TeacherTarget teacher_;
  GanConfig cfg_;
  nn::Network<float> disc_;
  nn::AdamW disc_opt_;
  nn::AdamW gen_opt_;
};

/// Higher is better; called every checkpoint_every iterations.
using Validator = std::function<double(const DenoiserModel&)>;

struct GanResult {
  DenoiserModel best;
  double best_validation = 0.0;
  int best_iteration = 0;
  std::vector<GanLog> log;
  nn::Network<float> discriminator;
};

/// Alternating training; throws std::runtime_error when the generator loss
/// stays above divergence_factor times its moving median for
/// divergence_patience iterations.
GanResult gan_distill(const DenoiserModel& student, const TeacherTarget& teacher,
                      std::span<const TeacherRecord> data, const GanConfig& cfg, std::uint64_t seed,
                      const Validator& validate);

}  // namespace fsplan::distill
