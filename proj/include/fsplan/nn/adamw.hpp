#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fsplan::nn {

struct AdamWConfig {
  double lr = 1e-3;
  double weight_decay = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// AdamW with decoupled weight decay: theta *= (1 - lr*wd), then the
/// bias-corrected Adam step. Moments are kept in double.
class AdamW {
 public:
  AdamW() = default;
  AdamW(AdamWConfig cfg, std::size_t param_count)
      : cfg_(cfg), m_(param_count, 0.0), v_(param_count, 0.0) {}

  const AdamWConfig& config() const { return cfg_; }
  AdamWConfig& config() { return cfg_; }
  std::uint64_t step_count() const { return step_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }

  /// Throws std::runtime_error on a non-finite gradient (parameters untouched).
  template <typename Scalar>
  void step(std::span<Scalar> params, std::span<const Scalar> grads);

  /// Restore a saved state.
  void restore(std::uint64_t step, std::vector<double> m, std::vector<double> v);

 private:
  AdamWConfig cfg_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t step_ = 0;
};

}  // namespace fsplan::nn
