#pragma once

#include <Eigen/Core>
#include <Eigen/StdVector>

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace fsplan::nn {

enum class Activation : std::uint8_t { Identity = 0, ReLU = 1, SiLU = 2, Tanh = 3, Sigmoid = 4 };

enum class LayerKind : std::uint8_t {
  Dense = 0,     // y = act(W x + b)
  Residual = 1,  // y = x + W2 act(W1 x + b1) + b2, in == out
};

std::string_view to_string(Activation a);

/// Flat parameter or gradient buffer. The aligned base gives every layer
/// block the same alignment on every run, so vectorized kernels sum in the
/// same order and training replays bit for bit.
template <typename Scalar>
using ParamVector = std::vector<Scalar, Eigen::aligned_allocator<Scalar>>;

struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  Activation act = Activation::Identity;
  int in = 0;
  int hidden = 0;  // residual inner width, 0 for dense
  int out = 0;

  std::size_t param_count() const;
  bool operator==(const LayerSpec&) const = default;
};

/// Feed-forward stack over column batches (features x batch). All
/// parameters live in one flat buffer so optimizers and serializers can
/// treat them uniformly; matrices are stored row-major inside it.
template <typename Scalar>
class Network {
 public:
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Cache {
    std::vector<Mat> inputs;
    std::vector<Mat> pre;     // pre-activation of the (inner) affine map
    std::vector<Mat> hidden;  // residual inner activation
  };

  Network() = default;
  explicit Network(std::vector<LayerSpec> layers);

  const std::vector<LayerSpec>& layers() const { return layers_; }
  int input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
  int output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }

  ParamVector<Scalar>& params() { return params_; }
  const ParamVector<Scalar>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)); residual output maps are
  /// scaled by `residual_out_scale` (0 starts every block at the identity).
  void init(std::mt19937_64& rng, double residual_out_scale = 0.1);

  Mat forward(const Mat& x, Cache* cache = nullptr) const;
  Vec forward_one(const Vec& x) const;

  /// Accumulates parameter gradients of sum(upstream .* output) into `grad`
  /// (same layout as params) and optionally returns the input gradient.
  void backward(const Cache& cache, const Mat& upstream, ParamVector<Scalar>& grad,
                Mat* input_grad = nullptr) const;

  template <typename Other>
  Network<Other> cast() const {
    Network<Other> n(layers_);
    for (std::size_t i = 0; i < params_.size(); ++i) n.params()[i] = static_cast<Other>(params_[i]);
    return n;
  }

  bool all_finite() const;

 private:
  using RowMap = Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using RowMapMut = Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

  std::vector<LayerSpec> layers_;
  std::vector<std::size_t> offsets_;
  ParamVector<Scalar> params_;
};

/// Dense layers with the given widths and a shared activation; the last
/// layer uses `out_act`.
std::vector<LayerSpec> mlp_layers(std::span<const int> widths, Activation act, Activation out_act);

/// Input projection, `blocks` residual blocks of width `hidden`, linear head.
std::vector<LayerSpec> residual_layers(int in, int hidden, int blocks, int out, Activation act,
                                       Activation out_act = Activation::Identity);

extern template class Network<float>;
extern template class Network<double>;

}  // namespace fsplan::nn
