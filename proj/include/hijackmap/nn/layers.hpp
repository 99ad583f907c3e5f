#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hijackmap/nn/ops.hpp"
#include "hijackmap/nn/tensor.hpp"
#include "hijackmap/random.hpp"

namespace hijackmap::nn {

/// Per-call state a layer keeps between forward and backward.
struct Cache {
  Shape shape;
  std::vector<Tensor> tensors;
  std::vector<std::size_t> indices;
  MhaCache mha;
  std::vector<LayerNormCache> norms;
  std::vector<Cache> children;
};

struct ParamRef {
  std::string name;
  Tensor* value;
};

/// A differentiable stage. Forward is const; everything backward needs goes
/// into the caller-owned Cache, so one layer can serve concurrent inference.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual std::string_view kind() const = 0;
  virtual std::unique_ptr<Layer> clone() const = 0;

  /// `cache` may be null for inference-only calls.
  virtual Tensor forward(const Tensor& x, Cache* cache) const = 0;

  /// Returns d loss / d input and accumulates parameter gradients into
  /// `param_grads`, which is aligned with params().
  virtual Tensor backward(const Tensor& grad_out, const Cache& cache,
                          std::span<Tensor> param_grads) const = 0;

  /// Trainable tensors, in a fixed order.
  virtual std::vector<ParamRef> params() { return {}; }
  std::size_t param_count() { return params().size(); }
};

/// Glorot-uniform fill: U(-r, r) with r = sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

class Dense final : public Layer {
 public:
  Dense(std::size_t n_in, std::size_t n_out, Activation act);
  Dense(Tensor weight, Tensor bias, Activation act);

  std::string_view kind() const override { return "dense"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Dense>(*this); }
  Tensor forward(const Tensor& x, Cache* cache) const override;
  Tensor backward(const Tensor& grad_out, const Cache& cache,
                  std::span<Tensor> param_grads) const override;
  std::vector<ParamRef> params() override;

  void init(Rng& rng);
  Tensor& weight() { return weight_; }
  Tensor& bias() { return bias_; }
  Activation activation() const { return act_; }

 private:
  Tensor weight_;  // [n_out x n_in]
  Tensor bias_;    // [n_out]
  Activation act_;
};

class Conv1D final : public Layer {
 public:
  Conv1D(std::size_t in_channels, std::size_t filters, std::size_t kernel_width,
         Activation act = Activation::relu);
  Conv1D(Tensor kernels, Tensor bias, Activation act = Activation::relu);

  std::string_view kind() const override { return "conv1d"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Conv1D>(*this); }
  Tensor forward(const Tensor& x, Cache* cache) const override;
  Tensor backward(const Tensor& grad_out, const Cache& cache,
                  std::span<Tensor> param_grads) const override;
  std::vector<ParamRef> params() override;

  void init(Rng& rng);
  std::size_t kernel_width() const { return kernels_.extent(1); }
  std::size_t filters() const { return kernels_.extent(0); }

 private:
  Tensor kernels_;  // [filters x width x in_channels]
  Tensor bias_;
  Activation act_;
};

class MaxPool1D final : public Layer {
 public:
  MaxPool1D(std::size_t window, std::size_t stride) : window_(window), stride_(stride) {}

  std::string_view kind() const override { return "maxpool1d"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<MaxPool1D>(*this); }
  Tensor forward(const Tensor& x, Cache* cache) const override;
  Tensor backward(const Tensor& grad_out, const Cache& cache,
                  std::span<Tensor> param_grads) const override;

  std::size_t window() const { return window_; }
  std::size_t stride() const { return stride_; }

 private:
  std::size_t window_;
  std::size_t stride_;
};

class Flatten final : public Layer {
 public:
  std::string_view kind() const override { return "flatten"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Flatten>(*this); }
  Tensor forward(const Tensor& x, Cache* cache) const override;
  Tensor backward(const Tensor& grad_out, const Cache& cache,
                  std::span<Tensor> param_grads) const override;
};

/// Self-attention block of `heads` heads over [n x d_model] input.
class MultiHeadAttention final : public Layer {
 public:
  MultiHeadAttention(std::size_t d_model, std::size_t heads);
  MultiHeadAttention(MhaWeights weights, std::size_t heads);

  std::string_view kind() const override { return "multihead_attention"; }
  std::unique_ptr<Layer> clone() const override {
    return std::make_unique<MultiHeadAttention>(*this);
  }
  Tensor forward(const Tensor& x, Cache* cache) const override;
  Tensor backward(const Tensor& grad_out, const Cache& cache,
                  std::span<Tensor> param_grads) const override;
  std::vector<ParamRef> params() override;

  void init(Rng& rng);
  std::size_t heads() const { return heads_; }

 private:
  MhaWeights w_;
  std::size_t heads_;
};

class LayerNorm final : public Layer {
 public:
  explicit LayerNorm(std::size_t width, double eps = 1e-5);

  std::string_view kind() const override { return "layer_norm"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<LayerNorm>(*this); }
  Tensor forward(const Tensor& x, Cache* cache) const override;
  Tensor backward(const Tensor& grad_out, const Cache& cache,
                  std::span<Tensor> param_grads) const override;
  std::vector<ParamRef> params() override;

  Tensor& gain() { return gamma_; }
  Tensor& shift() { return beta_; }

 private:
  Tensor gamma_;
  Tensor beta_;
  double eps_;
};

/// Token plus learned position embedding. Input is a [max_len] tensor of
/// integral token ids; output is [max_len x d_model].
class Embedding final : public Layer {
 public:
  Embedding(std::size_t vocab_size, std::size_t max_len, std::size_t d_model);

  std::string_view kind() const override { return "embedding"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Embedding>(*this); }
  Tensor forward(const Tensor& x, Cache* cache) const override;
  /// Token ids are not differentiable; the returned input gradient is zero.
  Tensor backward(const Tensor& grad_out, const Cache& cache,
                  std::span<Tensor> param_grads) const override;
  std::vector<ParamRef> params() override;

  void init(Rng& rng);
  std::size_t vocab_size() const { return tokens_.extent(0); }
  std::size_t max_len() const { return positions_.extent(0); }

 private:
  Tensor tokens_;     // [vocab x d_model]
  Tensor positions_;  // [max_len x d_model]
};

/// Post-norm transformer encoder layer:
///   h   = LayerNorm(x + MultiHead(x))
///   out = LayerNorm(h + W2 relu(W1 h + b1) + b2)
class EncoderBlock final : public Layer {
 public:
  EncoderBlock(std::size_t d_model, std::size_t heads, std::size_t ff_width);
  EncoderBlock(const EncoderBlock& other);
  EncoderBlock& operator=(const EncoderBlock&) = delete;

  std::string_view kind() const override { return "encoder"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<EncoderBlock>(*this); }
  Tensor forward(const Tensor& x, Cache* cache) const override;
  Tensor backward(const Tensor& grad_out, const Cache& cache,
                  std::span<Tensor> param_grads) const override;
  std::vector<ParamRef> params() override;

  void init(Rng& rng);

 private:
  std::vector<std::unique_ptr<Layer>> parts_;  // attention, norm1, ff1, ff2, norm2
};

/// Keeps row 0 of a [n x d] input (first-position pooling).
class TakeFirst final : public Layer {
 public:
  std::string_view kind() const override { return "take_first"; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<TakeFirst>(*this); }
  Tensor forward(const Tensor& x, Cache* cache) const override;
  Tensor backward(const Tensor& grad_out, const Cache& cache,
                  std::span<Tensor> param_grads) const override;
};

}  // namespace hijackmap::nn
