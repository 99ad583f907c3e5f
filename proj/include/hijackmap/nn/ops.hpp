#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hijackmap/nn/tensor.hpp"

namespace hijackmap::nn {

enum class Activation { none, relu, sigmoid };

double sigmoid(double z);

// ---------------------------------------------------------------------------
// Dense
// ---------------------------------------------------------------------------

/// y_j = act(sum_i W[j,i] x_i + b_j). `x` is either [n_in] or a stack of
/// rows [n x n_in], in which case the layer is applied to every row.
/// W is [n_out x n_in], b is [n_out].
Tensor dense_forward(const Tensor& x, const Tensor& W, const Tensor& b, Activation act);

struct DenseGrads {
  Tensor dx;
  Tensor dW;
  Tensor db;
};

/// `out` is the forward result; activation derivatives are taken from it.
DenseGrads dense_backward(const Tensor& x, const Tensor& W, const Tensor& out, Activation act,
                          const Tensor& grad_out);

// ---------------------------------------------------------------------------
// 1-D convolution (valid cross-correlation) and max pooling
// ---------------------------------------------------------------------------

/// h[i,c] = act(sum_k sum_d K[c,k,d] x[i+k,d] + b[c]).
/// x is [L x C_in] (or [L], read as one channel), kernels [C_out x m x C_in],
/// bias [C_out]. Output is [(L-m+1) x C_out].
Tensor conv1d_forward(const Tensor& x, const Tensor& kernels, const Tensor& bias,
                      Activation act = Activation::relu);

struct Conv1dGrads {
  Tensor dx;
  Tensor dkernels;
  Tensor dbias;
};

Conv1dGrads conv1d_backward(const Tensor& x, const Tensor& kernels, const Tensor& out,
                            Activation act, const Tensor& grad_out);

/// Per-channel windowed max over x [L x C] (or [L]). Output length is
/// floor((L-m)/s)+1 and keeps the input rank. When `argmax` is given it
/// receives, per output element, the flat input index of the first maximum.
Tensor maxpool1d_forward(const Tensor& x, std::size_t window, std::size_t stride,
                         std::vector<std::size_t>* argmax = nullptr);

Tensor maxpool1d_backward(const Tensor& grad_out, std::span<const std::size_t> argmax,
                          const Shape& input_shape);

// ---------------------------------------------------------------------------
// Attention
// ---------------------------------------------------------------------------

/// softmax(Q K^T / sqrt(d_k)) V, softmax taken per row. Q, K are [n x d_k],
/// V is [n x d_v]. `weights` optionally receives the [n x n] softmax matrix.
Tensor scaled_dot_attention(const Tensor& Q, const Tensor& K, const Tensor& V,
                            Tensor* weights = nullptr);

struct AttentionGrads {
  Tensor dQ;
  Tensor dK;
  Tensor dV;
};

AttentionGrads attention_backward(const Tensor& Q, const Tensor& K, const Tensor& V,
                                  const Tensor& weights, const Tensor& grad_out);

/// Packed self-attention projections, each [d_model x d_model]. Head i reads
/// columns [i*d_k, (i+1)*d_k) of wq, wk and wv, where d_k = d_model / heads.
struct MhaWeights {
  Tensor wq;
  Tensor wk;
  Tensor wv;
  Tensor wo;
};

/// Unpacked per-head projections, each [d_model x d_k].
struct HeadProjection {
  Tensor wq;
  Tensor wk;
  Tensor wv;
};

MhaWeights pack_heads(std::span<const HeadProjection> heads, const Tensor& wo);

struct MhaCache {
  Tensor q;  // X wq, [n x d_model]
  Tensor k;
  Tensor v;
  std::vector<Tensor> weights;  // per head, [n x n]
  Tensor concat;                // heads side by side, [n x d_model]
};

/// Concat(head_1..head_h) wo with head_i = attention(X wq_i, X wk_i, X wv_i).
Tensor multi_head_attention(const Tensor& X, std::size_t heads, const MhaWeights& w,
                            MhaCache* cache = nullptr);

inline Tensor multi_head_attention(const Tensor& X, std::span<const HeadProjection> heads,
                                   const Tensor& wo) {
  return multi_head_attention(X, heads.size(), pack_heads(heads, wo));
}

struct MhaGrads {
  Tensor dX;
  MhaWeights dW;
};

MhaGrads mha_backward(const Tensor& X, std::size_t heads, const MhaWeights& w,
                      const MhaCache& cache, const Tensor& grad_out);

// ---------------------------------------------------------------------------
// Layer normalization over the last axis of [n x d]
// ---------------------------------------------------------------------------

struct LayerNormCache {
  Tensor normalized;             // (x - mean) / std
  std::vector<double> inv_std;   // per row
};

Tensor layer_norm_forward(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps,
                          LayerNormCache* cache = nullptr);

struct LayerNormGrads {
  Tensor dx;
  Tensor dgamma;
  Tensor dbeta;
};

LayerNormGrads layer_norm_backward(const Tensor& gamma, const LayerNormCache& cache,
                                   const Tensor& grad_out);

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

enum class LossKind { bce, mse };

inline constexpr double kProbabilityClamp = 1e-7;

/// (1 / 2N) sum (o_i - y_i)^2.
double mse_loss(std::span<const double> o, std::span<const double> y);
std::vector<double> mse_grad(std::span<const double> o, std::span<const double> y);

/// -(1/N) sum [y ln p + (1-y) ln(1-p)] with p clamped into [1e-7, 1-1e-7].
double bce_loss(std::span<const double> p, std::span<const double> y);
/// Derivative w.r.t. p; zero where the clamp is active.
std::vector<double> bce_grad(std::span<const double> p, std::span<const double> y);

double loss_value(LossKind kind, std::span<const double> out, std::span<const double> y);
std::vector<double> loss_grad(LossKind kind, std::span<const double> out,
                              std::span<const double> y);

}  // namespace hijackmap::nn
