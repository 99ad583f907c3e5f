#include "hijackmap/nn/layers.hpp"

#include <cmath>

#include "hijackmap/errors.hpp"

namespace hijackmap::nn {

void glorot_uniform(Tensor& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double r = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : t.data()) v = rng.uniform(-r, r);
}

// --- Dense -----------------------------------------------------------------

Dense::Dense(std::size_t n_in, std::size_t n_out, Activation act)
    : weight_({n_out, n_in}), bias_({n_out}), act_(act) {}

Dense::Dense(Tensor weight, Tensor bias, Activation act)
    : weight_(std::move(weight)), bias_(std::move(bias)), act_(act) {
  expect_rank(weight_, 2, "dense weight");
  expect_shape(bias_, {weight_.extent(0)}, "dense bias");
}

void Dense::init(Rng& rng) {
  glorot_uniform(weight_, weight_.extent(1), weight_.extent(0), rng);
  bias_.fill(0.0);
}

Tensor Dense::forward(const Tensor& x, Cache* cache) const {
  Tensor y = dense_forward(x, weight_, bias_, act_);
  if (cache) cache->tensors = {x, y};
  return y;
}

Tensor Dense::backward(const Tensor& grad_out, const Cache& cache,
                       std::span<Tensor> param_grads) const {
  auto g = dense_backward(cache.tensors[0], weight_, cache.tensors[1], act_, grad_out);
  param_grads[0] += g.dW;
  param_grads[1] += g.db;
  return std::move(g.dx);
}

std::vector<ParamRef> Dense::params() { return {{"weight", &weight_}, {"bias", &bias_}}; }

// --- Conv1D ----------------------------------------------------------------

Conv1D::Conv1D(std::size_t in_channels, std::size_t filters, std::size_t kernel_width,
               Activation act)
    : kernels_({filters, kernel_width, in_channels}), bias_({filters}), act_(act) {}

Conv1D::Conv1D(Tensor kernels, Tensor bias, Activation act)
    : kernels_(std::move(kernels)), bias_(std::move(bias)), act_(act) {
  expect_rank(kernels_, 3, "conv1d kernels");
  expect_shape(bias_, {kernels_.extent(0)}, "conv1d bias");
}

void Conv1D::init(Rng& rng) {
  const std::size_t receptive = kernels_.extent(1);
  glorot_uniform(kernels_, receptive * kernels_.extent(2), receptive * kernels_.extent(0), rng);
  bias_.fill(0.0);
}

Tensor Conv1D::forward(const Tensor& x, Cache* cache) const {
  Tensor y = conv1d_forward(x, kernels_, bias_, act_);
  if (cache) cache->tensors = {x, y};
  return y;
}

Tensor Conv1D::backward(const Tensor& grad_out, const Cache& cache,
                        std::span<Tensor> param_grads) const {
  auto g = conv1d_backward(cache.tensors[0], kernels_, cache.tensors[1], act_, grad_out);
  param_grads[0] += g.dkernels;
  param_grads[1] += g.dbias;
  return std::move(g.dx);
}

std::vector<ParamRef> Conv1D::params() { return {{"kernels", &kernels_}, {"bias", &bias_}}; }

// --- MaxPool1D / Flatten / TakeFirst ----------------------------------------

Tensor MaxPool1D::forward(const Tensor& x, Cache* cache) const {
  if (!cache) return maxpool1d_forward(x, window_, stride_);
  cache->shape = x.shape();
  return maxpool1d_forward(x, window_, stride_, &cache->indices);
}

Tensor MaxPool1D::backward(const Tensor& grad_out, const Cache& cache,
                           std::span<Tensor>) const {
  return maxpool1d_backward(grad_out, cache.indices, cache.shape);
}

Tensor Flatten::forward(const Tensor& x, Cache* cache) const {
  if (cache) cache->shape = x.shape();
  return x.reshaped({x.size()});
}

Tensor Flatten::backward(const Tensor& grad_out, const Cache& cache, std::span<Tensor>) const {
  return grad_out.reshaped(cache.shape);
}

Tensor TakeFirst::forward(const Tensor& x, Cache* cache) const {
  expect_rank(x, 2, "take_first input");
  if (cache) cache->shape = x.shape();
  auto first = x.row(0);
  return Tensor({x.extent(1)}, std::vector<double>(first.begin(), first.end()));
}

Tensor TakeFirst::backward(const Tensor& grad_out, const Cache& cache, std::span<Tensor>) const {
  Tensor dx(cache.shape);
  auto first = dx.row(0);
  std::copy(grad_out.data().begin(), grad_out.data().end(), first.begin());
  return dx;
}

// --- MultiHeadAttention ------------------------------------------------------

MultiHeadAttention::MultiHeadAttention(std::size_t d_model, std::size_t heads)
    : w_{Tensor({d_model, d_model}), Tensor({d_model, d_model}), Tensor({d_model, d_model}),
         Tensor({d_model, d_model})},
      heads_(heads) {
  if (heads == 0 || d_model % heads != 0) {
    throw ShapeError("d_model " + std::to_string(d_model) + " is not divisible by " +
                     std::to_string(heads) + " heads");
  }
}

MultiHeadAttention::MultiHeadAttention(MhaWeights weights, std::size_t heads)
    : w_(std::move(weights)), heads_(heads) {}

void MultiHeadAttention::init(Rng& rng) {
  const std::size_t d = w_.wq.extent(0);
  for (Tensor* t : {&w_.wq, &w_.wk, &w_.wv, &w_.wo}) glorot_uniform(*t, d, d, rng);
}

Tensor MultiHeadAttention::forward(const Tensor& x, Cache* cache) const {
  if (!cache) return multi_head_attention(x, heads_, w_);
  cache->tensors = {x};
  return multi_head_attention(x, heads_, w_, &cache->mha);
}

Tensor MultiHeadAttention::backward(const Tensor& grad_out, const Cache& cache,
                                    std::span<Tensor> param_grads) const {
  auto g = mha_backward(cache.tensors[0], heads_, w_, cache.mha, grad_out);
  param_grads[0] += g.dW.wq;
  param_grads[1] += g.dW.wk;
  param_grads[2] += g.dW.wv;
  param_grads[3] += g.dW.wo;
  return std::move(g.dX);
}

std::vector<ParamRef> MultiHeadAttention::params() {
  return {{"wq", &w_.wq}, {"wk", &w_.wk}, {"wv", &w_.wv}, {"wo", &w_.wo}};
}

// --- LayerNorm -------------------------------------------------------------

LayerNorm::LayerNorm(std::size_t width, double eps)
    : gamma_({width}, 1.0), beta_({width}, 0.0), eps_(eps) {}

Tensor LayerNorm::forward(const Tensor& x, Cache* cache) const {
  if (!cache) return layer_norm_forward(x, gamma_, beta_, eps_);
  cache->norms.resize(1);
  return layer_norm_forward(x, gamma_, beta_, eps_, &cache->norms[0]);
}

Tensor LayerNorm::backward(const Tensor& grad_out, const Cache& cache,
                           std::span<Tensor> param_grads) const {
  auto g = layer_norm_backward(gamma_, cache.norms[0], grad_out);
  param_grads[0] += g.dgamma;
  param_grads[1] += g.dbeta;
  return std::move(g.dx);
}

std::vector<ParamRef> LayerNorm::params() { return {{"gain", &gamma_}, {"shift", &beta_}}; }

// --- Embedding -------------------------------------------------------------

Embedding::Embedding(std::size_t vocab_size, std::size_t max_len, std::size_t d_model)
    : tokens_({vocab_size, d_model}), positions_({max_len, d_model}) {}

void Embedding::init(Rng& rng) {
  const std::size_t d = tokens_.extent(1);
  glorot_uniform(tokens_, tokens_.extent(0), d, rng);
  glorot_uniform(positions_, positions_.extent(0), d, rng);
}

Tensor Embedding::forward(const Tensor& x, Cache* cache) const {
  expect_shape(x, {max_len()}, "token id sequence");
  const std::size_t d = tokens_.extent(1);
  Tensor y({max_len(), d});
  std::vector<std::size_t> ids(max_len());
  for (std::size_t p = 0; p < max_len(); ++p) {
    const double raw = x[p];
    if (!(raw >= 0.0) || raw != std::floor(raw) || raw >= static_cast<double>(vocab_size())) {
      throw ShapeError("token id " + std::to_string(raw) + " at position " + std::to_string(p) +
                       " is outside the vocabulary of " + std::to_string(vocab_size()));
    }
    ids[p] = static_cast<std::size_t>(raw);
    auto tok = tokens_.row(ids[p]);
    auto pos = positions_.row(p);
    auto out = y.row(p);
    for (std::size_t j = 0; j < d; ++j) out[j] = tok[j] + pos[j];
  }
  if (cache) cache->indices = std::move(ids);
  return y;
}

Tensor Embedding::backward(const Tensor& grad_out, const Cache& cache,
                           std::span<Tensor> param_grads) const {
  const std::size_t d = tokens_.extent(1);
  for (std::size_t p = 0; p < cache.indices.size(); ++p) {
    auto g = grad_out.row(p);
    auto dtok = param_grads[0].row(cache.indices[p]);
    auto dpos = param_grads[1].row(p);
    for (std::size_t j = 0; j < d; ++j) {
      dtok[j] += g[j];
      dpos[j] += g[j];
    }
  }
  return Tensor({max_len()});
}

std::vector<ParamRef> Embedding::params() {
  return {{"tokens", &tokens_}, {"positions", &positions_}};
}

// --- EncoderBlock ----------------------------------------------------------

namespace {
constexpr std::size_t kAttention = 0, kNorm1 = 1, kFf1 = 2, kFf2 = 3, kNorm2 = 4;
constexpr const char* kPartNames[] = {"attn", "norm1", "ff1", "ff2", "norm2"};
}  // namespace

EncoderBlock::EncoderBlock(std::size_t d_model, std::size_t heads, std::size_t ff_width) {
  parts_.push_back(std::make_unique<MultiHeadAttention>(d_model, heads));
  parts_.push_back(std::make_unique<LayerNorm>(d_model));
  parts_.push_back(std::make_unique<Dense>(d_model, ff_width, Activation::relu));
  parts_.push_back(std::make_unique<Dense>(ff_width, d_model, Activation::none));
  parts_.push_back(std::make_unique<LayerNorm>(d_model));
}

EncoderBlock::EncoderBlock(const EncoderBlock& other) {
  for (const auto& p : other.parts_) parts_.push_back(p->clone());
}

void EncoderBlock::init(Rng& rng) {
  static_cast<MultiHeadAttention&>(*parts_[kAttention]).init(rng);
  static_cast<Dense&>(*parts_[kFf1]).init(rng);
  static_cast<Dense&>(*parts_[kFf2]).init(rng);
}

Tensor EncoderBlock::forward(const Tensor& x, Cache* cache) const {
  Cache* c[5] = {nullptr, nullptr, nullptr, nullptr, nullptr};
  if (cache) {
    cache->children.assign(5, Cache{});
    for (std::size_t i = 0; i < 5; ++i) c[i] = &cache->children[i];
  }
  Tensor s1 = parts_[kAttention]->forward(x, c[kAttention]);
  s1 += x;
  Tensor h = parts_[kNorm1]->forward(s1, c[kNorm1]);
  Tensor f = parts_[kFf2]->forward(parts_[kFf1]->forward(h, c[kFf1]), c[kFf2]);
  f += h;
  return parts_[kNorm2]->forward(f, c[kNorm2]);
}

Tensor EncoderBlock::backward(const Tensor& grad_out, const Cache& cache,
                              std::span<Tensor> param_grads) const {
  // Offsets of each part's gradients within param_grads.
  std::size_t offset[6] = {0};
  for (std::size_t i = 0; i < 5; ++i) offset[i + 1] = offset[i] + parts_[i]->param_count();
  auto grads_of = [&](std::size_t i) {
    return param_grads.subspan(offset[i], offset[i + 1] - offset[i]);
  };
  const auto& c = cache.children;

  Tensor g_s2 = parts_[kNorm2]->backward(grad_out, c[kNorm2], grads_of(kNorm2));
  Tensor g_h = parts_[kFf1]->backward(parts_[kFf2]->backward(g_s2, c[kFf2], grads_of(kFf2)),
                                      c[kFf1], grads_of(kFf1));
  g_h += g_s2;
  Tensor g_s1 = parts_[kNorm1]->backward(g_h, c[kNorm1], grads_of(kNorm1));
  Tensor g_x = parts_[kAttention]->backward(g_s1, c[kAttention], grads_of(kAttention));
  g_x += g_s1;
  return g_x;
}

std::vector<ParamRef> EncoderBlock::params() {
  std::vector<ParamRef> out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    for (auto& p : parts_[i]->params()) {
      out.push_back({std::string(kPartNames[i]) + "." + p.name, p.value});
    }
  }
  return out;
}

}  // namespace hijackmap::nn
