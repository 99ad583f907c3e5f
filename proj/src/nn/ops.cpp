#include "hijackmap/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hijackmap/errors.hpp"

namespace hijackmap::nn {

namespace {

// C = A B for A [n x k], B [k x m].
Tensor matmul(const Tensor& A, const Tensor& B) {
  const std::size_t n = A.extent(0), k = A.extent(1), m = B.extent(1);
  Tensor C({n, m});
  for (std::size_t i = 0; i < n; ++i) {
    auto c = C.row(i);
    for (std::size_t p = 0; p < k; ++p) {
      const double a = A.at(i, p);
      if (a == 0.0) continue;
      auto b = B.row(p);
      for (std::size_t j = 0; j < m; ++j) c[j] += a * b[j];
    }
  }
  return C;
}

// C = A^T B for A [k x n], B [k x m].
Tensor matmul_tn(const Tensor& A, const Tensor& B) {
  const std::size_t k = A.extent(0), n = A.extent(1), m = B.extent(1);
  Tensor C({n, m});
  for (std::size_t p = 0; p < k; ++p) {
    auto a = A.row(p);
    auto b = B.row(p);
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      auto c = C.row(i);
      for (std::size_t j = 0; j < m; ++j) c[j] += a[i] * b[j];
    }
  }
  return C;
}

// C = A B^T for A [n x k], B [m x k].
Tensor matmul_nt(const Tensor& A, const Tensor& B) {
  const std::size_t n = A.extent(0), k = A.extent(1), m = B.extent(0);
  Tensor C({n, m});
  for (std::size_t i = 0; i < n; ++i) {
    auto a = A.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      auto b = B.row(j);
      double s = 0.0;
      for (std::size_t p = 0; p < k; ++p) s += a[p] * b[p];
      C.at(i, j) = s;
    }
  }
  return C;
}

Tensor column_block(const Tensor& X, std::size_t offset, std::size_t width) {
  Tensor out({X.extent(0), width});
  for (std::size_t r = 0; r < X.extent(0); ++r) {
    auto src = X.row(r);
    std::copy(src.begin() + offset, src.begin() + offset + width, out.row(r).begin());
  }
  return out;
}

void put_column_block(Tensor& X, std::size_t offset, const Tensor& block) {
  for (std::size_t r = 0; r < X.extent(0); ++r) {
    auto src = block.row(r);
    std::copy(src.begin(), src.end(), X.row(r).begin() + offset);
  }
}

double activate(double z, Activation act) {
  switch (act) {
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::sigmoid: return sigmoid(z);
    case Activation::none: break;
  }
  return z;
}

// d act / d z expressed through the activation output.
double activation_slope(double out, Activation act) {
  switch (act) {
    case Activation::relu: return out > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: return out * (1.0 - out);
    case Activation::none: break;
  }
  return 1.0;
}

void check_lengths(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw ShapeError(std::string(what) + ": prediction length " + std::to_string(a.size()) +
                     " differs from target length " + std::to_string(b.size()));
  }
  if (a.empty()) throw ShapeError(std::string(what) + ": empty input");
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// ---------------------------------------------------------------------------

Tensor dense_forward(const Tensor& x, const Tensor& W, const Tensor& b, Activation act) {
  expect_rank(W, 2, "dense weight");
  const std::size_t n_out = W.extent(0), n_in = W.extent(1);
  expect_shape(b, {n_out}, "dense bias");
  if (x.rank() == 0 || x.rank() > 2 || x.shape().back() != n_in) {
    throw ShapeError("dense input has shape " + shape_string(x.shape()) + ", expected [" +
                     std::to_string(n_in) + "] or [n x " + std::to_string(n_in) + "]");
  }
  const std::size_t rows = x.rank() == 1 ? 1 : x.extent(0);
  Tensor y(x.rank() == 1 ? Shape{n_out} : Shape{rows, n_out});
  auto xs = x.data();
  auto ws = W.data();
  auto ys = y.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = xs.data() + r * n_in;
    for (std::size_t j = 0; j < n_out; ++j) {
      const double* wj = ws.data() + j * n_in;
      double s = b[j];
      for (std::size_t i = 0; i < n_in; ++i) s += wj[i] * xr[i];
      ys[r * n_out + j] = activate(s, act);
    }
  }
  return y;
}

DenseGrads dense_backward(const Tensor& x, const Tensor& W, const Tensor& out, Activation act,
                          const Tensor& grad_out) {
  expect_shape(grad_out, out.shape(), "dense output gradient");
  const std::size_t n_out = W.extent(0), n_in = W.extent(1);
  const std::size_t rows = x.rank() == 1 ? 1 : x.extent(0);
  DenseGrads g{Tensor(x.shape()), Tensor(W.shape()), Tensor(Shape{n_out})};
  auto xs = x.data();
  auto ws = W.data();
  auto dx = g.dx.data();
  auto dW = g.dW.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = xs.data() + r * n_in;
    double* dxr = dx.data() + r * n_in;
    for (std::size_t j = 0; j < n_out; ++j) {
      const double d = grad_out[r * n_out + j] * activation_slope(out[r * n_out + j], act);
      if (d == 0.0) continue;
      g.db[j] += d;
      const double* wj = ws.data() + j * n_in;
      double* dwj = dW.data() + j * n_in;
      for (std::size_t i = 0; i < n_in; ++i) {
        dwj[i] += d * xr[i];
        dxr[i] += d * wj[i];
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

Tensor conv1d_forward(const Tensor& x, const Tensor& kernels, const Tensor& bias, Activation act) {
  expect_rank(kernels, 3, "conv1d kernels");
  const std::size_t c_out = kernels.extent(0), m = kernels.extent(1), c_in = kernels.extent(2);
  expect_shape(bias, {c_out}, "conv1d bias");
  if (x.rank() == 0 || x.rank() > 2) {
    throw ShapeError("conv1d input must be [L] or [L x C_in], got " + shape_string(x.shape()));
  }
  const std::size_t L = x.extent(0);
  const std::size_t x_channels = x.rank() == 1 ? 1 : x.extent(1);
  if (x_channels != c_in) {
    throw ShapeError("conv1d input has " + std::to_string(x_channels) +
                     " channels, kernels expect " + std::to_string(c_in));
  }
  if (L < m) {
    throw ShapeError("conv1d input length " + std::to_string(L) + " is shorter than kernel width " +
                     std::to_string(m));
  }
  const std::size_t out_len = L - m + 1;
  const std::size_t window = m * c_in;
  Tensor y({out_len, c_out});
  auto xs = x.data();
  auto ks = kernels.data();
  for (std::size_t i = 0; i < out_len; ++i) {
    const double* xw = xs.data() + i * c_in;
    for (std::size_t c = 0; c < c_out; ++c) {
      const double* kc = ks.data() + c * window;
      double s = bias[c];
      for (std::size_t p = 0; p < window; ++p) s += kc[p] * xw[p];
      y.at(i, c) = activate(s, act);
    }
  }
  return y;
}

Conv1dGrads conv1d_backward(const Tensor& x, const Tensor& kernels, const Tensor& out,
                            Activation act, const Tensor& grad_out) {
  expect_shape(grad_out, out.shape(), "conv1d output gradient");
  const std::size_t c_out = kernels.extent(0), m = kernels.extent(1), c_in = kernels.extent(2);
  const std::size_t out_len = out.extent(0);
  const std::size_t window = m * c_in;
  Conv1dGrads g{Tensor(x.shape()), Tensor(kernels.shape()), Tensor(Shape{c_out})};
  auto xs = x.data();
  auto ks = kernels.data();
  auto dx = g.dx.data();
  auto dk = g.dkernels.data();
  for (std::size_t i = 0; i < out_len; ++i) {
    const double* xw = xs.data() + i * c_in;
    double* dxw = dx.data() + i * c_in;
    for (std::size_t c = 0; c < c_out; ++c) {
      const double d = grad_out.at(i, c) * activation_slope(out.at(i, c), act);
      if (d == 0.0) continue;
      g.dbias[c] += d;
      const double* kc = ks.data() + c * window;
      double* dkc = dk.data() + c * window;
      for (std::size_t p = 0; p < window; ++p) {
        dkc[p] += d * xw[p];
        dxw[p] += d * kc[p];
      }
    }
  }
  return g;
}

Tensor maxpool1d_forward(const Tensor& x, std::size_t window, std::size_t stride,
                         std::vector<std::size_t>* argmax) {
  if (x.rank() == 0 || x.rank() > 2) {
    throw ShapeError("maxpool1d input must be [L] or [L x C], got " + shape_string(x.shape()));
  }
  if (window == 0 || stride == 0) throw ShapeError("maxpool1d window and stride must be positive");
  const std::size_t L = x.extent(0);
  const std::size_t C = x.rank() == 1 ? 1 : x.extent(1);
  if (L < window) {
    throw ShapeError("maxpool1d input length " + std::to_string(L) + " is shorter than window " +
                     std::to_string(window));
  }
  const std::size_t out_len = (L - window) / stride + 1;
  Tensor y(x.rank() == 1 ? Shape{out_len} : Shape{out_len, C});
  if (argmax) argmax->assign(out_len * C, 0);
  for (std::size_t i = 0; i < out_len; ++i) {
    for (std::size_t c = 0; c < C; ++c) {
      std::size_t best = (i * stride) * C + c;
      for (std::size_t k = 1; k < window; ++k) {
        const std::size_t idx = (i * stride + k) * C + c;
        if (x[idx] > x[best]) best = idx;
      }
      y[i * C + c] = x[best];
      if (argmax) (*argmax)[i * C + c] = best;
    }
  }
  return y;
}

Tensor maxpool1d_backward(const Tensor& grad_out, std::span<const std::size_t> argmax,
                          const Shape& input_shape) {
  if (grad_out.size() != argmax.size()) throw ShapeError("maxpool1d gradient/argmax mismatch");
  Tensor dx(input_shape);
  for (std::size_t i = 0; i < argmax.size(); ++i) dx[argmax[i]] += grad_out[i];
  return dx;
}

// ---------------------------------------------------------------------------

Tensor scaled_dot_attention(const Tensor& Q, const Tensor& K, const Tensor& V, Tensor* weights) {
  expect_rank(Q, 2, "attention Q");
  expect_rank(K, 2, "attention K");
  expect_rank(V, 2, "attention V");
  if (K.extent(1) != Q.extent(1)) {
    throw ShapeError("attention K width " + std::to_string(K.extent(1)) + " differs from Q width " +
                     std::to_string(Q.extent(1)));
  }
  if (K.extent(0) != V.extent(0) || Q.extent(0) != K.extent(0)) {
    throw ShapeError("attention Q, K and V row counts differ: " + shape_string(Q.shape()) + ", " +
                     shape_string(K.shape()) + ", " + shape_string(V.shape()));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(Q.extent(1)));
  Tensor A = matmul_nt(Q, K);
  for (std::size_t r = 0; r < A.extent(0); ++r) {
    auto row = A.row(r);
    const double hi = *std::max_element(row.begin(), row.end()) * scale;
    double sum = 0.0;
    for (auto& s : row) {
      s = std::exp(s * scale - hi);
      sum += s;
    }
    for (auto& s : row) s /= sum;
  }
  Tensor out = matmul(A, V);
  if (weights) *weights = std::move(A);
  return out;
}

AttentionGrads attention_backward(const Tensor& Q, const Tensor& K, const Tensor& V,
                                  const Tensor& weights, const Tensor& grad_out) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(Q.extent(1)));
  AttentionGrads g;
  g.dV = matmul_tn(weights, grad_out);
  Tensor dA = matmul_nt(grad_out, V);
  // Softmax Jacobian, row by row: dS = A * (dA - <dA, A>).
  for (std::size_t r = 0; r < dA.extent(0); ++r) {
    auto a = weights.row(r);
    auto d = dA.row(r);
    double dot = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * d[j];
    for (std::size_t j = 0; j < a.size(); ++j) d[j] = a[j] * (d[j] - dot) * scale;
  }
  g.dQ = matmul(dA, K);
  g.dK = matmul_tn(dA, Q);
  return g;
}

MhaWeights pack_heads(std::span<const HeadProjection> heads, const Tensor& wo) {
  if (heads.empty()) throw ShapeError("multi-head attention needs at least one head");
  const std::size_t d_model = heads[0].wq.extent(0);
  const std::size_t d_k = heads[0].wq.extent(1);
  MhaWeights w{Tensor({d_model, d_model}), Tensor({d_model, d_model}), Tensor({d_model, d_model}),
               wo};
  if (d_k * heads.size() != d_model) {
    throw ShapeError("per-head width " + std::to_string(d_k) + " times " +
                     std::to_string(heads.size()) + " heads must equal d_model " +
                     std::to_string(d_model));
  }
  for (std::size_t h = 0; h < heads.size(); ++h) {
    expect_shape(heads[h].wq, {d_model, d_k}, "head W^Q");
    expect_shape(heads[h].wk, {d_model, d_k}, "head W^K");
    expect_shape(heads[h].wv, {d_model, d_k}, "head W^V");
    put_column_block(w.wq, h * d_k, heads[h].wq);
    put_column_block(w.wk, h * d_k, heads[h].wk);
    put_column_block(w.wv, h * d_k, heads[h].wv);
  }
  return w;
}

Tensor multi_head_attention(const Tensor& X, std::size_t heads, const MhaWeights& w,
                            MhaCache* cache) {
  expect_rank(X, 2, "multi-head input");
  const std::size_t d_model = X.extent(1);
  if (heads == 0 || d_model % heads != 0) {
    throw ShapeError("d_model " + std::to_string(d_model) + " is not divisible by " +
                     std::to_string(heads) + " heads");
  }
  expect_shape(w.wq, {d_model, d_model}, "W^Q");
  expect_shape(w.wk, {d_model, d_model}, "W^K");
  expect_shape(w.wv, {d_model, d_model}, "W^V");
  expect_shape(w.wo, {d_model, d_model}, "W^O");
  const std::size_t d_k = d_model / heads;

  MhaCache local;
  MhaCache& c = cache ? *cache : local;
  c.q = matmul(X, w.wq);
  c.k = matmul(X, w.wk);
  c.v = matmul(X, w.wv);
  c.concat = Tensor({X.extent(0), d_model});
  c.weights.assign(heads, Tensor());
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t off = h * d_k;
    Tensor head = scaled_dot_attention(column_block(c.q, off, d_k), column_block(c.k, off, d_k),
                                       column_block(c.v, off, d_k), &c.weights[h]);
    put_column_block(c.concat, off, head);
  }
  return matmul(c.concat, w.wo);
}

MhaGrads mha_backward(const Tensor& X, std::size_t heads, const MhaWeights& w,
                      const MhaCache& cache, const Tensor& grad_out) {
  const std::size_t d_model = X.extent(1);
  const std::size_t d_k = d_model / heads;
  MhaGrads g;
  g.dW.wo = matmul_tn(cache.concat, grad_out);
  const Tensor d_concat = matmul_nt(grad_out, w.wo);
  Tensor dq(cache.q.shape()), dk(cache.k.shape()), dv(cache.v.shape());
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t off = h * d_k;
    auto ag = attention_backward(column_block(cache.q, off, d_k), column_block(cache.k, off, d_k),
                                 column_block(cache.v, off, d_k), cache.weights[h],
                                 column_block(d_concat, off, d_k));
    put_column_block(dq, off, ag.dQ);
    put_column_block(dk, off, ag.dK);
    put_column_block(dv, off, ag.dV);
  }
  g.dW.wq = matmul_tn(X, dq);
  g.dW.wk = matmul_tn(X, dk);
  g.dW.wv = matmul_tn(X, dv);
  g.dX = matmul_nt(dq, w.wq);
  g.dX += matmul_nt(dk, w.wk);
  g.dX += matmul_nt(dv, w.wv);
  return g;
}

// ---------------------------------------------------------------------------

Tensor layer_norm_forward(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps,
                          LayerNormCache* cache) {
  expect_rank(x, 2, "layer norm input");
  const std::size_t n = x.extent(0), d = x.extent(1);
  expect_shape(gamma, {d}, "layer norm gain");
  expect_shape(beta, {d}, "layer norm bias");
  Tensor y(x.shape());
  LayerNormCache local;
  LayerNormCache& c = cache ? *cache : local;
  c.normalized = Tensor(x.shape());
  c.inv_std.assign(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    auto xr = x.row(r);
    double mean = 0.0;
    for (double v : xr) mean += v;
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (double v : xr) var += (v - mean) * (v - mean);
    var /= static_cast<double>(d);
    const double inv = 1.0 / std::sqrt(var + eps);
    c.inv_std[r] = inv;
    for (std::size_t j = 0; j < d; ++j) {
      const double xhat = (xr[j] - mean) * inv;
      c.normalized.at(r, j) = xhat;
      y.at(r, j) = gamma[j] * xhat + beta[j];
    }
  }
  return y;
}

LayerNormGrads layer_norm_backward(const Tensor& gamma, const LayerNormCache& cache,
                                   const Tensor& grad_out) {
  const std::size_t n = grad_out.extent(0), d = grad_out.extent(1);
  LayerNormGrads g{Tensor(grad_out.shape()), Tensor(Shape{d}), Tensor(Shape{d})};
  std::vector<double> dxhat(d);
  for (std::size_t r = 0; r < n; ++r) {
    double sum = 0.0;
    double sum_xhat = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double go = grad_out.at(r, j);
      const double xhat = cache.normalized.at(r, j);
      g.dgamma[j] += go * xhat;
      g.dbeta[j] += go;
      dxhat[j] = go * gamma[j];
      sum += dxhat[j];
      sum_xhat += dxhat[j] * xhat;
    }
    const double k = cache.inv_std[r] / static_cast<double>(d);
    for (std::size_t j = 0; j < d; ++j) {
      g.dx.at(r, j) = k * (static_cast<double>(d) * dxhat[j] - sum -
                           cache.normalized.at(r, j) * sum_xhat);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

double mse_loss(std::span<const double> o, std::span<const double> y) {
  check_lengths(o, y, "mse_loss");
  double s = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) s += (o[i] - y[i]) * (o[i] - y[i]);
  return s / (2.0 * static_cast<double>(o.size()));
}

std::vector<double> mse_grad(std::span<const double> o, std::span<const double> y) {
  check_lengths(o, y, "mse_loss");
  std::vector<double> g(o.size());
  const double n = static_cast<double>(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) g[i] = (o[i] - y[i]) / n;
  return g;
}

double bce_loss(std::span<const double> p, std::span<const double> y) {
  check_lengths(p, y, "bce_loss");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    s += y[i] * std::log(q) + (1.0 - y[i]) * std::log(1.0 - q);
  }
  return -s / static_cast<double>(p.size());
}

std::vector<double> bce_grad(std::span<const double> p, std::span<const double> y) {
  check_lengths(p, y, "bce_loss");
  std::vector<double> g(p.size(), 0.0);
  const double n = static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < kProbabilityClamp || p[i] > 1.0 - kProbabilityClamp) continue;
    g[i] = -(y[i] / p[i] - (1.0 - y[i]) / (1.0 - p[i])) / n;
  }
  return g;
}

double loss_value(LossKind kind, std::span<const double> out, std::span<const double> y) {
  return kind == LossKind::mse ? mse_loss(out, y) : bce_loss(out, y);
}

std::vector<double> loss_grad(LossKind kind, std::span<const double> out,
                              std::span<const double> y) {
  return kind == LossKind::mse ? mse_grad(out, y) : bce_grad(out, y);
}

}  // namespace hijackmap::nn
