#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hijackmap/nn/layers.hpp"

namespace hijackmap::nn {

/// Ordered stack of layers with flattened parameter access.
class Network {
 public:
  Network() = default;
  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  template <typename L>
  L& add(L layer) {
    auto owned = std::make_unique<L>(std::move(layer));
    L& ref = *owned;
    push(std::move(owned));
    return ref;
  }

  std::size_t size() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }
  Layer& layer(std::size_t i) { return *layers_.at(i); }

  /// Kinds in order, e.g. {"conv1d", "maxpool1d", "flatten", "dense", "dense"}.
  std::vector<std::string> layer_kinds() const;

  Tensor forward(const Tensor& x) const;
  Tensor forward(const Tensor& x, std::vector<Cache>& caches) const;

  /// Accumulates into `grads` (aligned with params()) and returns the input gradient.
  Tensor backward(const Tensor& grad_out, const std::vector<Cache>& caches,
                  std::span<Tensor> grads) const;

  /// Every trainable tensor, named "<layer index>.<layer kind>.<tensor>".
  std::vector<ParamRef> params();
  std::vector<Tensor> zero_grads();
  std::size_t parameter_count();

 private:
  void push(std::unique_ptr<Layer> layer);

  std::vector<std::unique_ptr<Layer>> layers_;
  std::vector<std::size_t> offsets_{0};  // offsets_[i]: first gradient slot of layer i
};

}  // namespace hijackmap::nn
