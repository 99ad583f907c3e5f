#include "hijackmap/nn/network.hpp"

namespace hijackmap::nn {

Network::Network(const Network& other) : offsets_(other.offsets_) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Network& Network::operator=(const Network& other) {
  if (this != &other) {
    Network copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void Network::push(std::unique_ptr<Layer> layer) {
  offsets_.push_back(offsets_.back() + layer->param_count());
  layers_.push_back(std::move(layer));
}

std::vector<std::string> Network::layer_kinds() const {
  std::vector<std::string> kinds;
  for (const auto& l : layers_) kinds.emplace_back(l->kind());
  return kinds;
}

Tensor Network::forward(const Tensor& x) const {
  Tensor h = x;
  for (const auto& l : layers_) h = l->forward(h, nullptr);
  return h;
}

Tensor Network::forward(const Tensor& x, std::vector<Cache>& caches) const {
  caches.resize(layers_.size());
  Tensor h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) h = layers_[i]->forward(h, &caches[i]);
  return h;
}

Tensor Network::backward(const Tensor& grad_out, const std::vector<Cache>& caches,
                         std::span<Tensor> grads) const {
  Tensor g = grad_out;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    g = layers_[i]->backward(g, caches[i], grads.subspan(offsets_[i], offsets_[i + 1] - offsets_[i]));
  }
  return g;
}

std::vector<ParamRef> Network::params() {
  std::vector<ParamRef> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const std::string prefix = std::to_string(i) + "." + std::string(layers_[i]->kind()) + ".";
    for (auto& p : layers_[i]->params()) out.push_back({prefix + p.name, p.value});
  }
  return out;
}

std::vector<Tensor> Network::zero_grads() {
  std::vector<Tensor> grads;
  for (auto& p : params()) grads.emplace_back(p.value->shape());
  return grads;
}

std::size_t Network::parameter_count() {
  std::size_t n = 0;
  for (auto& p : params()) n += p.value->size();
  return n;
}

}  // namespace hijackmap::nn
