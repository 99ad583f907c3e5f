#include "hijackmap/nn/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "hijackmap/errors.hpp"

namespace hijackmap::nn {

namespace {

std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += " x ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  for (auto e : shape_) {
    if (e == 0) throw ShapeError("tensor extents must be positive, got " + shape_string(shape_));
  }
  data_.assign(element_count(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (auto e : shape_) {
    if (e == 0) throw ShapeError("tensor extents must be positive, got " + shape_string(shape_));
  }
  if (data_.size() != element_count(shape_)) {
    throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_string(shape_));
  }
}

Tensor Tensor::vector(std::initializer_list<double> values) {
  return Tensor({values.size()}, std::vector<double>(values));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t cols = rows.size() ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw ShapeError("ragged matrix literal");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor({rows.size(), cols}, std::move(data));
}

Tensor Tensor::reshaped(Shape shape) const {
  return Tensor(std::move(shape), data_);
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

Tensor& Tensor::operator+=(const Tensor& other) {
  if (other.shape_ != shape_) {
    throw ShapeError("cannot add " + shape_string(other.shape_) + " to " + shape_string(shape_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

void expect_shape(const Tensor& t, const Shape& expected, const char* operand) {
  if (t.shape() != expected) {
    throw ShapeError(std::string(operand) + " has shape " + shape_string(t.shape()) +
                     ", expected " + shape_string(expected));
  }
}

void expect_rank(const Tensor& t, std::size_t rank, const char* operand) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(operand) + " must have rank " + std::to_string(rank) +
                     ", got shape " + shape_string(t.shape()));
  }
}

}  // namespace hijackmap::nn
