#include "hijackmap/models/architecture.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "hijackmap/errors.hpp"

namespace hijackmap::models {

namespace {

struct RateEntry {
  double rate;
  const char* text;
};

constexpr std::array<RateEntry, 4> kRates = {{
    {2e-5, "2e-5"},
    {3e-5, "3e-5"},
    {4e-5, "4e-5"},
    {5e-5, "5e-5"},
}};

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::cnn: return "cnn";
    case Family::mlfnn: return "mlfnn";
    case Family::tinyformer: return "tinyformer";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "cnn") return Family::cnn;
  if (name == "mlfnn") return Family::mlfnn;
  if (name == "tinyformer") return Family::tinyformer;
  throw InputError("unknown model family \"" + std::string(name) + "\"");
}

ArchitectureId ArchitectureId::cnn(int blocks) {
  if (blocks < 1 || blocks > 3) {
    throw InputError("cnn variant must be 1, 2 or 3 blocks, got " + std::to_string(blocks));
  }
  return {Family::cnn, blocks, 0.0};
}

ArchitectureId ArchitectureId::mlfnn(int dense_layers) {
  if (dense_layers < 2 || dense_layers > 4) {
    throw InputError("mlfnn variant must have 2, 3 or 4 dense layers, got " +
                     std::to_string(dense_layers));
  }
  return {Family::mlfnn, dense_layers, 0.0};
}

ArchitectureId ArchitectureId::tinyformer(double learning_rate) {
  for (const auto& r : kRates) {
    if (r.rate == learning_rate) return {Family::tinyformer, 0, learning_rate};
  }
  throw InputError("tinyformer learning rate " + std::to_string(learning_rate) +
                   " is not one of 2e-5, 3e-5, 4e-5, 5e-5");
}

ArchitectureId ArchitectureId::parse(std::string_view text) {
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    throw InputError("malformed architecture id \"" + std::string(text) + "\"");
  }
  const Family family = parse_family(text.substr(0, dash));
  const auto variant = text.substr(dash + 1);
  if (family == Family::tinyformer) {
    for (const auto& r : kRates) {
      if (variant == r.text) return tinyformer(r.rate);
    }
    throw InputError("unknown tinyformer learning rate \"" + std::string(variant) + "\"");
  }
  if (variant.size() != 1 || variant[0] < '0' || variant[0] > '9') {
    throw InputError("malformed architecture id \"" + std::string(text) + "\"");
  }
  const int depth = variant[0] - '0';
  return family == Family::cnn ? cnn(depth) : mlfnn(depth);
}

std::string ArchitectureId::str() const {
  if (family_ == Family::tinyformer) {
    for (const auto& r : kRates) {
      if (r.rate == learning_rate_) return std::string("tinyformer-") + r.text;
    }
  }
  return std::string(family_name(family_)) + "-" + std::to_string(depth_);
}

std::size_t ArchitectureId::catalog_index() const {
  const auto all = full_catalog();
  return static_cast<std::size_t>(std::find(all.begin(), all.end(), *this) - all.begin());
}

std::vector<ArchitectureId> family_catalog(Family family) {
  switch (family) {
    case Family::cnn: return {ArchitectureId::cnn(1), ArchitectureId::cnn(2), ArchitectureId::cnn(3)};
    case Family::mlfnn:
      return {ArchitectureId::mlfnn(2), ArchitectureId::mlfnn(3), ArchitectureId::mlfnn(4)};
    case Family::tinyformer: {
      std::vector<ArchitectureId> out;
      for (const auto& r : kRates) out.push_back(ArchitectureId::tinyformer(r.rate));
      return out;
    }
  }
  return {};
}

std::vector<ArchitectureId> full_catalog() {
  std::vector<ArchitectureId> out;
  for (Family f : {Family::cnn, Family::mlfnn, Family::tinyformer}) {
    auto part = family_catalog(f);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace hijackmap::models
