#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hijackmap::models {

enum class Family { cnn, mlfnn, tinyformer };

std::string_view family_name(Family family);
Family parse_family(std::string_view name);

/// One entry of the comparison grid:
///   cnn-1..3         conv/pool block count
///   mlfnn-2..4       dense layer count
///   tinyformer-<lr>  learning rate in {2e-5, 3e-5, 4e-5, 5e-5}
/// The named constructors and parse() reject anything off the grid.
class ArchitectureId {
 public:
  static ArchitectureId cnn(int blocks);
  static ArchitectureId mlfnn(int dense_layers);
  static ArchitectureId tinyformer(double learning_rate);
  static ArchitectureId parse(std::string_view text);

  Family family() const { return family_; }
  /// Block count for cnn, dense layer count for mlfnn, 0 for tinyformer.
  int depth() const { return depth_; }
  /// Grid learning rate for tinyformer, 0 otherwise.
  double learning_rate() const { return learning_rate_; }

  std::string str() const;
  /// Position in the full catalog; used as the final tie-break.
  std::size_t catalog_index() const;

  friend bool operator==(const ArchitectureId&, const ArchitectureId&) = default;

 private:
  ArchitectureId(Family f, int depth, double lr) : family_(f), depth_(depth), learning_rate_(lr) {}

  Family family_;
  int depth_;
  double learning_rate_;
};

/// Variants of one family in catalog order.
std::vector<ArchitectureId> family_catalog(Family family);

/// All variants: cnn-1..3, mlfnn-2..4, tinyformer-2e-5..5e-5.
std::vector<ArchitectureId> full_catalog();

}  // namespace hijackmap::models
