#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hijackmap/models/architecture.hpp"

namespace hijackmap::eval {

struct ComparisonRow {
  explicit ComparisonRow(models::ArchitectureId arch) : id(arch) {}

  models::ArchitectureId id;
  double train_acc = 0.0;
  double train_loss = 0.0;
  double val_acc = 0.0;
  double val_loss = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Set when this variant failed; the metrics are then meaningless.
  std::optional<std::string> error;
};

struct ComparisonTable {
  models::Family family = models::Family::cnn;
  std::vector<ComparisonRow> rows;
};

/// val_first: highest val_acc, then lowest val_loss.
/// f1_first:  highest test F1, then highest precision.
/// Remaining ties go to the earlier catalog entry.
enum class SelectionRule { val_first, f1_first };

std::string_view rule_name(SelectionRule rule);
SelectionRule parse_rule(std::string_view name);

/// val_first for cnn and mlfnn, f1_first for tinyformer.
SelectionRule default_rule(models::Family family);

/// Throws InputError when no row is usable (empty, or every row errored).
models::ArchitectureId select_preferred(const ComparisonTable& table, SelectionRule rule);

/// Same ordering applied across rows of different families.
models::ArchitectureId select_among(const std::vector<ComparisonRow>& rows, SelectionRule rule);

/// Two fixed-width sections (accuracy/loss, then precision/recall/F1),
/// values to four decimals.
std::string render_table(const ComparisonTable& table);

/// "cnn-2.val_acc=0.9833" lines, one metric per line, in table order.
std::string render_key_values(const ComparisonTable& table);

}  // namespace hijackmap::eval
