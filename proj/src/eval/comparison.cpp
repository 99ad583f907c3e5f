#include "hijackmap/eval/comparison.hpp"

#include <cstdio>

#include "hijackmap/errors.hpp"

namespace hijackmap::eval {

using models::ArchitectureId;

std::string_view rule_name(SelectionRule rule) {
  return rule == SelectionRule::val_first ? "val_first" : "f1_first";
}

SelectionRule parse_rule(std::string_view name) {
  if (name == "val_first") return SelectionRule::val_first;
  if (name == "f1_first") return SelectionRule::f1_first;
  throw InputError("unknown selection rule \"" + std::string(name) + "\"");
}

SelectionRule default_rule(models::Family family) {
  return family == models::Family::tinyformer ? SelectionRule::f1_first : SelectionRule::val_first;
}

namespace {

// True when a should be preferred over b.
bool better(const ComparisonRow& a, const ComparisonRow& b, SelectionRule rule) {
  if (rule == SelectionRule::val_first) {
    if (a.val_acc != b.val_acc) return a.val_acc > b.val_acc;
    if (a.val_loss != b.val_loss) return a.val_loss < b.val_loss;
  } else {
    if (a.f1 != b.f1) return a.f1 > b.f1;
    if (a.precision != b.precision) return a.precision > b.precision;
  }
  return a.id.catalog_index() < b.id.catalog_index();
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string family_title(models::Family f) {
  switch (f) {
    case models::Family::cnn: return "CNN";
    case models::Family::mlfnn: return "MLFNN";
    case models::Family::tinyformer: return "Tinyformer";
  }
  return "";
}

}  // namespace

ArchitectureId select_among(const std::vector<ComparisonRow>& rows, SelectionRule rule) {
  const ComparisonRow* best = nullptr;
  for (const auto& row : rows) {
    if (row.error) continue;
    if (!best || better(row, *best, rule)) best = &row;
  }
  if (!best) throw InputError("no usable rows to select from");
  return best->id;
}

ArchitectureId select_preferred(const ComparisonTable& table, SelectionRule rule) {
  return select_among(table.rows, rule);
}

std::string render_table(const ComparisonTable& table) {
  constexpr std::size_t kIdWidth = 18;
  constexpr std::size_t kColWidth = 11;
  std::string out;
  out += family_title(table.family) + " accuracy and loss\n";
  out += pad("Architecture", kIdWidth) + pad("TrainAcc", kColWidth) + pad("TrainLoss", kColWidth) +
         pad("ValAcc", kColWidth) + "ValLoss\n";
  for (const auto& r : table.rows) {
    out += pad(r.id.str(), kIdWidth);
    if (r.error) {
      out += "failed: " + *r.error + "\n";
      continue;
    }
    out += pad(fixed4(r.train_acc), kColWidth) + pad(fixed4(r.train_loss), kColWidth) +
           pad(fixed4(r.val_acc), kColWidth) + fixed4(r.val_loss) + "\n";
  }
  out += "\n";
  out += family_title(table.family) + " precision, recall and F1\n";
  out += pad("Architecture", kIdWidth) + pad("Precision", kColWidth) + pad("Recall", kColWidth) +
         "F1\n";
  for (const auto& r : table.rows) {
    out += pad(r.id.str(), kIdWidth);
    if (r.error) {
      out += "failed\n";
      continue;
    }
    out += pad(fixed4(r.precision), kColWidth) + pad(fixed4(r.recall), kColWidth) + fixed4(r.f1) +
           "\n";
  }
  return out;
}

std::string render_key_values(const ComparisonTable& table) {
  std::string out;
  for (const auto& r : table.rows) {
    const std::string id = r.id.str();
    if (r.error) {
      out += id + ".error=" + *r.error + "\n";
      continue;
    }
    const std::pair<const char*, double> fields[] = {
        {"train_acc", r.train_acc}, {"train_loss", r.train_loss}, {"val_acc", r.val_acc},
        {"val_loss", r.val_loss},   {"precision", r.precision},   {"recall", r.recall},
        {"f1", r.f1},
    };
    for (const auto& [key, value] : fields) out += id + "." + key + "=" + fixed4(value) + "\n";
  }
  return out;
}

}  // namespace hijackmap::eval
