#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "hijackmap/cli/config.hpp"

namespace hijackmap::cli {

// Each command throws on failure; run_cli maps the exception to an exit code.

struct IngestArgs {
  fs::path input;
  bool lenient = false;
};

/// Appends new records of `input` to the store; prints
/// "read N added N deduped N".
void cmd_ingest(const RunConfig& config, const IngestArgs& args, std::ostream& out,
                std::ostream& err);

struct SynthArgs {
  std::size_t relevant = 105;
  std::size_t irrelevant = 321;
  fs::path output;
  fs::path gazetteer_out;  // optional
};

void cmd_synth(const RunConfig& config, const SynthArgs& args, std::ostream& out);

/// `family` is cnn, mlfnn, tinyformer or all. Writes report.txt, report.kv,
/// vectorizer.tsv and one checkpoint per preferred architecture to the
/// output directory.
void cmd_experiment(const RunConfig& config, const std::string& family, std::ostream& out);

struct ClassifyArgs {
  fs::path input;
  fs::path output;
};

/// Writes the input records with probability and predicted_label appended.
/// A checkpoint whose vectorizer hash differs from the manifest's throws
/// ConsistencyError.
void cmd_classify(const RunConfig& config, const ClassifyArgs& args, std::ostream& out);

struct MapArgs {
  fs::path input;
};

/// Maps records with predicted_label 1; writes points.geojson and map.html.
void cmd_map(const RunConfig& config, const MapArgs& args, std::ostream& out);

/// Parses global flags and a subcommand, runs it, and returns the exit code:
/// 0 success, 2 input error, 3 consistency error, 1 anything else.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hijackmap::cli
