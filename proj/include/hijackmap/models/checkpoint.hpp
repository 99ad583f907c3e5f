#pragma once

#include <iosfwd>
#include <string>

#include "hijackmap/models/model.hpp"

namespace hijackmap::models {

// Checkpoint layout (all integers and floats little-endian):
//
//   "HJNN"                      magic, 4 bytes
//   u8   version                currently 1
//   str  architecture id        e.g. "cnn-2"
//   str  vectorizer hash        fingerprint of the vectorizer manifest
//   u64  input width            TF-IDF columns or sequence length
//   u64  vocabulary size        0 for TF-IDF models
//   u32  tensor count
//   per tensor:
//     str  name                 e.g. "4.dense.weight"
//     u32  rank
//     u64  extent, rank times
//     f64  values, row-major
//
// where str is a u32 byte length followed by UTF-8 bytes.

inline constexpr unsigned char kCheckpointVersion = 1;

void save_checkpoint(std::ostream& out, Model& model, const std::string& vectorizer_hash);

struct LoadedCheckpoint {
  Model model;
  std::string vectorizer_hash;
};

/// Rebuilds the architecture and restores every tensor; throws InputError on
/// a bad magic, version, tensor name or shape.
LoadedCheckpoint load_checkpoint(std::istream& in);

}  // namespace hijackmap::models
