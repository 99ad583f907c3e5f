#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "hijackmap/corpus/dataset.hpp"

namespace hijackmap::corpus {

struct SyntheticPlace {
  const char* name;
  double lat;
  double lon;
};

/// Place names the generator draws from, with coordinates. Written out as a
/// gazetteer by `synth --gazetteer-out`.
std::span<const SyntheticPlace> synthetic_places();

/// Deterministic labeled stand-in corpus. Relevant posts are incident
/// reports containing "hijacking" and exactly one place from
/// synthetic_places(); irrelevant posts use the keyword in other senses or
/// omit it. Record order is a seeded interleaving of both classes.
Dataset generate_synthetic_corpus(std::uint64_t seed, std::size_t relevant_count,
                                  std::size_t irrelevant_count);

}  // namespace hijackmap::corpus
