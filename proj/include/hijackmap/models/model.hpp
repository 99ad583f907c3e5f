#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hijackmap/models/architecture.hpp"
#include "hijackmap/nn/network.hpp"
#include "hijackmap/textprep/text.hpp"
#include "hijackmap/textprep/tfidf.hpp"

namespace hijackmap::models {

// Layer hyperparameters shared by every catalog entry.
inline constexpr std::size_t kHiddenWidth = 64;
inline constexpr std::size_t kConvFilters = 32;
inline constexpr std::size_t kKernelWidth = 5;
inline constexpr std::size_t kPoolWindow = 2;
inline constexpr std::size_t kPoolStride = 2;
inline constexpr std::size_t kModelWidth = 32;  // transformer d_model
inline constexpr std::size_t kHeads = 4;
inline constexpr std::size_t kEncoderLayers = 2;
inline constexpr std::size_t kFeedForwardWidth = 64;
inline constexpr std::size_t kMaxLen = 48;
inline constexpr double kDecisionThreshold = 0.5;

enum class InputKind { tfidf_vector, token_ids };

/// What a model consumes: a TF-IDF row of `width` columns, or `width` token
/// ids drawn from a vocabulary of `vocab_size`.
struct InputContract {
  InputKind kind = InputKind::tfidf_vector;
  std::size_t width = 0;
  std::size_t vocab_size = 0;
};

struct Model {
  ArchitectureId id;
  InputContract input;
  nn::Network net;
};

/// Smallest TF-IDF width the stacked valid convolutions of a cnn variant accept.
std::size_t cnn_min_width(int blocks);

/// Builds a freshly initialized catalog model. `input_dim` is the TF-IDF
/// width for cnn/mlfnn and the sequence length for tinyformer, which also
/// needs `vocab_size` (reserved ids included).
Model build_architecture(const ArchitectureId& id, std::size_t input_dim, std::uint64_t seed,
                         std::size_t vocab_size = 0);

/// Token ids for the transformer input, CLS first.
struct TokenIds {
  std::vector<std::size_t> ids;
};

/// Term -> id table. Ids 0..2 are reserved for PAD, UNK and CLS; terms follow
/// in the order given.
class TokenTable {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kUnk = 1;
  static constexpr std::size_t kCls = 2;
  static constexpr std::size_t kReserved = 3;

  TokenTable() = default;
  explicit TokenTable(const std::vector<std::string>& terms);
  /// Same terms and order as the vectorizer's columns.
  static TokenTable from_tfidf(const textprep::TfidfModel& tfidf);

  std::size_t size() const { return kReserved + index_.size(); }
  std::size_t id(const std::string& term) const;

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

/// [CLS, ids of the first max_len-1 tokens (UNK when unknown), PAD...].
TokenIds encode_tokens(const textprep::TokenSeq& doc, const TokenTable& table,
                       std::size_t max_len = kMaxLen);

nn::Tensor to_tensor(const TokenIds& ids);
nn::Tensor to_tensor(const std::vector<double>& features);

struct Classification {
  double probability = 0.0;
  int label = 0;
};

/// 1 iff probability >= 0.5.
int decide(double probability);

/// Throws InputError when the input does not satisfy the model's contract.
Classification classify(const Model& model, const std::vector<double>& features);
Classification classify(const Model& model, const TokenIds& tokens);

}  // namespace hijackmap::models
