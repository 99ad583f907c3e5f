#include "hijackmap/models/model.hpp"

#include <optional>

#include "hijackmap/errors.hpp"
#include "hijackmap/nn/train.hpp"
#include "hijackmap/random.hpp"

namespace hijackmap::models {

namespace {

// Signal length after `blocks` conv/pool stages, or nullopt if a stage
// would see fewer positions than its window.
std::optional<std::size_t> cnn_output_length(std::size_t width, int blocks) {
  std::size_t len = width;
  for (int b = 0; b < blocks; ++b) {
    if (len < kKernelWidth) return std::nullopt;
    len = len - kKernelWidth + 1;
    if (len < kPoolWindow) return std::nullopt;
    len = (len - kPoolWindow) / kPoolStride + 1;
  }
  return len;
}

nn::Network build_cnn(int blocks, std::size_t width, Rng& rng) {
  const auto flat_len = cnn_output_length(width, blocks);
  if (!flat_len) {
    throw InputError("cnn-" + std::to_string(blocks) + " needs an input width of at least " +
                     std::to_string(cnn_min_width(blocks)) + ", got " + std::to_string(width));
  }
  nn::Network net;
  std::size_t channels = 1;
  for (int b = 0; b < blocks; ++b) {
    net.add(nn::Conv1D(channels, kConvFilters, kKernelWidth)).init(rng);
    net.add(nn::MaxPool1D(kPoolWindow, kPoolStride));
    channels = kConvFilters;
  }
  net.add(nn::Flatten());
  net.add(nn::Dense(*flat_len * kConvFilters, kHiddenWidth, nn::Activation::relu)).init(rng);
  net.add(nn::Dense(kHiddenWidth, 1, nn::Activation::sigmoid)).init(rng);
  return net;
}

nn::Network build_mlfnn(int dense_layers, std::size_t width, Rng& rng) {
  nn::Network net;
  std::size_t in = width;
  for (int i = 0; i + 1 < dense_layers; ++i) {
    net.add(nn::Dense(in, kHiddenWidth, nn::Activation::relu)).init(rng);
    in = kHiddenWidth;
  }
  net.add(nn::Dense(in, 1, nn::Activation::sigmoid)).init(rng);
  return net;
}

nn::Network build_tinyformer(std::size_t max_len, std::size_t vocab_size, Rng& rng) {
  if (vocab_size <= TokenTable::kReserved) {
    throw InputError("tinyformer needs a vocabulary beyond the reserved ids, got size " +
                     std::to_string(vocab_size));
  }
  nn::Network net;
  net.add(nn::Embedding(vocab_size, max_len, kModelWidth)).init(rng);
  for (std::size_t i = 0; i < kEncoderLayers; ++i) {
    net.add(nn::EncoderBlock(kModelWidth, kHeads, kFeedForwardWidth)).init(rng);
  }
  net.add(nn::TakeFirst());
  net.add(nn::Dense(kModelWidth, 1, nn::Activation::sigmoid)).init(rng);
  return net;
}

void check_width(const Model& model, std::size_t width) {
  if (width != model.input.width) {
    throw InputError(model.id.str() + " expects an input of width " +
                     std::to_string(model.input.width) + ", got " + std::to_string(width));
  }
}

}  // namespace

std::size_t cnn_min_width(int blocks) {
  std::size_t width = 1;
  while (!cnn_output_length(width, blocks)) ++width;
  return width;
}

Model build_architecture(const ArchitectureId& id, std::size_t input_dim, std::uint64_t seed,
                         std::size_t vocab_size) {
  if (input_dim == 0) throw InputError("input dimension must be at least 1");
  Rng rng(seed);
  switch (id.family()) {
    case Family::cnn:
      return {id, {InputKind::tfidf_vector, input_dim, 0}, build_cnn(id.depth(), input_dim, rng)};
    case Family::mlfnn:
      return {id, {InputKind::tfidf_vector, input_dim, 0},
              build_mlfnn(id.depth(), input_dim, rng)};
    case Family::tinyformer:
      return {id, {InputKind::token_ids, input_dim, vocab_size},
              build_tinyformer(input_dim, vocab_size, rng)};
  }
  throw InputError("unknown architecture");
}

TokenTable::TokenTable(const std::vector<std::string>& terms) {
  for (const auto& t : terms) index_.emplace(t, kReserved + index_.size());
}

TokenTable TokenTable::from_tfidf(const textprep::TfidfModel& tfidf) {
  std::vector<std::string> terms;
  terms.reserve(tfidf.size());
  for (const auto& t : tfidf.terms()) terms.push_back(t.text);
  return TokenTable(terms);
}

std::size_t TokenTable::id(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? kUnk : it->second;
}

TokenIds encode_tokens(const textprep::TokenSeq& doc, const TokenTable& table,
                       std::size_t max_len) {
  TokenIds out;
  out.ids.assign(max_len, TokenTable::kPad);
  if (max_len == 0) return out;
  out.ids[0] = TokenTable::kCls;
  for (std::size_t i = 0; i < doc.tokens.size() && i + 1 < max_len; ++i) {
    out.ids[i + 1] = table.id(doc.tokens[i]);
  }
  return out;
}

nn::Tensor to_tensor(const TokenIds& ids) {
  std::vector<double> v(ids.ids.begin(), ids.ids.end());
  const std::size_t n = v.size();
  return nn::Tensor({n}, std::move(v));
}

nn::Tensor to_tensor(const std::vector<double>& features) {
  return nn::Tensor({features.size()}, features);
}

int decide(double probability) { return probability >= kDecisionThreshold ? 1 : 0; }

Classification classify(const Model& model, const std::vector<double>& features) {
  if (model.input.kind != InputKind::tfidf_vector) {
    throw InputError(model.id.str() + " consumes token ids, not a TF-IDF vector");
  }
  check_width(model, features.size());
  const double p = nn::predict(model.net, to_tensor(features));
  return {p, decide(p)};
}

Classification classify(const Model& model, const TokenIds& tokens) {
  if (model.input.kind != InputKind::token_ids) {
    throw InputError(model.id.str() + " consumes a TF-IDF vector, not token ids");
  }
  check_width(model, tokens.ids.size());
  for (auto id : tokens.ids) {
    if (id >= model.input.vocab_size) {
      throw InputError("token id " + std::to_string(id) + " is outside the model vocabulary");
    }
  }
  const double p = nn::predict(model.net, to_tensor(tokens));
  return {p, decide(p)};
}

}  // namespace hijackmap::models
