#include "hijackmap/models/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "hijackmap/errors.hpp"

namespace hijackmap::models {

namespace {

constexpr std::array<char, 4> kMagic = {'H', 'J', 'N', 'N'};
constexpr std::uint64_t kMaxStringBytes = 1 << 20;

template <typename U>
void put_le(std::ostream& out, U value) {
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes, sizeof(U));
}

void put_string(std::ostream& out, const std::string& s) {
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <typename U>
U get_le(std::istream& in) {
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U))) {
    throw InputError("checkpoint is truncated");
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

std::string get_string(std::istream& in) {
  const auto n = get_le<std::uint32_t>(in);
  if (n > kMaxStringBytes) throw InputError("checkpoint string length is implausible");
  std::string s(n, '\0');
  if (n && !in.read(s.data(), n)) throw InputError("checkpoint is truncated");
  return s;
}

}  // namespace

void save_checkpoint(std::ostream& out, Model& model, const std::string& vectorizer_hash) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint8_t>(out, kCheckpointVersion);
  put_string(out, model.id.str());
  put_string(out, vectorizer_hash);
  put_le<std::uint64_t>(out, model.input.width);
  put_le<std::uint64_t>(out, model.input.vocab_size);
  auto params = model.net.params();
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    put_string(out, p.name);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p.value->rank()));
    for (auto e : p.value->shape()) put_le<std::uint64_t>(out, e);
    for (double v : p.value->data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw Error("failed to write checkpoint");
}

LoadedCheckpoint load_checkpoint(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw InputError("not a checkpoint (bad magic bytes)");
  }
  const auto version = get_le<std::uint8_t>(in);
  if (version != kCheckpointVersion) {
    throw InputError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto id = ArchitectureId::parse(get_string(in));
  std::string hash = get_string(in);
  const auto width = get_le<std::uint64_t>(in);
  const auto vocab = get_le<std::uint64_t>(in);

  Model model = build_architecture(id, width, 0, vocab);
  auto params = model.net.params();
  const auto count = get_le<std::uint32_t>(in);
  if (count != params.size()) {
    throw InputError("checkpoint holds " + std::to_string(count) + " tensors, " + id.str() +
                     " has " + std::to_string(params.size()));
  }
  for (auto& p : params) {
    const auto name = get_string(in);
    if (name != p.name) {
      throw InputError("checkpoint tensor \"" + name + "\" where \"" + p.name + "\" was expected");
    }
    const auto rank = get_le<std::uint32_t>(in);
    nn::Shape shape;
    for (std::uint32_t i = 0; i < rank; ++i) shape.push_back(get_le<std::uint64_t>(in));
    if (shape != p.value->shape()) {
      throw InputError("checkpoint tensor " + name + " has shape " + nn::shape_string(shape) +
                       ", expected " + nn::shape_string(p.value->shape()));
    }
    for (auto& v : p.value->data()) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
  }
  return {std::move(model), std::move(hash)};
}

}  // namespace hijackmap::models
