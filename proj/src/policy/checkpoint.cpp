// SPDX-License-Identifier: Apache-2.0
#include "pear/policy/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "pear/error.hpp"

namespace pear {
namespace {

constexpr std::array<char, 8> kMagic = {'P', 'E', 'A', 'R', 'C', 'K', 'P', 'T'};

template <typename U>
void put_le(std::ostream& out, U value) {
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
  }
  out.write(bytes, sizeof(U));
}

template <typename U>
U get_le(std::istream& in) {
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U))) {
    throw ArtifactError("checkpoint is truncated");
  }
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= U(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void save_checkpoint(const PolicyParams& params, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.vocab_size()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.num_features()));
  put_le<std::uint64_t>(out, params.feature_map().digest());
  for (double w : params.weights()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(w));
}

void save_checkpoint(const PolicyParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArtifactError("cannot write checkpoint: " + path.string());
  save_checkpoint(params, out);
  if (!out) throw ArtifactError("failed writing checkpoint: " + path.string());
}

PolicyParams load_checkpoint(std::istream& in, const Vocab& vocab) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ArtifactError("not a checkpoint (bad magic)");
  }
  if (get_le<std::uint32_t>(in) != kCheckpointVersion) {
    throw ArtifactError("unsupported checkpoint version");
  }
  const FeatureMap map(vocab);
  const auto v = get_le<std::uint32_t>(in);
  const auto f = get_le<std::uint32_t>(in);
  const auto digest = get_le<std::uint64_t>(in);
  if (v != vocab.size || f != map.num_features() || digest != map.digest()) {
    throw ArtifactError("checkpoint does not match the vocabulary or feature layout");
  }
  std::vector<double> weights(static_cast<std::size_t>(v) * f);
  for (double& w : weights) w = std::bit_cast<double>(get_le<std::uint64_t>(in));
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ArtifactError("trailing bytes after checkpoint weights");
  }
  try {
    return PolicyParams(map, std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw ArtifactError(std::string("invalid checkpoint: ") + e.what());
  }
}

PolicyParams load_checkpoint(const std::filesystem::path& path, const Vocab& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open checkpoint: " + path.string());
  return load_checkpoint(in, vocab);
}

}  // namespace pear
