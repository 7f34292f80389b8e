// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>

#include "pear/policy/params.hpp"

namespace pear {

// Binary checkpoint layout, all integers and floats little-endian:
//   "PEARCKPT"            8 bytes
//   format version        u32
//   |V|                   u32
//   num_features          u32
//   feature layout digest u64
//   weights               f64 x (num_features * |V|)
// The params version tag is not stored; loaded params start at version 0.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const PolicyParams& params, std::ostream& out);
void save_checkpoint(const PolicyParams& params, const std::filesystem::path& path);

// Throws ArtifactError if the file is missing, truncated, or was written for
// a different vocabulary or feature layout.
PolicyParams load_checkpoint(std::istream& in, const Vocab& vocab);
PolicyParams load_checkpoint(const std::filesystem::path& path, const Vocab& vocab);

}  // namespace pear
