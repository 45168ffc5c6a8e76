// Copyright 2026 The boltzdrift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Generator checkpoints.
//
// Binary layout, little-endian, no padding:
//
//   offset  size  field
//   0       8     magic "BZDRIFT\0"
//   8       4     u32 format version (1)
//   12      4     u32 latent_dim
//   16      4     u32 hidden_width
//   20      4     u32 num_hidden_blocks (residual blocks, two affine maps each)
//   24      4     u32 output_dim
//   28      4     u32 activation (1 = SiLU)
//   32      8     u64 seed
//   40      8     u64 parameter count P
//   48      8P    f64 parameters, GeneratorParams flat order (row-major weights)
//   ..      4     u32 optimizer state present (0 or 1)
//   if present:
//           8     i64 Adam step
//           32    f64 lr, beta1, beta2, epsilon
//           8P    f64 first moments
//           8P    f64 second moments
//
// A JSON sidecar (<path>.json) repeats the architecture, seed and parameter
// count for humans and other tools.

#ifndef BOLTZDRIFT_CHECKPOINT_HPP
#define BOLTZDRIFT_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>

#include "boltzdrift/net.hpp"

namespace boltzdrift {

inline constexpr char kCheckpointMagic[8] = {'B', 'Z', 'D', 'R', 'I', 'F', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::uint32_t kActivationSilu = 1;

struct Checkpoint {
  GeneratorParams params;
  std::optional<AdamState> optimizer;
  std::uint64_t seed = 0;
};

/// Writes `path` and `path.json`.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);

/// Throws InvalidInput on a bad magic/version/size, or when `expected` is
/// given and the stored architecture differs from it.
Checkpoint load_checkpoint(const std::filesystem::path& path,
                           const std::optional<Architecture>& expected = {});

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_CHECKPOINT_HPP
