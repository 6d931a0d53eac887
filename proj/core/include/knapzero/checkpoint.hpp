#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "knapzero/net.hpp"

namespace knapzero {

struct CheckpointMeta {
  std::uint64_t seed = 0;
  std::uint64_t games_played = 0;
  double eval_score = 0.0;
};

// Binary layout (all integers and doubles little-endian):
//   magic "KZCKPT\0\0" | u32 version | u32 n | u32 hidden
//   | u64 seed | u64 games_played | f64 eval_score
//   | u64 param_count | param_count f64 parameters (tensor order of
//     MlpParameters::tensors)
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const MlpParameters& params,
                     const CheckpointMeta& meta);

// Throws std::runtime_error with distinct messages for a bad magic, a version
// mismatch, a dimension mismatch and a truncated file.
std::pair<MlpParameters, CheckpointMeta> load_checkpoint(const std::string& path);

}  // namespace knapzero
