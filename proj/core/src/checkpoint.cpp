#include "knapzero/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <type_traits>

namespace knapzero {

namespace {

constexpr std::array<char, 8> kMagic = {'K', 'Z', 'C', 'K', 'P', 'T', '\0', '\0'};

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void save_checkpoint(const std::string& path, const MlpParameters& params,
                     const CheckpointMeta& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open for writing: " + path);

  out.write(kMagic.data(), kMagic.size());
  write_le<std::uint32_t>(out, kCheckpointVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.n));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.hidden));
  write_le<std::uint64_t>(out, meta.seed);
  write_le<std::uint64_t>(out, meta.games_played);
  write_le<double>(out, meta.eval_score);
  write_le<std::uint64_t>(out, params.param_count());
  for (auto span : params.tensors()) {
    for (double x : span) write_le<double>(out, x);
  }
  if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

std::pair<MlpParameters, CheckpointMeta> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open for reading: " + path);

  std::array<char, 8> magic;
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("checkpoint: not a checkpoint file");

  const auto version = read_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: version mismatch (file has " + std::to_string(version) +
                             ", expected " + std::to_string(kCheckpointVersion) + ")");
  }
  const auto n = read_le<std::uint32_t>(in);
  const auto hidden = read_le<std::uint32_t>(in);

  CheckpointMeta meta;
  meta.seed = read_le<std::uint64_t>(in);
  meta.games_played = read_le<std::uint64_t>(in);
  meta.eval_score = read_le<double>(in);

  if (n < 1 || hidden < 1) throw std::runtime_error("checkpoint: dimension mismatch");
  MlpParameters params = init_network(static_cast<int>(n), static_cast<int>(hidden), 0);
  const auto stored = read_le<std::uint64_t>(in);
  if (stored != params.param_count()) throw std::runtime_error("checkpoint: dimension mismatch");
  for (auto span : params.tensors()) {
    for (double& x : span) x = read_le<double>(in);
  }
  return {std::move(params), meta};
}

}  // namespace knapzero
