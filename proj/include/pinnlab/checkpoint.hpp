#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "pinnlab/mlp.hpp"

namespace pinnlab {

/// On-disk network state.
///
/// Text format: line 1 is a single-line JSON object
///   {"format":"pinnlab-checkpoint","version":1,"widths":[...],
///    "lower":[t,x],"upper":[t,x],"seed":S,"epoch":E,"count":N}
/// followed by N lines, one parameter each, written as the shortest decimal
/// string that round-trips to the same double.
struct Checkpoint {
  MlpConfig config;
  Params params;
  std::uint64_t seed = 0;
  std::int64_t epoch = 0;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);

/// Throws UsageError when the file is missing or malformed.
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace pinnlab
