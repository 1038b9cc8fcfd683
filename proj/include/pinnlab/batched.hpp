#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pinnlab/mlp.hpp"

namespace pinnlab::batched {

// Chunked, OpenMP-parallel evaluation of the network and its
// forward-over-reverse gradient. Points are processed in fixed chunks of
// kChunk; every per-chunk partial (loss sums and gradients) is combined in
// chunk order, so results do not depend on the thread count.
//
// The scalar Tape route in mlp.hpp computes the same quantities one node
// at a time and is kept as the reference these kernels are tested against.

inline constexpr std::size_t kChunk = 64;

/// Network output and its input derivatives at each point.
struct Derivatives {
  std::vector<double> u, u_t, u_x, u_xx;
};

/// Read-only view of one chunk's outputs. `first` is the index of the
/// chunk's first point in the full point list.
struct ChunkOutputs {
  std::size_t first;
  std::size_t count;
  const double* u;
  const double* u_t;
  const double* u_x;
  const double* u_xx;
};

/// Zero-initialised adjoints the seeder fills in: d(objective)/d(u), ...
struct ChunkSeeds {
  double* u;
  double* u_t;
  double* u_x;
  double* u_xx;
};

/// Called once per chunk, possibly concurrently for different chunks.
/// Returns the chunk's contribution to the objective and writes the
/// matching adjoints. Must be a pure function of its arguments.
using Seeder = std::function<double(const ChunkOutputs&, const ChunkSeeds&)>;

Derivatives evaluate(const Params& params, const MlpConfig& config, std::span<const double> t,
                     std::span<const double> x);

/// Plain values only (no derivative columns).
std::vector<double> evaluate_values(const Params& params, const MlpConfig& config, std::span<const double> t,
                                    std::span<const double> x);

/// Sum of seeder partials in chunk order; seeds are computed and discarded.
double reduce(const Params& params, const MlpConfig& config, std::span<const double> t, std::span<const double> x,
              const Seeder& seeder);

/// Same sum as reduce() (bitwise) and adds its parameter gradient to `grad`.
double reduce_with_gradient(const Params& params, const MlpConfig& config, std::span<const double> t,
                            std::span<const double> x, const Seeder& seeder, std::span<double> grad);

}  // namespace pinnlab::batched
