#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pinnlab/tape.hpp"

namespace pinnlab {

enum class Activation { tanh };

/// Shape of the fully connected network u(t, x).
///
/// Inputs are ordered (t, x) and are mapped affinely onto [-1, 1]^2 using
/// `lower`/`upper` before the first layer. Every layer except the last is
/// followed by the activation.
struct MlpConfig {
  std::vector<int> widths{2, 20, 20, 20, 20, 20, 20, 20, 20, 1};
  Activation activation = Activation::tanh;
  std::array<double, 2> lower{0.0, -1.0};
  std::array<double, 2> upper{1.0, 1.0};

  static MlpConfig burgers_default() { return {}; }

  /// Throws UsageError unless widths start at 2, end at 1, are all
  /// positive, and every lower bound is strictly below its upper bound.
  void validate() const;

  std::size_t layer_count() const { return widths.size() - 1; }
};

/// Flat parameter vector. Per layer: the (out x in) weight block in
/// row-major order, then the out-long bias block; layers concatenated.
struct Params {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const Params&, const Params&) = default;
};

/// Offsets of one layer's blocks inside Params::values.
struct LayerSlice {
  std::size_t weights;
  std::size_t bias;
  int in;
  int out;
};

std::size_t param_count(const MlpConfig& config);
std::vector<std::size_t> layer_param_counts(const MlpConfig& config);
std::vector<LayerSlice> layer_slices(const MlpConfig& config);

/// Glorot-uniform weights (limit sqrt(6 / (fan_in + fan_out))), zero
/// biases. Deterministic in `seed` on every platform.
Params init_glorot(const MlpConfig& config, std::uint64_t seed);

/// Throws NumericError (index = offending entry) if any value is not
/// finite, UsageError if the length does not match the config.
void check_params(const Params& params, const MlpConfig& config);

struct ScaledInput {
  double t;
  double x;
};

/// z -> 2 (z - lower) / (upper - lower) - 1, elementwise.
ScaledInput scale_inputs(double t, double x, const MlpConfig& config);

/// Multipliers applied to dt and dx by the input scaling.
ScaledInput input_scale_factors(const MlpConfig& config);

/// Records u(t, x) on `tape`. `t` and `x` should be input nodes seeded
/// with InputAxis::t and InputAxis::x. Parameter leaves are bound on the
/// tape on first use. Throws NumericError carrying the layer index when a
/// layer produces a non-finite value.
NodeId forward(const Params& params, const MlpConfig& config, NodeId t, NodeId x, Tape& tape);

/// Plain-double forward pass with the same operation order as the tape,
/// so the result matches the tape's `val` component bit for bit.
double forward_value(const Params& params, const MlpConfig& config, double t, double x);

}  // namespace pinnlab
