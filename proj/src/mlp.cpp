#include "pinnlab/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "pinnlab/errors.hpp"
#include "pinnlab/rng.hpp"

namespace pinnlab {

void MlpConfig::validate() const {
  if (widths.size() < 2) throw UsageError("network needs at least an input and an output layer");
  if (widths.front() != 2) throw UsageError("network input width must be 2 (t, x)");
  if (widths.back() != 1) throw UsageError("network output width must be 1");
  for (int w : widths) {
    if (w <= 0) throw UsageError("layer widths must be positive");
  }
  for (int i = 0; i < 2; ++i) {
    if (!(lower[i] < upper[i])) throw UsageError("input lower bound must be below upper bound");
  }
}

std::vector<std::size_t> layer_param_counts(const MlpConfig& config) {
  if (config.widths.size() < 2) throw UsageError("network needs at least an input and an output layer");
  for (int w : config.widths) {
    if (w <= 0) throw UsageError("layer widths must be positive");
  }
  std::vector<std::size_t> counts;
  for (std::size_t l = 0; l + 1 < config.widths.size(); ++l) {
    const auto in = static_cast<std::size_t>(config.widths[l]);
    const auto out = static_cast<std::size_t>(config.widths[l + 1]);
    counts.push_back(in * out + out);
  }
  return counts;
}

std::size_t param_count(const MlpConfig& config) {
  std::size_t n = 0;
  for (std::size_t c : layer_param_counts(config)) n += c;
  return n;
}

std::vector<LayerSlice> layer_slices(const MlpConfig& config) {
  config.validate();
  std::vector<LayerSlice> slices;
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < config.widths.size(); ++l) {
    const int in = config.widths[l], out = config.widths[l + 1];
    const std::size_t nw = static_cast<std::size_t>(in) * static_cast<std::size_t>(out);
    slices.push_back({offset, offset + nw, in, out});
    offset += nw + static_cast<std::size_t>(out);
  }
  return slices;
}

Params init_glorot(const MlpConfig& config, std::uint64_t seed) {
  Params p;
  p.values.assign(param_count(config), 0.0);
  std::mt19937_64 gen(seed);
  for (const LayerSlice& s : layer_slices(config)) {
    const double limit = std::sqrt(6.0 / static_cast<double>(s.in + s.out));
    const std::size_t nw = static_cast<std::size_t>(s.in) * static_cast<std::size_t>(s.out);
    for (std::size_t k = 0; k < nw; ++k) p.values[s.weights + k] = limit * (2.0 * unit_halfopen(gen) - 1.0);
  }
  return p;
}

void check_params(const Params& params, const MlpConfig& config) {
  if (params.size() != param_count(config)) {
    throw UsageError("parameter vector has length " + std::to_string(params.size()) + ", network expects " +
                     std::to_string(param_count(config)));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::isfinite(params.values[i])) throw NumericError("non-finite parameter " + std::to_string(i), i);
  }
}

ScaledInput scale_inputs(double t, double x, const MlpConfig& config) {
  const auto& lo = config.lower;
  const auto& hi = config.upper;
  return {2.0 * (t - lo[0]) / (hi[0] - lo[0]) - 1.0, 2.0 * (x - lo[1]) / (hi[1] - lo[1]) - 1.0};
}

ScaledInput input_scale_factors(const MlpConfig& config) {
  return {2.0 / (config.upper[0] - config.lower[0]), 2.0 / (config.upper[1] - config.lower[1])};
}

namespace {

void require_finite(const Dual2& v, std::size_t layer) {
  if (!std::isfinite(v.val) || !std::isfinite(v.dx) || !std::isfinite(v.dt) || !std::isfinite(v.dxx)) {
    throw NumericError("non-finite activation in layer " + std::to_string(layer), layer);
  }
}

}  // namespace

// Input scaling is recorded as an affine map on the tape: z~ = f*z + c with
// f = 2/(hi-lo) and c = -2 lo/(hi-lo) - 1, which reproduces scale_inputs.
NodeId forward(const Params& params, const MlpConfig& config, NodeId t, NodeId x, Tape& tape) {
  check_params(params, config);
  const auto theta = tape.bind_parameters(params.values);
  const auto slices = layer_slices(config);

  const ScaledInput f = input_scale_factors(config);
  const ScaledInput at_zero = scale_inputs(0.0, 0.0, config);
  std::vector<NodeId> act{
      tape.apply(Op::add, tape.scale(t, f.t), tape.constant(at_zero.t)),
      tape.apply(Op::add, tape.scale(x, f.x), tape.constant(at_zero.x)),
  };

  for (std::size_t l = 0; l < slices.size(); ++l) {
    const LayerSlice& s = slices[l];
    const bool last = l + 1 == slices.size();
    std::vector<NodeId> next;
    next.reserve(static_cast<std::size_t>(s.out));
    for (int j = 0; j < s.out; ++j) {
      const std::size_t row = s.weights + static_cast<std::size_t>(j) * static_cast<std::size_t>(s.in);
      NodeId z = tape.apply(Op::mul, theta[row], act[0]);
      for (int k = 1; k < s.in; ++k) z = tape.apply(Op::add, z, tape.apply(Op::mul, theta[row + k], act[k]));
      z = tape.apply(Op::add, z, theta[s.bias + j]);
      if (!last) z = tape.apply(Op::tanh, z);
      require_finite(tape.value(z), l);
      next.push_back(z);
    }
    act = std::move(next);
  }
  return act[0];
}

double forward_value(const Params& params, const MlpConfig& config, double t, double x) {
  check_params(params, config);
  const auto slices = layer_slices(config);
  const ScaledInput f = input_scale_factors(config);
  const ScaledInput at_zero = scale_inputs(0.0, 0.0, config);
  std::vector<double> act{f.t * t + at_zero.t, f.x * x + at_zero.x};
  const auto& w = params.values;
  for (std::size_t l = 0; l < slices.size(); ++l) {
    const LayerSlice& s = slices[l];
    const bool last = l + 1 == slices.size();
    std::vector<double> next(static_cast<std::size_t>(s.out));
    for (int j = 0; j < s.out; ++j) {
      const std::size_t row = s.weights + static_cast<std::size_t>(j) * static_cast<std::size_t>(s.in);
      double z = w[row] * act[0];
      for (int k = 1; k < s.in; ++k) z = z + w[row + k] * act[k];
      z = z + w[s.bias + j];
      next[j] = last ? z : std::tanh(z);
      if (!std::isfinite(next[j])) throw NumericError("non-finite activation in layer " + std::to_string(l), l);
    }
    act = std::move(next);
  }
  return act[0];
}

}  // namespace pinnlab
