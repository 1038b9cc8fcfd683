#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pinnlab {

enum class SamplingMethod { uniform, lhs };

std::string to_string(SamplingMethod m);
SamplingMethod parse_sampling_method(const std::string& name);

/// Space-time point with its training target (unused for collocation).
struct SamplePoint {
  double t;
  double x;
  double target;

  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

/// Training data for the Burgers PINN.
///
///  - x0: initial points, t = 0 exactly, x in [-1, 1], target -sin(pi x)
///  - xb: boundary points, t in (0, 1], x = -1, +1, -1, ... , target 0
///  - xr: collocation points, t in (0, 1], x in (-1, 1)
struct TrainingSet {
  std::vector<SamplePoint> x0;
  std::vector<SamplePoint> xb;
  std::vector<SamplePoint> xr;
  std::uint64_t seed = 0;
  SamplingMethod method = SamplingMethod::uniform;

  friend bool operator==(const TrainingSet&, const TrainingSet&) = default;
};

/// Smallest time drawn: (0, 1] is realised as [kMinTime, 1].
inline constexpr double kMinTime = 1e-12;

/// Initial condition u0(x) = -sin(pi x).
double initial_condition(double x);

/// I.i.d. uniform draws from a std::mt19937_64 seeded with `seed`.
/// Draw order: x0 x-values, then xb t-values, then (t, x) per collocation
/// point.
TrainingSet sample_uniform(std::size_t n0, std::size_t nb, std::size_t nf, std::uint64_t seed);

/// Latin hypercube: collocation points occupy each of the nf t-strata and
/// each of the nf x-strata exactly once; x0 and xb use one point per 1-D
/// stratum.
TrainingSet sample_lhs(std::size_t n0, std::size_t nb, std::size_t nf, std::uint64_t seed);

TrainingSet sample(SamplingMethod method, std::size_t n0, std::size_t nb, std::size_t nf, std::uint64_t seed);

/// FNV-1a over the bit patterns of every coordinate and target.
std::uint64_t fingerprint(const TrainingSet& data);

}  // namespace pinnlab
