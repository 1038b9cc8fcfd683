#include "pinnlab/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <span>

#include "pinnlab/errors.hpp"
#include "pinnlab/rng.hpp"

namespace pinnlab {
namespace {

void check_counts(std::size_t n0, std::size_t nb, std::size_t nf) {
  if (n0 == 0 || nb == 0 || nf == 0) throw UsageError("sample counts must be positive");
}

double boundary_side(std::size_t i) { return i % 2 == 0 ? -1.0 : 1.0; }

double time_from_unit(double u) { return kMinTime + (1.0 - kMinTime) * u; }

std::vector<std::size_t> permutation(std::size_t n, std::mt19937_64& gen) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  shuffle(std::span<std::size_t>(p), gen);
  return p;
}

// Point in stratum k of n on [0, 1).
double stratified(std::size_t k, std::size_t n, std::mt19937_64& gen) {
  return (static_cast<double>(k) + unit_halfopen(gen)) / static_cast<double>(n);
}

}  // namespace

std::string to_string(SamplingMethod m) { return m == SamplingMethod::lhs ? "lhs" : "uniform"; }

SamplingMethod parse_sampling_method(const std::string& name) {
  if (name == "uniform") return SamplingMethod::uniform;
  if (name == "lhs") return SamplingMethod::lhs;
  throw UsageError("unknown sampling method '" + name + "' (expected uniform or lhs)");
}

double initial_condition(double x) { return -std::sin(std::numbers::pi * x); }

TrainingSet sample_uniform(std::size_t n0, std::size_t nb, std::size_t nf, std::uint64_t seed) {
  check_counts(n0, nb, nf);
  std::mt19937_64 gen(seed);
  TrainingSet s;
  s.seed = seed;
  s.method = SamplingMethod::uniform;
  s.x0.reserve(n0);
  s.xb.reserve(nb);
  s.xr.reserve(nf);
  for (std::size_t i = 0; i < n0; ++i) {
    const double x = -1.0 + 2.0 * unit_halfopen(gen);
    s.x0.push_back({0.0, x, initial_condition(x)});
  }
  for (std::size_t i = 0; i < nb; ++i) s.xb.push_back({time_from_unit(unit_halfopen(gen)), boundary_side(i), 0.0});
  for (std::size_t i = 0; i < nf; ++i) {
    const double t = time_from_unit(unit_halfopen(gen));
    const double x = -1.0 + 2.0 * unit_open(gen);
    s.xr.push_back({t, x, 0.0});
  }
  return s;
}

TrainingSet sample_lhs(std::size_t n0, std::size_t nb, std::size_t nf, std::uint64_t seed) {
  check_counts(n0, nb, nf);
  std::mt19937_64 gen(seed);
  TrainingSet s;
  s.seed = seed;
  s.method = SamplingMethod::lhs;
  s.x0.reserve(n0);
  s.xb.reserve(nb);
  s.xr.reserve(nf);
  for (std::size_t k : permutation(n0, gen)) {
    const double x = -1.0 + 2.0 * stratified(k, n0, gen);
    s.x0.push_back({0.0, x, initial_condition(x)});
  }
  const auto tb = permutation(nb, gen);
  for (std::size_t i = 0; i < nb; ++i) s.xb.push_back({time_from_unit(stratified(tb[i], nb, gen)), boundary_side(i), 0.0});

  const auto pt = permutation(nf, gen);
  const auto px = permutation(nf, gen);
  const double width = 1.0 / static_cast<double>(nf);
  for (std::size_t i = 0; i < nf; ++i) {
    const double t = time_from_unit(stratified(pt[i], nf, gen));
    // Open unit draw keeps x strictly inside (-1, 1).
    double x = -1.0 + 2.0 * (static_cast<double>(px[i]) + unit_open(gen)) * width;
    x = std::clamp(x, std::nextafter(-1.0, 0.0), std::nextafter(1.0, 0.0));
    s.xr.push_back({t, x, 0.0});
  }
  return s;
}

TrainingSet sample(SamplingMethod method, std::size_t n0, std::size_t nb, std::size_t nf, std::uint64_t seed) {
  return method == SamplingMethod::lhs ? sample_lhs(n0, nb, nf, seed) : sample_uniform(n0, nb, nf, seed);
}

std::uint64_t fingerprint(const TrainingSet& data) {
  std::uint64_t h = 14695981039346656037ull;
  const auto mix = [&h](double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= bits & 0xffu;
      h *= 1099511628211ull;
      bits >>= 8;
    }
  };
  for (const auto* set : {&data.x0, &data.xb, &data.xr}) {
    mix(static_cast<double>(set->size()));
    for (const SamplePoint& p : *set) {
      mix(p.t);
      mix(p.x);
      mix(p.target);
    }
  }
  return h;
}

}  // namespace pinnlab
