#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pinnlab/errors.hpp"
#include "pinnlab/sampler.hpp"

namespace pinnlab {
namespace {

void expect_ranges(const TrainingSet& s) {
  for (const SamplePoint& p : s.x0) {
    EXPECT_EQ(p.t, 0.0);
    EXPECT_GE(p.x, -1.0);
    EXPECT_LE(p.x, 1.0);
    EXPECT_NEAR(p.target, -std::sin(std::numbers::pi * p.x), 1e-15);
  }
  for (std::size_t i = 0; i < s.xb.size(); ++i) {
    const SamplePoint& p = s.xb[i];
    EXPECT_GT(p.t, 0.0);
    EXPECT_LE(p.t, 1.0);
    EXPECT_EQ(p.x, i % 2 == 0 ? -1.0 : 1.0);
    EXPECT_EQ(p.target, 0.0);
  }
  for (const SamplePoint& p : s.xr) {
    ASSERT_GT(p.t, 0.0);
    ASSERT_LE(p.t, 1.0);
    ASSERT_GT(p.x, -1.0);
    ASSERT_LT(p.x, 1.0);
  }
}

TEST(Sampler, UniformSizesAndRanges) {
  const TrainingSet s = sample_uniform(50, 50, 10000, 0);
  EXPECT_EQ(s.x0.size(), 50u);
  EXPECT_EQ(s.xb.size(), 50u);
  EXPECT_EQ(s.xr.size(), 10000u);
  expect_ranges(s);
}

TEST(Sampler, BoundsHoldOverManyDraws) {
  const TrainingSet s = sample_uniform(1000, 1001, 100000, 123);
  expect_ranges(s);
  double mean = 0.0;
  for (const SamplePoint& p : s.xr) mean += p.x;
  EXPECT_NEAR(mean / static_cast<double>(s.xr.size()), 0.0, 0.02);
  const TrainingSet l = sample_lhs(1000, 1001, 100000, 123);
  expect_ranges(l);
}

TEST(Sampler, BoundarySidesAlternate) {
  const TrainingSet s = sample_uniform(4, 50, 4, 1);
  int left = 0, right = 0;
  for (const SamplePoint& p : s.xb) (p.x < 0 ? left : right)++;
  EXPECT_EQ(left, 25);
  EXPECT_EQ(right, 25);
}

TEST(Sampler, DeterministicInSeed) {
  EXPECT_EQ(sample_uniform(50, 50, 500, 9), sample_uniform(50, 50, 500, 9));
  EXPECT_NE(sample_uniform(50, 50, 500, 9), sample_uniform(50, 50, 500, 10));
  EXPECT_EQ(sample_lhs(50, 50, 500, 9), sample_lhs(50, 50, 500, 9));
  EXPECT_EQ(fingerprint(sample_lhs(50, 50, 500, 9)), fingerprint(sample_lhs(50, 50, 500, 9)));
  EXPECT_NE(fingerprint(sample_uniform(50, 50, 500, 9)), fingerprint(sample_lhs(50, 50, 500, 9)));
}

// Largest |count - 1| over the n equal strata of [lo, hi].
int max_occupancy_deviation(const std::vector<double>& v, double lo, double hi) {
  const std::size_t n = v.size();
  std::vector<int> count(n, 0);
  for (double z : v) {
    auto k = static_cast<std::size_t>((z - lo) / (hi - lo) * static_cast<double>(n));
    count[std::min(k, n - 1)]++;
  }
  int dev = 0;
  for (int c : count) dev = std::max(dev, std::abs(c - 1));
  return dev;
}

TEST(Sampler, LatinHypercubeStrata) {
  for (std::size_t nf : {100u, 1000u, 10000u}) {
    const TrainingSet s = sample_lhs(50, 50, nf, 4);
    std::vector<double> t, x;
    for (const SamplePoint& p : s.xr) {
      t.push_back(p.t);
      x.push_back(p.x);
    }
    EXPECT_EQ(max_occupancy_deviation(t, 0.0, 1.0), 0) << nf;
    EXPECT_EQ(max_occupancy_deviation(x, -1.0, 1.0), 0) << nf;
  }
}

TEST(Sampler, LatinHypercubeBeatsUniformOnStratumCounts) {
  const TrainingSet u = sample_uniform(10, 10, 100, 4);
  const TrainingSet l = sample_lhs(10, 10, 100, 4);
  std::vector<double> ux, lx;
  for (const SamplePoint& p : u.xr) ux.push_back(p.x);
  for (const SamplePoint& p : l.xr) lx.push_back(p.x);
  EXPECT_EQ(max_occupancy_deviation(lx, -1.0, 1.0), 0);
  EXPECT_GT(max_occupancy_deviation(ux, -1.0, 1.0), 0);

  std::vector<double> x0;
  for (const SamplePoint& p : l.x0) x0.push_back(p.x);
  EXPECT_EQ(max_occupancy_deviation(x0, -1.0, 1.0), 0);
}

TEST(Sampler, RejectsEmptySets) {
  EXPECT_THROW(sample_uniform(0, 1, 1, 0), UsageError);
  EXPECT_THROW(sample_lhs(1, 1, 0, 0), UsageError);
  EXPECT_THROW(parse_sampling_method("sobol"), UsageError);
}

}  // namespace
}  // namespace pinnlab
