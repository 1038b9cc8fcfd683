#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pinnlab/batched.hpp"
#include "pinnlab/errors.hpp"
#include "pinnlab/physics.hpp"

namespace pinnlab {
namespace {

MlpConfig small_config() {
  MlpConfig cfg;
  cfg.widths = {2, 8, 8, 1};
  return cfg;
}

Params zero_params(const MlpConfig& cfg) { return Params{std::vector<double>(param_count(cfg), 0.0)}; }

TrainingSet five_point_set() {
  TrainingSet s;
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) s.x0.push_back({0.0, x, initial_condition(x)});
  for (double t : {0.1, 0.4, 0.7, 1.0}) {
    s.xb.push_back({t, -1.0, 0.0});
    s.xb.push_back({t, 1.0, 0.0});
  }
  for (double t : {0.2, 0.6}) {
    for (double x : {-0.3, 0.1, 0.8}) s.xr.push_back({t, x, 0.0});
  }
  return s;
}

TEST(Physics, ResidualFromDerivatives) {
  const double nu = 0.01 / std::numbers::pi;
  // u = c: every derivative vanishes.
  EXPECT_EQ(residual_from({0.7, 0.0, 0.0, 0.0}, nu), 0.0);
  // u = x: u_t = 0, u u_x = x.
  for (double x : {-0.5, 0.25, 0.9}) EXPECT_EQ(residual_from(lift_input(x, InputAxis::x), nu), x);
  // u = t: u_t = 1.
  EXPECT_EQ(residual_from(lift_input(0.3, InputAxis::t), nu), 1.0);
  // u = x^2 / 2: u u_x - nu u_xx = x^3 / 2 - nu.
  const Dual2 x = lift_input(0.6, InputAxis::x);
  EXPECT_NEAR(residual_from(0.5 * x * x, nu), 0.5 * 0.216 - nu, 1e-15);
}

TEST(Physics, ConstantNetworkHasZeroResidual) {
  const MlpConfig cfg = small_config();
  Params p = zero_params(cfg);
  p.values.back() = 0.35;  // output bias
  const BurgersProblem problem;
  for (double t : {0.0, 0.5, 1.0}) {
    for (double x : {-1.0, 0.2, 1.0}) EXPECT_EQ(residual(p, cfg, problem, t, x), 0.0);
  }
}

TEST(Physics, ZeroNetworkLossTerms) {
  const MlpConfig cfg = small_config();
  const TrainingSet s = five_point_set();
  const LossBreakdown l = loss(zero_params(cfg), cfg, BurgersProblem{}, s);
  EXPECT_EQ(l.phi_r, 0.0);
  EXPECT_EQ(l.phi_b, 0.0);
  EXPECT_NEAR(l.phi_0, 0.4, 1e-15);
  EXPECT_EQ(l.total, l.phi_r + l.phi_0 + l.phi_b);

  const LossAndGradient lg = loss_gradient(zero_params(cfg), cfg, BurgersProblem{}, s);
  EXPECT_EQ(lg.loss, l);
}

TEST(Physics, BoundaryGradientVanishesForZeroNetwork) {
  const MlpConfig cfg = small_config();
  TrainingSet s = five_point_set();
  // Only the boundary term depends on these targets; with u = 0 and
  // targets 0 its gradient must be exactly zero.
  TrainingSet only_b = s;
  for (SamplePoint& p : only_b.x0) p.target = 0.0;
  const LossAndGradient lg = loss_gradient(zero_params(cfg), cfg, BurgersProblem{}, only_b);
  for (double g : lg.grad) EXPECT_EQ(g, 0.0);
}

// Recomputes the loss from dumped network derivatives with plain sums.
LossBreakdown recompute(const Params& p, const MlpConfig& cfg, const TrainingSet& s, double nu) {
  auto cols = [](const std::vector<SamplePoint>& pts, std::vector<double>& t, std::vector<double>& x) {
    for (const SamplePoint& q : pts) {
      t.push_back(q.t);
      x.push_back(q.x);
    }
  };
  std::vector<double> t, x;
  cols(s.xr, t, x);
  const batched::Derivatives d = batched::evaluate(p, cfg, t, x);
  LossBreakdown l;
  for (std::size_t i = 0; i < s.xr.size(); ++i) {
    const double r = d.u_t[i] + d.u[i] * d.u_x[i] - nu * d.u_xx[i];
    l.phi_r += r * r;
  }
  l.phi_r /= static_cast<double>(s.xr.size());
  auto misfit = [&](const std::vector<SamplePoint>& pts) {
    double sum = 0.0;
    for (const SamplePoint& q : pts) {
      const double e = forward_value(p, cfg, q.t, q.x) - q.target;
      sum += e * e;
    }
    return sum / static_cast<double>(pts.size());
  };
  l.phi_0 = misfit(s.x0);
  l.phi_b = misfit(s.xb);
  l.total = l.phi_r + l.phi_0 + l.phi_b;
  return l;
}

TEST(Physics, LossMatchesIndependentRecomputation) {
  const MlpConfig cfg = small_config();
  const Params p = init_glorot(cfg, 3);
  const BurgersProblem problem;
  const TrainingSet s = sample_uniform(20, 20, 300, 5);
  const LossBreakdown a = loss(p, cfg, problem, s);
  const LossBreakdown b = recompute(p, cfg, s, problem.nu);
  EXPECT_NEAR(a.phi_r, b.phi_r, 1e-12 * std::max(1.0, b.phi_r));
  EXPECT_NEAR(a.phi_0, b.phi_0, 1e-12 * std::max(1.0, b.phi_0));
  EXPECT_NEAR(a.phi_b, b.phi_b, 1e-12 * std::max(1.0, b.phi_b));
  EXPECT_NEAR(a.total, b.total, 1e-12 * std::max(1.0, b.total));
}

TEST(Physics, GradientMatchesCentralDifferences) {
  const MlpConfig cfg = small_config();
  const Params p = init_glorot(cfg, 11);
  const BurgersProblem problem;
  const TrainingSet s = sample_uniform(20, 20, 20, 2);
  const LossAndGradient lg = loss_gradient(p, cfg, problem, s);
  const double h = 1e-6;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Params plus = p, minus = p;
    plus.values[i] += h;
    minus.values[i] -= h;
    const double fd = (loss(plus, cfg, problem, s).total - loss(minus, cfg, problem, s).total) / (2 * h);
    EXPECT_NEAR(lg.grad[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << "parameter " << i;
  }
}

TEST(Physics, BatchedMatchesSerialReference) {
  const MlpConfig cfg = small_config();
  const Params p = init_glorot(cfg, 12);
  const BurgersProblem problem;
  const TrainingSet s = sample_lhs(30, 31, 200, 8);
  const LossAndGradient a = loss_gradient(p, cfg, problem, s);
  const LossAndGradient b = loss_gradient_reference(p, cfg, problem, s);
  EXPECT_NEAR(a.loss.total, b.loss.total, 1e-12 * b.loss.total);
  EXPECT_NEAR(a.loss.phi_r, b.loss.phi_r, 1e-12 * b.loss.phi_r);
  ASSERT_EQ(a.grad.size(), b.grad.size());
  double scale = 0.0;
  for (double g : b.grad) scale = std::max(scale, std::abs(g));
  for (std::size_t i = 0; i < a.grad.size(); ++i) EXPECT_NEAR(a.grad[i], b.grad[i], 1e-11 * scale) << i;
  EXPECT_EQ(loss_reference(p, cfg, problem, s), b.loss);
}

TEST(Physics, DuplicatingEveryPointLeavesLossUnchanged) {
  const MlpConfig cfg = small_config();
  const Params p = init_glorot(cfg, 4);
  const BurgersProblem problem;
  const TrainingSet s = sample_uniform(15, 16, 150, 6);
  TrainingSet d = s;
  auto twice = [](std::vector<SamplePoint>& v) { v.insert(v.end(), v.begin(), v.end()); };
  twice(d.x0);
  twice(d.xb);
  twice(d.xr);
  const LossAndGradient a = loss_gradient(p, cfg, problem, s);
  const LossAndGradient b = loss_gradient(p, cfg, problem, d);
  EXPECT_NEAR(a.loss.total, b.loss.total, 1e-12 * a.loss.total);
  for (std::size_t i = 0; i < a.grad.size(); ++i) EXPECT_NEAR(a.grad[i], b.grad[i], 1e-12 + 1e-12 * std::abs(a.grad[i]));
}

TEST(Physics, LossAgreesWithGradientCallAndRepeats) {
  const MlpConfig cfg = MlpConfig::burgers_default();
  const Params p = init_glorot(cfg, 0);
  const BurgersProblem problem;
  const TrainingSet s = sample_uniform(50, 50, 1000, 0);
  const LossBreakdown l = loss(p, cfg, problem, s);
  const LossAndGradient a = loss_gradient(p, cfg, problem, s);
  const LossAndGradient b = loss_gradient(p, cfg, problem, s);
  EXPECT_EQ(l, a.loss);
  EXPECT_EQ(a.loss, b.loss);
  EXPECT_EQ(a.grad, b.grad);
}

TEST(Physics, RejectsEmptySets) {
  const MlpConfig cfg = small_config();
  TrainingSet s = five_point_set();
  s.xr.clear();
  EXPECT_THROW(loss(zero_params(cfg), cfg, BurgersProblem{}, s), UsageError);
  EXPECT_THROW(loss_gradient_reference(zero_params(cfg), cfg, BurgersProblem{}, s), UsageError);
}

TEST(Physics, NonFiniteParametersAreRejected) {
  const MlpConfig cfg = small_config();
  Params p = init_glorot(cfg, 1);
  p.values[5] = std::nan("");
  EXPECT_THROW(loss_gradient(p, cfg, BurgersProblem{}, five_point_set()), NumericError);
}

}  // namespace
}  // namespace pinnlab
