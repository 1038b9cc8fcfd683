#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "pinnlab/dual2.hpp"
#include "pinnlab/mlp.hpp"
#include "pinnlab/sampler.hpp"

namespace pinnlab {

/// u_t + u u_x - nu u_xx = 0 on (0, 1] x (-1, 1), u(0, x) = -sin(pi x),
/// u(t, -1) = u(t, 1) = 0.
struct BurgersProblem {
  double nu = 0.01 / std::numbers::pi;
  double t_min = 0.0;
  double t_max = 1.0;
  double x_min = -1.0;
  double x_max = 1.0;

  double initial(double x) const { return initial_condition(x); }
  double boundary(double /*t*/, double /*x*/) const { return 0.0; }
};

/// Loss terms. total = phi_r + phi_0 + phi_b, evaluated in that order.
struct LossBreakdown {
  double total = 0.0;
  double phi_r = 0.0;
  double phi_0 = 0.0;
  double phi_b = 0.0;

  friend bool operator==(const LossBreakdown&, const LossBreakdown&) = default;
};

/// r = u_t + u u_x - nu u_xx from a Dual2 carrying u and its derivatives.
double residual_from(const Dual2& u, double nu);

/// Residual of the network at one point, derivatives from the tape.
double residual(const Params& params, const MlpConfig& config, const BurgersProblem& problem, double t, double x);

// Batched route (production): chunked OpenMP kernels, fixed-order sums.
//
// Each phi term is the chunk-ordered sum of per-chunk partial sums of the
// squared pointwise terms, scaled by 1/N at the end.

LossBreakdown loss(const Params& params, const MlpConfig& config, const BurgersProblem& problem,
                   const TrainingSet& data);

struct LossAndGradient {
  LossBreakdown loss;
  std::vector<double> grad;
};

LossAndGradient loss_gradient(const Params& params, const MlpConfig& config, const BurgersProblem& problem,
                              const TrainingSet& data);

// Serial reference route: one Tape per point, sequential accumulation.
// Slow; used by tests to cross-check the batched kernels.

LossBreakdown loss_reference(const Params& params, const MlpConfig& config, const BurgersProblem& problem,
                             const TrainingSet& data);

LossAndGradient loss_gradient_reference(const Params& params, const MlpConfig& config,
                                        const BurgersProblem& problem, const TrainingSet& data);

}  // namespace pinnlab
