#include "pinnlab/physics.hpp"

#include <cmath>

#include "pinnlab/batched.hpp"
#include "pinnlab/errors.hpp"

namespace pinnlab {
namespace {

void require_nonempty(const TrainingSet& data) {
  if (data.x0.empty() || data.xb.empty() || data.xr.empty()) {
    throw UsageError("training set must contain initial, boundary and collocation points");
  }
}

struct Columns {
  std::vector<double> t, x, target;
};

Columns columns(const std::vector<SamplePoint>& pts) {
  Columns c;
  c.t.reserve(pts.size());
  c.x.reserve(pts.size());
  c.target.reserve(pts.size());
  for (const SamplePoint& p : pts) {
    c.t.push_back(p.t);
    c.x.push_back(p.x);
    c.target.push_back(p.target);
  }
  return c;
}

// Seeders return the chunk's sum of squared terms and write the adjoints of
// (1/n) * sum, so the gradient carries the mean's normalisation directly.

batched::Seeder residual_seeder(double nu, std::size_t n) {
  const double inv_n = 1.0 / static_cast<double>(n);
  return [nu, inv_n](const batched::ChunkOutputs& o, const batched::ChunkSeeds& s) {
    double sum = 0.0;
    for (std::size_t p = 0; p < o.count; ++p) {
      const double r = residual_from({o.u[p], o.u_x[p], o.u_t[p], o.u_xx[p]}, nu);
      sum += r * r;
      const double g = 2.0 * r * inv_n;
      s.u[p] = g * o.u_x[p];
      s.u_x[p] = g * o.u[p];
      s.u_t[p] = g;
      s.u_xx[p] = -g * nu;
    }
    return sum;
  };
}

batched::Seeder misfit_seeder(const std::vector<double>& target, std::size_t n) {
  const double inv_n = 1.0 / static_cast<double>(n);
  return [&target, inv_n](const batched::ChunkOutputs& o, const batched::ChunkSeeds& s) {
    double sum = 0.0;
    for (std::size_t p = 0; p < o.count; ++p) {
      const double e = o.u[p] - target[o.first + p];
      sum += e * e;
      s.u[p] = 2.0 * e * inv_n;
    }
    return sum;
  };
}

LossBreakdown combine(double sum_r, double sum_0, double sum_b, const TrainingSet& data) {
  LossBreakdown l;
  l.phi_r = sum_r / static_cast<double>(data.xr.size());
  l.phi_0 = sum_0 / static_cast<double>(data.x0.size());
  l.phi_b = sum_b / static_cast<double>(data.xb.size());
  l.total = l.phi_r + l.phi_0 + l.phi_b;
  if (!std::isfinite(l.total)) throw NumericError("non-finite loss");
  return l;
}

// Reference per-point contributions, each on its own tape.
double point_residual_squared(const Params& params, const MlpConfig& config, double nu, const SamplePoint& p,
                              std::vector<double>* grad, double weight) {
  Tape tape;
  const NodeId u = forward(params, config, tape.input(p.t, InputAxis::t), tape.input(p.x, InputAxis::x), tape);
  const NodeId uv = tape.component(u, Component::val);
  const NodeId ut = tape.component(u, Component::dt);
  const NodeId ux = tape.component(u, Component::dx);
  const NodeId uxx = tape.component(u, Component::dxx);
  const NodeId r = tape.apply(Op::sub, tape.apply(Op::add, ut, tape.apply(Op::mul, uv, ux)), tape.scale(uxx, nu));
  const NodeId r2 = tape.apply(Op::mul, r, r);
  if (grad) {
    const auto g = tape.backward(r2, params.size());
    for (std::size_t i = 0; i < g.size(); ++i) (*grad)[i] += weight * g[i];
  }
  return tape.value(r2).val;
}

double point_misfit_squared(const Params& params, const MlpConfig& config, const SamplePoint& p,
                            std::vector<double>* grad, double weight) {
  Tape tape;
  const NodeId u = forward(params, config, tape.input(p.t, InputAxis::t), tape.input(p.x, InputAxis::x), tape);
  const NodeId e = tape.apply(Op::sub, tape.component(u, Component::val), tape.constant(p.target));
  const NodeId e2 = tape.apply(Op::mul, e, e);
  if (grad) {
    const auto g = tape.backward(e2, params.size());
    for (std::size_t i = 0; i < g.size(); ++i) (*grad)[i] += weight * g[i];
  }
  return tape.value(e2).val;
}

LossAndGradient reference_impl(const Params& params, const MlpConfig& config, const BurgersProblem& problem,
                               const TrainingSet& data, bool with_grad) {
  require_nonempty(data);
  check_params(params, config);
  LossAndGradient out;
  if (with_grad) out.grad.assign(params.size(), 0.0);
  std::vector<double>* g = with_grad ? &out.grad : nullptr;

  double sum_r = 0.0, sum_0 = 0.0, sum_b = 0.0;
  const double wr = 1.0 / static_cast<double>(data.xr.size());
  const double w0 = 1.0 / static_cast<double>(data.x0.size());
  const double wb = 1.0 / static_cast<double>(data.xb.size());
  for (const SamplePoint& p : data.xr) sum_r += point_residual_squared(params, config, problem.nu, p, g, wr);
  for (const SamplePoint& p : data.x0) sum_0 += point_misfit_squared(params, config, p, g, w0);
  for (const SamplePoint& p : data.xb) sum_b += point_misfit_squared(params, config, p, g, wb);
  out.loss = combine(sum_r, sum_0, sum_b, data);
  return out;
}

}  // namespace

double residual_from(const Dual2& u, double nu) { return u.dt + u.val * u.dx - nu * u.dxx; }

double residual(const Params& params, const MlpConfig& config, const BurgersProblem& problem, double t, double x) {
  Tape tape;
  const NodeId u = forward(params, config, tape.input(t, InputAxis::t), tape.input(x, InputAxis::x), tape);
  const double r = residual_from(tape.value(u), problem.nu);
  if (!std::isfinite(r)) throw NumericError("non-finite residual");
  return r;
}

LossBreakdown loss(const Params& params, const MlpConfig& config, const BurgersProblem& problem,
                   const TrainingSet& data) {
  require_nonempty(data);
  const Columns r = columns(data.xr), i0 = columns(data.x0), b = columns(data.xb);
  const double sum_r = batched::reduce(params, config, r.t, r.x, residual_seeder(problem.nu, r.t.size()));
  const double sum_0 = batched::reduce(params, config, i0.t, i0.x, misfit_seeder(i0.target, i0.t.size()));
  const double sum_b = batched::reduce(params, config, b.t, b.x, misfit_seeder(b.target, b.t.size()));
  return combine(sum_r, sum_0, sum_b, data);
}

LossAndGradient loss_gradient(const Params& params, const MlpConfig& config, const BurgersProblem& problem,
                              const TrainingSet& data) {
  require_nonempty(data);
  const Columns r = columns(data.xr), i0 = columns(data.x0), b = columns(data.xb);
  LossAndGradient out;
  out.grad.assign(params.size(), 0.0);
  const double sum_r =
      batched::reduce_with_gradient(params, config, r.t, r.x, residual_seeder(problem.nu, r.t.size()), out.grad);
  const double sum_0 =
      batched::reduce_with_gradient(params, config, i0.t, i0.x, misfit_seeder(i0.target, i0.t.size()), out.grad);
  const double sum_b =
      batched::reduce_with_gradient(params, config, b.t, b.x, misfit_seeder(b.target, b.t.size()), out.grad);
  out.loss = combine(sum_r, sum_0, sum_b, data);
  for (std::size_t i = 0; i < out.grad.size(); ++i) {
    if (!std::isfinite(out.grad[i])) throw NumericError("non-finite gradient entry " + std::to_string(i), i);
  }
  return out;
}

LossBreakdown loss_reference(const Params& params, const MlpConfig& config, const BurgersProblem& problem,
                             const TrainingSet& data) {
  return reference_impl(params, config, problem, data, false).loss;
}

LossAndGradient loss_gradient_reference(const Params& params, const MlpConfig& config,
                                        const BurgersProblem& problem, const TrainingSet& data) {
  return reference_impl(params, config, problem, data, true);
}

}  // namespace pinnlab
