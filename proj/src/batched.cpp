#include "pinnlab/batched.hpp"

#include <Eigen/Core>
#include <cmath>
#include <exception>
#include <string>

#include "pinnlab/errors.hpp"
#include "pinnlab/vmath.hpp"

namespace pinnlab::batched {
namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;
using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using VectorMap = Eigen::Map<const Eigen::VectorXd>;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Eigen picks its peeling and packet paths from operand addresses, so
// products over maps into arbitrary std::vector storage round differently
// from call to call. Every GEMM operand therefore lives in Eigen-owned
// (maximally aligned) storage.
std::vector<RowMajorMatrix> load_weights(const Params& params, const std::vector<LayerSlice>& slices) {
  std::vector<RowMajorMatrix> w;
  w.reserve(slices.size());
  for (const LayerSlice& s : slices) w.emplace_back(RowMajorMap(params.values.data() + s.weights, s.out, s.in));
  return w;
}

// Activations are stored as (width x 4P) column-major matrices whose four
// contiguous column blocks hold val, dx, dt and dxx for the P points of a
// chunk.
struct Workspace {
  std::vector<Matrix> pre;   // affine outputs per layer
  std::vector<Matrix> post;  // post[0] is the scaled input, post[l+1] the output of layer l
  Matrix bar;
  Matrix bar_prev;
  RowMajorMatrix grad_w;
  std::vector<double> seeds;

  void prepare(const std::vector<LayerSlice>& slices, Eigen::Index points) {
    pre.resize(slices.size());
    post.resize(slices.size() + 1);
    post[0].resize(2, 4 * points);
    for (std::size_t l = 0; l < slices.size(); ++l) {
      pre[l].resize(slices[l].out, 4 * points);
      post[l + 1].resize(slices[l].out, 4 * points);
    }
    seeds.assign(4 * static_cast<std::size_t>(points), 0.0);
  }
};

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

void forward_chunk(const Params& params, const std::vector<RowMajorMatrix>& weights, const MlpConfig& config,
                   const std::vector<LayerSlice>& slices, std::span<const double> t, std::span<const double> x, std::size_t first, Eigen::Index points,
                   Workspace& ws) {
  ws.prepare(slices, points);
  const ScaledInput f = input_scale_factors(config);
  const ScaledInput c = scale_inputs(0.0, 0.0, config);

  Matrix& in = ws.post[0];
  in.setZero();
  for (Eigen::Index p = 0; p < points; ++p) {
    const std::size_t i = first + static_cast<std::size_t>(p);
    in(0, p) = f.t * t[i] + c.t;
    in(1, p) = f.x * x[i] + c.x;
    in(1, points + p) = f.x;      // d/dx
    in(0, 2 * points + p) = f.t;  // d/dt
  }

  const double* theta = params.values.data();
  for (std::size_t l = 0; l < slices.size(); ++l) {
    const LayerSlice& s = slices[l];
    const VectorMap b(theta + s.bias, s.out);
    Matrix& z = ws.pre[l];
    z.noalias() = weights[l] * ws.post[l];
    z.leftCols(points).colwise() += b;

    Matrix& a = ws.post[l + 1];
    if (l + 1 == slices.size()) {
      a = z;
      break;
    }
    const Eigen::Index n = s.out * points;
    const double* zv = z.data();
    const double* zdx = zv + n;
    const double* zdt = zdx + n;
    const double* zdxx = zdt + n;
    double* av = a.data();
    double* adx = av + n;
    double* adt = adx + n;
    double* adxx = adt + n;
    vmath::tanh(zv, av, static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
      const double s0 = av[k];
      const double s1 = 1.0 - s0 * s0;
      const double s2 = -2.0 * s0 * s1;
      adx[k] = s1 * zdx[k];
      adt[k] = s1 * zdt[k];
      adxx[k] = s2 * zdx[k] * zdx[k] + s1 * zdxx[k];
    }
  }

  const Matrix& out = ws.post.back();
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    if (!std::isfinite(out.data()[k])) {
      throw NumericError("non-finite network output in layer " + std::to_string(slices.size() - 1),
                         slices.size() - 1);
    }
  }
}

// Accumulates d(objective)/d(theta) for one chunk into `grad`, given the
// output adjoints already stored in ws.seeds.
void backward_chunk(const std::vector<RowMajorMatrix>& weights, const std::vector<LayerSlice>& slices,
                    Eigen::Index points, Workspace& ws, std::span<double> grad) {
  ws.bar = Eigen::Map<const Matrix>(ws.seeds.data(), 1, 4 * points);

  for (std::size_t l = slices.size(); l-- > 0;) {
    const LayerSlice& s = slices[l];
    if (l + 1 < slices.size()) {
      // Pull the adjoint of tanh's output back onto its Dual2 input.
      const Eigen::Index n = s.out * points;
      const Matrix& z = ws.pre[l];
      const double* zdx = z.data() + n;
      const double* zdt = zdx + n;
      const double* zdxx = zdt + n;
      const double* av = ws.post[l + 1].data();
      double* bv = ws.bar.data();
      double* bdx = bv + n;
      double* bdt = bdx + n;
      double* bdxx = bdt + n;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double s0 = av[k];
        const double s1 = 1.0 - s0 * s0;
        const double s2 = -2.0 * s0 * s1;
        const double s3 = -2.0 * s1 * s1 + 4.0 * s0 * s0 * s1;
        const double gv = bv[k], gdx = bdx[k], gdt = bdt[k], gdxx = bdxx[k];
        bv[k] = gv * s1 + (gdx * zdx[k] + gdt * zdt[k]) * s2 + gdxx * (s3 * zdx[k] * zdx[k] + s2 * zdxx[k]);
        bdx[k] = gdx * s1 + 2.0 * gdxx * s2 * zdx[k];
        bdt[k] = gdt * s1;
        bdxx[k] = gdxx * s1;
      }
    }
    ws.grad_w.noalias() = ws.bar * ws.post[l].transpose();
    double* gw = grad.data() + s.weights;
    const double* tw = ws.grad_w.data();
    for (Eigen::Index k = 0; k < ws.grad_w.size(); ++k) gw[k] += tw[k];
    // Bias adjoint: column-by-column sum of the val block. Written out
    // because Eigen's partial reduction switches summation order with the
    // destination's alignment.
    double* gb = grad.data() + s.bias;
    for (Eigen::Index p = 0; p < points; ++p) {
      const double* col = ws.bar.data() + p * s.out;
      for (Eigen::Index r = 0; r < s.out; ++r) gb[r] += col[r];
    }
    if (l > 0) {
      ws.bar_prev.noalias() = weights[l].transpose() * ws.bar;
      ws.bar.swap(ws.bar_prev);
    }
  }
}

template <typename PerChunk>
void for_each_chunk(std::size_t n, PerChunk&& body) {
  const auto chunks = static_cast<std::ptrdiff_t>(chunk_count(n));
  std::exception_ptr failure;
#pragma omp parallel
  {
    Workspace ws;
#pragma omp for schedule(static)
    for (std::ptrdiff_t c = 0; c < chunks; ++c) {
      try {
        body(static_cast<std::size_t>(c), ws);
      } catch (...) {
#pragma omp critical(pinnlab_batched_failure)
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void check_inputs(const Params& params, const MlpConfig& config, std::span<const double> t,
                  std::span<const double> x) {
  check_params(params, config);
  if (t.size() != x.size()) throw UsageError("t and x must have the same length");
}

struct ChunkRange {
  std::size_t first;
  Eigen::Index points;
};

ChunkRange range_of(std::size_t chunk, std::size_t n) {
  const std::size_t first = chunk * kChunk;
  return {first, static_cast<Eigen::Index>(std::min(kChunk, n - first))};
}

ChunkOutputs outputs_of(const Workspace& ws, const ChunkRange& r) {
  const double* u = ws.post.back().data();
  return {r.first, static_cast<std::size_t>(r.points), u, u + 2 * r.points, u + r.points, u + 3 * r.points};
}

ChunkSeeds seeds_of(Workspace& ws, const ChunkRange& r) {
  double* s = ws.seeds.data();
  return {s, s + 2 * r.points, s + r.points, s + 3 * r.points};
}

}  // namespace

Derivatives evaluate(const Params& params, const MlpConfig& config, std::span<const double> t,
                     std::span<const double> x) {
  check_inputs(params, config, t, x);
  const auto slices = layer_slices(config);
  const auto weights = load_weights(params, slices);
  const std::size_t n = t.size();
  Derivatives d;
  d.u.resize(n);
  d.u_t.resize(n);
  d.u_x.resize(n);
  d.u_xx.resize(n);
  for_each_chunk(n, [&](std::size_t c, Workspace& ws) {
    const ChunkRange r = range_of(c, n);
    forward_chunk(params, weights, config, slices, t, x, r.first, r.points, ws);
    const ChunkOutputs o = outputs_of(ws, r);
    std::copy(o.u, o.u + o.count, d.u.begin() + static_cast<std::ptrdiff_t>(r.first));
    std::copy(o.u_t, o.u_t + o.count, d.u_t.begin() + static_cast<std::ptrdiff_t>(r.first));
    std::copy(o.u_x, o.u_x + o.count, d.u_x.begin() + static_cast<std::ptrdiff_t>(r.first));
    std::copy(o.u_xx, o.u_xx + o.count, d.u_xx.begin() + static_cast<std::ptrdiff_t>(r.first));
  });
  return d;
}

std::vector<double> evaluate_values(const Params& params, const MlpConfig& config, std::span<const double> t,
                                    std::span<const double> x) {
  return evaluate(params, config, t, x).u;
}

double reduce(const Params& params, const MlpConfig& config, std::span<const double> t, std::span<const double> x,
              const Seeder& seeder) {
  check_inputs(params, config, t, x);
  const auto slices = layer_slices(config);
  const auto weights = load_weights(params, slices);
  const std::size_t n = t.size();
  std::vector<double> partial(chunk_count(n), 0.0);
  for_each_chunk(n, [&](std::size_t c, Workspace& ws) {
    const ChunkRange r = range_of(c, n);
    forward_chunk(params, weights, config, slices, t, x, r.first, r.points, ws);
    partial[c] = seeder(outputs_of(ws, r), seeds_of(ws, r));
  });
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

double reduce_with_gradient(const Params& params, const MlpConfig& config, std::span<const double> t,
                            std::span<const double> x, const Seeder& seeder, std::span<double> grad) {
  check_inputs(params, config, t, x);
  if (grad.size() != params.size()) throw UsageError("gradient buffer length does not match parameters");
  const auto slices = layer_slices(config);
  const auto weights = load_weights(params, slices);
  const std::size_t n = t.size();
  const std::size_t chunks = chunk_count(n);
  const std::size_t np = params.size();
  std::vector<double> partial(chunks, 0.0);
  std::vector<double> chunk_grads(chunks * np, 0.0);
  for_each_chunk(n, [&](std::size_t c, Workspace& ws) {
    const ChunkRange r = range_of(c, n);
    forward_chunk(params, weights, config, slices, t, x, r.first, r.points, ws);
    partial[c] = seeder(outputs_of(ws, r), seeds_of(ws, r));
    backward_chunk(weights, slices, r.points, ws, std::span<double>(chunk_grads).subspan(c * np, np));
  });
  double sum = 0.0;
  for (double p : partial) sum += p;
  for (std::size_t c = 0; c < chunks; ++c) {
    const double* g = chunk_grads.data() + c * np;
    for (std::size_t i = 0; i < np; ++i) grad[i] += g[i];
  }
  return sum;
}

}  // namespace pinnlab::batched
