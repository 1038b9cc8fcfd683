#include "pinnlab/optim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pinnlab/checkpoint.hpp"
#include "pinnlab/errors.hpp"

namespace pinnlab {

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::adam: return "adam";
    case OptimizerKind::adamax: return "adamax";
    case OptimizerKind::rmsprop: return "rmsprop";
    case OptimizerKind::diffgrad: return "diffgrad";
  }
  return "adam";
}

OptimizerKind parse_optimizer_kind(const std::string& name) {
  for (OptimizerKind k : kAllOptimizers) {
    if (to_string(k) == name) return k;
  }
  throw UsageError("unknown optimizer '" + name + "' (expected adam, adamax, rmsprop or diffgrad)");
}

OptimizerState make_optimizer(OptimizerKind kind, std::size_t n, const OptimizerHyper& hyper) {
  OptimizerState s;
  s.kind = kind;
  s.hyper = hyper;
  s.m.assign(n, 0.0);
  s.v.assign(n, 0.0);
  if (kind == OptimizerKind::diffgrad) s.g_prev.assign(n, 0.0);
  return s;
}

double diffgrad_friction(double g_prev, double g) { return 1.0 / (1.0 + std::exp(-std::abs(g_prev - g))); }

void apply(OptimizerState& state, std::span<double> params, std::span<const double> grad, double lr) {
  const std::size_t n = params.size();
  if (grad.size() != n || state.m.size() != n || state.v.size() != n) {
    throw UsageError("optimizer, parameter and gradient lengths differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grad[i])) throw NumericError("non-finite gradient entry " + std::to_string(i), i);
  }

  const OptimizerHyper& h = state.hyper;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(h.beta1, t);
  const double bc2 = 1.0 - std::pow(h.beta2, t);
  double* m = state.m.data();
  double* v = state.v.data();

  switch (state.kind) {
    case OptimizerKind::adam:
#pragma omp parallel for simd
      for (std::size_t i = 0; i < n; ++i) {
        const double g = grad[i];
        m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g;
        v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * g * g;
        params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + h.eps);
      }
      break;
    case OptimizerKind::adamax:
#pragma omp parallel for simd
      for (std::size_t i = 0; i < n; ++i) {
        const double g = grad[i];
        m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g;
        v[i] = std::max(h.beta2 * v[i], std::abs(g));
        params[i] -= (lr / bc1) * m[i] / (v[i] + h.eps);
      }
      break;
    case OptimizerKind::rmsprop:
#pragma omp parallel for simd
      for (std::size_t i = 0; i < n; ++i) {
        const double g = grad[i];
        v[i] = h.rho * v[i] + (1.0 - h.rho) * g * g;
        params[i] -= lr * g / (std::sqrt(v[i]) + h.eps);
      }
      break;
    case OptimizerKind::diffgrad: {
      if (state.g_prev.size() != n) throw UsageError("diffgrad state lacks previous gradient");
      double* gp = state.g_prev.data();
#pragma omp parallel for simd
      for (std::size_t i = 0; i < n; ++i) {
        const double g = grad[i];
        m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g;
        v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * g * g;
        const double xi = diffgrad_friction(gp[i], g);
        params[i] -= lr * xi * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + h.eps);
        gp[i] = g;
      }
      break;
    }
  }
}

LrSchedule::LrSchedule() : LrSchedule({{0, 0.01}, {1000, 0.001}, {3000, 0.0005}}) {}

LrSchedule::LrSchedule(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw UsageError("learning-rate schedule is empty");
  if (pieces_.front().first != 0) throw UsageError("learning-rate schedule must start at epoch 0");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].second > 0.0) || !std::isfinite(pieces_[i].second)) {
      throw UsageError("learning rates must be positive");
    }
    if (i > 0 && pieces_[i].first <= pieces_[i - 1].first) {
      throw UsageError("schedule thresholds must be strictly increasing");
    }
  }
}

LrSchedule LrSchedule::parse(const std::string& text) {
  if (text.empty() || text.back() == ',') throw UsageError("schedule '" + text + "' is not a list of epoch:rate");
  std::vector<Piece> pieces;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("schedule entry '" + item + "' is not epoch:rate");
    try {
      std::size_t used = 0;
      const std::string e = item.substr(0, colon), r = item.substr(colon + 1);
      const long long epoch = std::stoll(e, &used);
      if (used != e.size()) throw UsageError("bad epoch in '" + item + "'");
      const double rate = std::stod(r, &used);
      if (used != r.size()) throw UsageError("bad rate in '" + item + "'");
      pieces.emplace_back(epoch, rate);
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const UsageError*>(&e)) throw;
      throw UsageError("schedule entry '" + item + "' is not epoch:rate");
    }
  }
  return LrSchedule(std::move(pieces));
}

double LrSchedule::at(std::int64_t epoch) const {
  if (epoch < 0) throw UsageError("epoch must be non-negative");
  double rate = pieces_.front().second;
  for (const Piece& p : pieces_) {
    if (p.first <= epoch) rate = p.second;
  }
  return rate;
}

std::string LrSchedule::to_string() const {
  std::string s;
  for (const Piece& p : pieces_) {
    if (!s.empty()) s += ',';
    s += std::to_string(p.first) + ':' + format_double(p.second);
  }
  return s;
}

}  // namespace pinnlab
