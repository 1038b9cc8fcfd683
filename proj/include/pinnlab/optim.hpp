#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pinnlab {

enum class OptimizerKind { adam, adamax, rmsprop, diffgrad };

std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(const std::string& name);

/// The four optimizers in reporting order.
inline constexpr OptimizerKind kAllOptimizers[] = {OptimizerKind::adam, OptimizerKind::adamax,
                                                   OptimizerKind::rmsprop, OptimizerKind::diffgrad};

struct OptimizerHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double rho = 0.9;
};

/// Per-run optimizer memory.
///
/// `m` is the first moment (unused by rmsprop); `v` is the second moment,
/// the RMS average or the infinity norm depending on the kind; `g_prev`
/// is DiffGrad's previous gradient and starts at zero.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::adam;
  OptimizerHyper hyper;
  std::vector<double> m;
  std::vector<double> v;
  std::vector<double> g_prev;
  std::int64_t step = 0;
};

OptimizerState make_optimizer(OptimizerKind kind, std::size_t n, const OptimizerHyper& hyper = {});

/// One update of `params` in place. Throws NumericError carrying the index
/// of the first non-finite gradient entry and leaves state and params
/// untouched in that case.
void apply(OptimizerState& state, std::span<double> params, std::span<const double> grad, double lr);

/// DiffGrad friction 1 / (1 + exp(-|g_prev - g|)); lies in [0.5, 1).
double diffgrad_friction(double g_prev, double g);

/// Piecewise-constant learning rate: the rate of the last piece whose
/// epoch threshold is <= the current epoch.
class LrSchedule {
 public:
  using Piece = std::pair<std::int64_t, double>;

  /// 0.01 for epochs [0, 1000), 0.001 for [1000, 3000), 0.0005 after.
  LrSchedule();

  /// Throws UsageError unless thresholds are strictly increasing, start
  /// at 0, and every rate is positive.
  explicit LrSchedule(std::vector<Piece> pieces);

  /// Parses "e0:r0,e1:r1,...".
  static LrSchedule parse(const std::string& text);

  double at(std::int64_t epoch) const;
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::string to_string() const;

 private:
  std::vector<Piece> pieces_;
};

}  // namespace pinnlab
