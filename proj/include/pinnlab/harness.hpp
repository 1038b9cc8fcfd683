#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pinnlab/mlp.hpp"
#include "pinnlab/optim.hpp"
#include "pinnlab/oracle.hpp"
#include "pinnlab/physics.hpp"
#include "pinnlab/sampler.hpp"

namespace pinnlab {

/// Everything a training / evaluation run depends on.
struct RunConfig {
  OptimizerKind optimizer = OptimizerKind::diffgrad;
  OptimizerHyper hyper;
  LrSchedule schedule;
  std::int64_t epochs = 5000;
  std::uint64_t seed = 0;
  std::size_t n0 = 50;
  std::size_t nb = 50;
  std::size_t nf = 10000;
  SamplingMethod sampling = SamplingMethod::uniform;
  std::vector<double> snapshot_times{0.25, 0.5, 0.75, 1.0};
  int grid_nt = 100;
  int grid_nx = 256;
  std::filesystem::path out_dir = "out";
  bool timing_mode = false;
  bool write_svg = true;

  MlpConfig network = MlpConfig::burgers_default();
  BurgersProblem problem;
  oracle::Method oracle_method = oracle::Method::crank_nicolson;
  int oracle_nx = 2048;
  int oracle_nt = 4096;
  int oracle_quad_order = 128;

  /// Throws UsageError on non-positive counts, negative epochs, or
  /// snapshot times outside (0, 1].
  void validate() const;

  /// Seed for the network initialisation, derived from `seed` so that
  /// data and weights use independent streams.
  std::uint64_t init_seed() const;
};

struct EpochRecord {
  std::int64_t epoch;
  double total;
  double phi_r;
  double phi_0;
  double phi_b;
  double lr;
  double wall_ms;  // cumulative training-loop time
};

struct TrainResult {
  Params params;
  std::vector<EpochRecord> records;
  LossBreakdown final_loss;  // loss of `params`
  double seconds = 0.0;      // training loop only
  bool failed = false;
  std::string diagnostic;
};

/// Full-batch training loop on fixed data. Each epoch evaluates the loss
/// and its gradient, then applies one optimizer step at the scheduled
/// rate. A non-finite loss or gradient stops the run: `params` keeps the
/// last good values, `failed` is set and `diagnostic` says why.
TrainResult train_on(const RunConfig& config, const TrainingSet& data, const Params& initial);

/// Samples data, initialises the network, trains, and writes
/// `out_dir/loss.csv` and `out_dir/checkpoint.txt` (+ `loss.svg`).
TrainResult train(const RunConfig& config);

struct SnapshotReport {
  double t;
  double max_abs_err;
  double max_abs_ux_pred;  // max |du/dx| of the network over the x grid
  double max_abs_ux_ref;   // same for the reference, by finite differences
  std::filesystem::path file;
};

struct EvalReport {
  double rel_l2 = 0.0;
  double ic_max_err = 0.0;  // max |u_pred - u0| on the first (t = 0) grid row
  std::vector<SnapshotReport> snapshots;
};

/// Evaluation grid: grid_nt times evenly spaced on [0, 1] and grid_nx
/// positions evenly spaced on [-1, 1].
std::vector<double> eval_times(const RunConfig& config);
std::vector<double> eval_positions(const RunConfig& config);

/// Reference solution on the evaluation grid followed by one row per
/// snapshot time.
oracle::ReferenceGrid reference_for(const RunConfig& config);

/// Writes surface.csv, snapshot_t<T>.csv per snapshot time and
/// error_report.json (+ SVG plots) into config.out_dir. Pass a grid from
/// reference_for() to avoid recomputing the reference.
EvalReport evaluate(const Params& params, const RunConfig& config,
                    const std::optional<oracle::ReferenceGrid>& reference = std::nullopt);

struct CompareRow {
  OptimizerKind optimizer;
  double final_loss;
  double rel_l2;
  double seconds;
  std::int64_t epochs;
  std::uint64_t data_fingerprint;
  bool failed;
  std::string diagnostic;
};

/// Trains all four optimizers on one shared TrainingSet and initial
/// network, evaluates each, and writes compare.csv and compare_meta.json.
/// Sub-runs live in out_dir/<optimizer>/. In timing mode the runs execute
/// one after another; otherwise they may run concurrently.
std::vector<CompareRow> compare(const RunConfig& config);

/// Writes the training set as set,t,x,target rows.
void write_training_set(const std::filesystem::path& path, const TrainingSet& data);

/// Writes a reference grid as t,x,u rows.
void write_reference_grid(const std::filesystem::path& path, const oracle::ReferenceGrid& grid);

/// Largest |du/dx| along x by forward differences.
double max_abs_slope(const std::vector<double>& x, const std::vector<double>& u);

}  // namespace pinnlab
