#include "pinnlab/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "pinnlab/batched.hpp"
#include "pinnlab/checkpoint.hpp"
#include "pinnlab/csv.hpp"
#include "pinnlab/errors.hpp"
#include "pinnlab/svg.hpp"

namespace pinnlab {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::string time_tag(double t) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(4);
  s << t;
  return s.str();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  v.back() = hi;
  return v;
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<EpochRecord>& records) {
  csv::Writer w(path, {"epoch", "total", "phi_r", "phi_0", "phi_b", "lr", "wall_ms"});
  for (const EpochRecord& r : records) {
    w.cell(static_cast<long long>(r.epoch)).cell(r.total).cell(r.phi_r).cell(r.phi_0).cell(r.phi_b).cell(r.lr).cell(
        r.wall_ms);
    w.end_row();
  }
}

void write_loss_svg(const std::filesystem::path& path, const std::vector<EpochRecord>& records,
                    const std::string& title) {
  svg::Series total{"total", {}, {}, "#1f77b4"}, pr{"phi_r", {}, {}, "#ff7f0e", true},
      p0{"phi_0", {}, {}, "#2ca02c", true}, pb{"phi_b", {}, {}, "#d62728", true};
  for (const EpochRecord& r : records) {
    const auto e = static_cast<double>(r.epoch);
    for (auto [s, v] : {std::pair{&total, r.total}, {&pr, r.phi_r}, {&p0, r.phi_0}, {&pb, r.phi_b}}) {
      s->x.push_back(e);
      s->y.push_back(v);
    }
  }
  svg::write_line_plot(path, {total, pr, p0, pb}, {title, "epoch", "loss", true});
}

}  // namespace

void RunConfig::validate() const {
  if (epochs < 0) throw UsageError("epochs must be non-negative");
  if (n0 == 0 || nb == 0 || nf == 0) throw UsageError("sample counts must be positive");
  if (grid_nt < 2 || grid_nx < 2) throw UsageError("evaluation grid needs at least 2 x 2 points");
  for (double t : snapshot_times) {
    if (!(t > 0.0 && t <= 1.0)) throw UsageError("snapshot times must lie in (0, 1]");
  }
  network.validate();
  if (!(problem.nu > 0.0)) throw UsageError("viscosity must be positive");
}

std::uint64_t RunConfig::init_seed() const { return seed ^ 0x9e3779b97f4a7c15ull; }

TrainResult train_on(const RunConfig& config, const TrainingSet& data, const Params& initial) {
  config.validate();
  check_params(initial, config.network);
  TrainResult result;
  result.params = initial;
  result.records.reserve(static_cast<std::size_t>(config.epochs));
  OptimizerState state = make_optimizer(config.optimizer, initial.size(), config.hyper);

  double loop_ms = 0.0;
  for (std::int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto start = Clock::now();
    LossAndGradient lg;
    const double lr = config.schedule.at(epoch);
    try {
      lg = loss_gradient(result.params, config.network, config.problem, data);
      Params next = result.params;
      apply(state, next.values, lg.grad, lr);
      check_params(next, config.network);
      result.params = std::move(next);
    } catch (const NumericError& e) {
      result.failed = true;
      result.diagnostic = "epoch " + std::to_string(epoch) + ": " + e.what();
      break;
    }
    loop_ms += elapsed_ms(start);
    result.records.push_back({epoch, lg.loss.total, lg.loss.phi_r, lg.loss.phi_0, lg.loss.phi_b, lr, loop_ms});
  }
  result.seconds = loop_ms / 1000.0;

  try {
    result.final_loss = loss(result.params, config.network, config.problem, data);
  } catch (const NumericError& e) {
    result.failed = true;
    if (result.diagnostic.empty()) result.diagnostic = std::string("final loss: ") + e.what();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    result.final_loss = {nan, nan, nan, nan};
  }
  return result;
}

TrainResult train(const RunConfig& config) {
  config.validate();
  const TrainingSet data = sample(config.sampling, config.n0, config.nb, config.nf, config.seed);
  const Params initial = init_glorot(config.network, config.init_seed());
  TrainResult result = train_on(config, data, initial);

  write_loss_csv(config.out_dir / "loss.csv", result.records);
  write_checkpoint(config.out_dir / "checkpoint.txt",
                   {config.network, result.params, config.seed, static_cast<std::int64_t>(result.records.size())});
  if (config.write_svg) write_loss_svg(config.out_dir / "loss.svg", result.records, to_string(config.optimizer) + " loss");
  std::ofstream(config.out_dir / "train_summary.json")
      << nlohmann::json{{"optimizer", to_string(config.optimizer)},
                        {"seed", config.seed},
                        {"epochs", result.records.size()},
                        {"final_loss",
                         {{"total", result.final_loss.total},
                          {"phi_r", result.final_loss.phi_r},
                          {"phi_0", result.final_loss.phi_0},
                          {"phi_b", result.final_loss.phi_b}}},
                        {"seconds", result.seconds},
                        {"failed", result.failed}}
             .dump(2)
      << '\n';
  if (result.failed) {
    std::ofstream diag(config.out_dir / "diagnostic.json");
    diag << nlohmann::json{{"failed", true},
                           {"diagnostic", result.diagnostic},
                           {"last_good_epoch", result.records.size()}}
                .dump(2)
         << '\n';
  }
  return result;
}

std::vector<double> eval_times(const RunConfig& config) { return linspace(0.0, 1.0, config.grid_nt); }

std::vector<double> eval_positions(const RunConfig& config) { return linspace(-1.0, 1.0, config.grid_nx); }

oracle::ReferenceGrid reference_for(const RunConfig& config) {
  std::vector<double> times = eval_times(config);
  times.insert(times.end(), config.snapshot_times.begin(), config.snapshot_times.end());
  const std::vector<double> xs = eval_positions(config);
  return oracle::reference_on_grid(config.oracle_method, times, xs, config.problem.nu, config.oracle_nx,
                                   config.oracle_nt, config.oracle_quad_order);
}

double max_abs_slope(const std::vector<double>& x, const std::vector<double>& u) {
  double peak = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) peak = std::max(peak, std::abs((u[j + 1] - u[j]) / (x[j + 1] - x[j])));
  return peak;
}

EvalReport evaluate(const Params& params, const RunConfig& config,
                    const std::optional<oracle::ReferenceGrid>& reference) {
  config.validate();
  check_params(params, config.network);
  const std::vector<double> ts = eval_times(config);
  const std::vector<double> xs = eval_positions(config);
  const oracle::ReferenceGrid ref = reference ? *reference : reference_for(config);
  const std::size_t rows = ts.size() + config.snapshot_times.size();
  if (ref.u.rows() != static_cast<Eigen::Index>(rows) || ref.u.cols() != static_cast<Eigen::Index>(xs.size())) {
    throw UsageError("reference grid does not match the evaluation grid");
  }

  std::vector<double> gt, gx;
  gt.reserve(ts.size() * xs.size());
  gx.reserve(ts.size() * xs.size());
  for (double t : ts) {
    for (double x : xs) {
      gt.push_back(t);
      gx.push_back(x);
    }
  }
  const std::vector<double> u = batched::evaluate_values(params, config.network, gt, gx);

  const auto nt = static_cast<Eigen::Index>(ts.size());
  const auto nx = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd pred(nt, nx);
  {
    csv::Writer surface(config.out_dir / "surface.csv", {"t", "x", "u_pred"});
    for (Eigen::Index i = 0; i < nt; ++i) {
      for (Eigen::Index j = 0; j < nx; ++j) {
        pred(i, j) = u[static_cast<std::size_t>(i * nx + j)];
        surface.cell(ts[static_cast<std::size_t>(i)]).cell(xs[static_cast<std::size_t>(j)]).cell(pred(i, j));
        surface.end_row();
      }
    }
  }

  EvalReport report;
  report.rel_l2 = oracle::relative_l2_error(pred, ref.u.topRows(nt));
  for (Eigen::Index j = 0; j < nx; ++j) {
    report.ic_max_err = std::max(report.ic_max_err, std::abs(pred(0, j) - initial_condition(xs[static_cast<std::size_t>(j)])));
  }

  for (std::size_t k = 0; k < config.snapshot_times.size(); ++k) {
    const double t = config.snapshot_times[k];
    const std::vector<double> st(xs.size(), t);
    const batched::Derivatives d = batched::evaluate(params, config.network, st, xs);
    const auto row = static_cast<Eigen::Index>(ts.size() + k);
    std::vector<double> uref(xs.size());
    SnapshotReport snap{t, 0.0, 0.0, 0.0, config.out_dir / ("snapshot_t" + time_tag(t) + ".csv")};
    csv::Writer w(snap.file, {"x", "u_pred", "u_ref", "abs_err"});
    for (std::size_t j = 0; j < xs.size(); ++j) {
      uref[j] = ref.u(row, static_cast<Eigen::Index>(j));
      const double err = std::abs(d.u[j] - uref[j]);
      snap.max_abs_err = std::max(snap.max_abs_err, err);
      snap.max_abs_ux_pred = std::max(snap.max_abs_ux_pred, std::abs(d.u_x[j]));
      w.cell(xs[j]).cell(d.u[j]).cell(uref[j]).cell(err);
      w.end_row();
    }
    snap.max_abs_ux_ref = max_abs_slope(xs, uref);
    if (config.write_svg) {
      svg::write_line_plot(config.out_dir / ("snapshot_t" + time_tag(t) + ".svg"),
                           {{"prediction", xs, d.u, "#1f77b4"}, {"reference", xs, uref, "#d62728", true}},
                           {"u(t = " + time_tag(t) + ", x)", "x", "u", false});
    }
    report.snapshots.push_back(snap);
  }

  nlohmann::json j{{"rel_l2", report.rel_l2},
                   {"ic_max_err", report.ic_max_err},
                   {"oracle", oracle::to_string(ref.method)},
                   {"grid", {{"nt", config.grid_nt}, {"nx", config.grid_nx}}}};
  for (const SnapshotReport& s : report.snapshots) {
    j["snapshots"].push_back({{"t", s.t},
                              {"max_abs_err", s.max_abs_err},
                              {"max_abs_ux_pred", s.max_abs_ux_pred},
                              {"max_abs_ux_ref", s.max_abs_ux_ref},
                              {"file", s.file.filename().string()}});
  }
  std::filesystem::create_directories(config.out_dir);
  std::ofstream(config.out_dir / "error_report.json") << j.dump(2) << '\n';
  return report;
}

std::vector<CompareRow> compare(const RunConfig& config) {
  config.validate();
  const TrainingSet data = sample(config.sampling, config.n0, config.nb, config.nf, config.seed);
  const std::uint64_t fp = fingerprint(data);
  const Params initial = init_glorot(config.network, config.init_seed());
  const oracle::ReferenceGrid ref = reference_for(config);

  constexpr std::size_t kRuns = std::size(kAllOptimizers);
  std::vector<CompareRow> rows(kRuns);
  const auto run_one = [&](std::size_t i) {
    RunConfig sub = config;
    sub.optimizer = kAllOptimizers[i];
    sub.out_dir = config.out_dir / to_string(sub.optimizer);
    CompareRow row{sub.optimizer, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                   0.0, 0, fp, false, {}};
    try {
      const TrainResult tr = train_on(sub, data, initial);
      write_loss_csv(sub.out_dir / "loss.csv", tr.records);
      write_checkpoint(sub.out_dir / "checkpoint.txt",
                       {sub.network, tr.params, sub.seed, static_cast<std::int64_t>(tr.records.size())});
      if (sub.write_svg) write_loss_svg(sub.out_dir / "loss.svg", tr.records, to_string(sub.optimizer) + " loss");
      row.final_loss = tr.final_loss.total;
      row.seconds = tr.seconds;
      row.epochs = static_cast<std::int64_t>(tr.records.size());
      row.failed = tr.failed;
      row.diagnostic = tr.diagnostic;
      if (!tr.failed) row.rel_l2 = evaluate(tr.params, sub, ref).rel_l2;
    } catch (const std::exception& e) {
      row.failed = true;
      row.diagnostic = e.what();
    }
    rows[i] = row;
  };

  if (config.timing_mode || omp_get_max_threads() == 1) {
    for (std::size_t i = 0; i < kRuns; ++i) run_one(i);
  } else {
    // One run per thread; the kernels inside each run then stay serial.
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(std::min<std::size_t>(kRuns, omp_get_max_threads())))
    for (std::size_t i = 0; i < kRuns; ++i) run_one(i);
  }

  csv::Writer w(config.out_dir / "compare.csv", {"optimizer", "final_loss", "rel_l2", "seconds", "epochs"});
  nlohmann::json meta{{"seed", config.seed},
                      {"sampling", to_string(config.sampling)},
                      {"timing_mode", config.timing_mode},
                      {"schedule", config.schedule.to_string()}};
  for (const CompareRow& r : rows) {
    w.cell(to_string(r.optimizer)).cell(r.final_loss).cell(r.rel_l2).cell(r.seconds).cell(static_cast<long long>(r.epochs));
    w.end_row();
    std::ostringstream hex;
    hex << std::hex << r.data_fingerprint;
    meta["runs"].push_back({{"optimizer", to_string(r.optimizer)},
                            {"training_set_fingerprint", hex.str()},
                            {"failed", r.failed},
                            {"diagnostic", r.diagnostic}});
  }
  std::ofstream(config.out_dir / "compare_meta.json") << meta.dump(2) << '\n';

  if (config.write_svg) {
    std::vector<svg::Series> curves;
    const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};
    for (std::size_t i = 0; i < kRuns; ++i) {
      const auto path = config.out_dir / to_string(rows[i].optimizer) / "loss.csv";
      if (!std::filesystem::exists(path)) continue;
      const csv::Table t = csv::read(path);
      svg::Series s{to_string(rows[i].optimizer), {}, {}, colors[i]};
      for (std::size_t r = 0; r < t.rows.size(); ++r) {
        s.x.push_back(t.number(r, "epoch"));
        s.y.push_back(t.number(r, "total"));
      }
      curves.push_back(std::move(s));
    }
    svg::write_line_plot(config.out_dir / "compare_loss.svg", curves, {"total loss by optimizer", "epoch", "loss", true});
  }
  return rows;
}

void write_training_set(const std::filesystem::path& path, const TrainingSet& data) {
  csv::Writer w(path, {"set", "t", "x", "target"});
  const std::pair<const char*, const std::vector<SamplePoint>*> sets[] = {{"x0", &data.x0}, {"xb", &data.xb}, {"xr", &data.xr}};
  for (const auto& [name, pts] : sets) {
    for (const SamplePoint& p : *pts) {
      w.cell(std::string(name)).cell(p.t).cell(p.x).cell(p.target);
      w.end_row();
    }
  }
}

void write_reference_grid(const std::filesystem::path& path, const oracle::ReferenceGrid& grid) {
  csv::Writer w(path, {"t", "x", "u"});
  for (std::size_t i = 0; i < grid.t_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.x_values.size(); ++j) {
      w.cell(grid.t_values[i]).cell(grid.x_values[j]).cell(grid.u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      w.end_row();
    }
  }
}

}  // namespace pinnlab
