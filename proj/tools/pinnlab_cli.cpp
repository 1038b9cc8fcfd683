// Command-line front end: train, evaluate, compare, sample-dump, oracle-dump.
//
// Every flag may also be given as a `key = value` line in the file passed
// with --config; flags on the command line win.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pinnlab/checkpoint.hpp"
#include "pinnlab/errors.hpp"
#include "pinnlab/harness.hpp"
#include "pinnlab/oracle.hpp"
#include "pinnlab/sampler.hpp"

namespace {

using pinnlab::RunConfig;
using pinnlab::UsageError;

std::vector<double> parse_times(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError("bad time '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty time list");
  return out;
}

void parse_grid(const std::string& text, int& nt, int& nx) {
  const auto sep = text.find_first_of("xX");
  if (sep == std::string::npos) throw UsageError("grid must look like NTxNX, got '" + text + "'");
  try {
    nt = std::stoi(text.substr(0, sep));
    nx = std::stoi(text.substr(sep + 1));
  } catch (const std::exception&) {
    throw UsageError("grid must look like NTxNX, got '" + text + "'");
  }
}

struct Flags {
  std::string optimizer = "diffgrad";
  std::string sampling = "uniform";
  std::string schedule;
  std::string snapshots = "0.25,0.5,0.75,1.0";
  std::string grid = "100x256";
  std::string oracle = "crank_nicolson";
  std::string checkpoint;
  std::string out = "out";
  RunConfig run;
  int cn_nx = 2048;
  int cn_nt = 4096;
  int quad_order = 128;
};

RunConfig resolve(Flags& f) {
  RunConfig c = f.run;
  c.optimizer = pinnlab::parse_optimizer_kind(f.optimizer);
  c.sampling = pinnlab::parse_sampling_method(f.sampling);
  if (!f.schedule.empty()) c.schedule = pinnlab::LrSchedule::parse(f.schedule);
  c.snapshot_times = parse_times(f.snapshots);
  parse_grid(f.grid, c.grid_nt, c.grid_nx);
  c.oracle_method = pinnlab::oracle::parse_method(f.oracle);
  c.oracle_nx = f.cn_nx;
  c.oracle_nt = f.cn_nt;
  c.oracle_quad_order = f.quad_order;
  c.out_dir = f.out;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PINN training laboratory for the 1-D viscous Burgers equation"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key = value file mirroring the long flags");

  Flags f;
  app.add_option("--optimizer", f.optimizer, "adam | adamax | rmsprop | diffgrad")->capture_default_str();
  app.add_option("--epochs", f.run.epochs, "Training epochs")->capture_default_str();
  app.add_option("--seed", f.run.seed, "Seed for sampling and initialisation")->capture_default_str();
  app.add_option("--n0", f.run.n0, "Initial-condition points")->capture_default_str();
  app.add_option("--nb", f.run.nb, "Boundary points")->capture_default_str();
  app.add_option("--nf", f.run.nf, "Collocation points")->capture_default_str();
  app.add_option("--sampling", f.sampling, "uniform | lhs")->capture_default_str();
  app.add_option("--schedule", f.schedule, "Learning-rate schedule e0:r0,e1:r1,... (default 0:0.01,1000:0.001,3000:0.0005)");
  app.add_option("--snapshots", f.snapshots, "Snapshot times t1,t2,...")->capture_default_str();
  app.add_option("--grid", f.grid, "Evaluation grid NTxNX")->capture_default_str();
  app.add_option("--out", f.out, "Output directory")->capture_default_str();
  app.add_flag("--timing-mode", f.run.timing_mode, "compare: run the four trainings one after another");
  app.add_option("--beta1", f.run.hyper.beta1)->capture_default_str();
  app.add_option("--beta2", f.run.hyper.beta2)->capture_default_str();
  app.add_option("--eps", f.run.hyper.eps)->capture_default_str();
  app.add_option("--rho", f.run.hyper.rho)->capture_default_str();
  app.add_option("--oracle", f.oracle, "Reference method: crank_nicolson | colehopf")->capture_default_str();
  app.add_option("--cn-nx", f.cn_nx, "Crank-Nicolson space steps")->capture_default_str();
  app.add_option("--cn-nt", f.cn_nt, "Crank-Nicolson time steps")->capture_default_str();
  app.add_option("--quad-order", f.quad_order, "Cole-Hopf Gauss-Hermite order")->capture_default_str();
  app.add_option("--checkpoint", f.checkpoint, "evaluate: checkpoint file (default OUT/checkpoint.txt)");
  bool no_svg = false;
  app.add_flag("--no-svg", no_svg, "Skip SVG plots");

  auto* train = app.add_subcommand("train", "Train one optimizer; writes loss.csv and checkpoint.txt");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint against the reference solution");
  auto* compare = app.add_subcommand("compare", "Train all four optimizers on shared data; writes compare.csv");
  auto* sample_dump = app.add_subcommand("sample-dump", "Write the training set to OUT/samples.csv");
  auto* oracle_dump = app.add_subcommand("oracle-dump", "Write the reference solution to OUT/reference.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = resolve(f);
    cfg.write_svg = !no_svg;

    if (*train) {
      const auto result = pinnlab::train(cfg);
      if (!result.records.empty()) {
        const auto& last = result.records.back();
        std::printf("epochs %zu  final loss %.6e (phi_r %.3e, phi_0 %.3e, phi_b %.3e)  last lr %g  %.2f s\n",
                    result.records.size(), result.final_loss.total, result.final_loss.phi_r, result.final_loss.phi_0,
                    result.final_loss.phi_b, last.lr, result.seconds);
      } else {
        std::printf("epochs 0  loss %.6e\n", result.final_loss.total);
      }
      std::printf("wrote %s\n", (cfg.out_dir / "loss.csv").c_str());
      if (result.failed) {
        std::fprintf(stderr, "training stopped: %s\n", result.diagnostic.c_str());
        return 2;
      }
    } else if (*evaluate) {
      const std::filesystem::path path = f.checkpoint.empty() ? cfg.out_dir / "checkpoint.txt" : std::filesystem::path(f.checkpoint);
      const pinnlab::Checkpoint ckpt = pinnlab::read_checkpoint(path);
      cfg.network = ckpt.config;
      const auto report = pinnlab::evaluate(ckpt.params, cfg);
      std::printf("relative L2 error %.6e  (initial-condition max error %.3e)\n", report.rel_l2, report.ic_max_err);
      for (const auto& s : report.snapshots) {
        std::printf("  t = %.4f  max|err| %.3e  max|u_x| pred %.2f ref %.2f\n", s.t, s.max_abs_err, s.max_abs_ux_pred,
                    s.max_abs_ux_ref);
      }
    } else if (*compare) {
      const auto rows = pinnlab::compare(cfg);
      std::printf("%-9s %14s %14s %10s %7s\n", "optimizer", "final_loss", "rel_l2", "seconds", "epochs");
      for (const auto& r : rows) {
        std::printf("%-9s %14.6e %14.6e %10.2f %7lld%s\n", pinnlab::to_string(r.optimizer).c_str(), r.final_loss,
                    r.rel_l2, r.seconds, static_cast<long long>(r.epochs), r.failed ? "  (failed)" : "");
      }
    } else if (*sample_dump) {
      const auto data = pinnlab::sample(cfg.sampling, cfg.n0, cfg.nb, cfg.nf, cfg.seed);
      pinnlab::write_training_set(cfg.out_dir / "samples.csv", data);
      std::printf("wrote %s (%zu + %zu + %zu points)\n", (cfg.out_dir / "samples.csv").c_str(), data.x0.size(),
                  data.xb.size(), data.xr.size());
    } else if (*oracle_dump) {
      const auto ts = pinnlab::eval_times(cfg);
      const auto xs = pinnlab::eval_positions(cfg);
      const auto grid = pinnlab::oracle::reference_on_grid(cfg.oracle_method, ts, xs, cfg.problem.nu, cfg.oracle_nx,
                                                           cfg.oracle_nt, cfg.oracle_quad_order);
      pinnlab::write_reference_grid(cfg.out_dir / "reference.csv", grid);
      std::printf("wrote %s (%zu x %zu, %s)\n", (cfg.out_dir / "reference.csv").c_str(), ts.size(), xs.size(),
                  pinnlab::oracle::to_string(cfg.oracle_method).c_str());
    }
  } catch (const pinnlab::UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
