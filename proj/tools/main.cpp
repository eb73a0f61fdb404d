// nlcflow: command-line driver for the nematic liquid crystal flow solver.
// Subcommands: simulate | mms | weak-strong | picard-study | energy-report.
// Exit codes: 0 success, 2 configuration error, 3 solver failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nlc/config.hpp"
#include "nlc/diagnostics.hpp"
#include "nlc/errors.hpp"
#include "nlc/io.hpp"
#include "nlc/mms.hpp"
#include "nlc/parallel.hpp"
#include "nlc/presets.hpp"
#include "nlc/stepper.hpp"
#include "nlc/weak_strong.hpp"

namespace {

using namespace nlc;

struct CliOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

RunConfig load_config(const CliOptions& opt) {
  RunConfig cfg = parse_config_file(opt.config_path);
  if (opt.out_dir) cfg.output_dir = *opt.out_dir;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.threads) cfg.threads = *opt.threads;
  set_threads(cfg.threads);
  return cfg;
}

double wall_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

int cmd_simulate(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.output_dir);
  const std::string hash = config_hash(cfg);
  const PhysicsParams phys = physics_from(cfg);
  const SlabConfig slab = slab_from(cfg);

  State s0 = make_initial_state(cfg);
  std::vector<EnergyRecord> records;
  records.push_back(EnergyRecord{s0.t, total_energy(s0, phys),
                                 dissipation(s0, phys), 0.0,
                                 unit_norm_drift(s0.d), data_size(s0)});
  long long step = 0;
  auto observer = [&](const State& prev, const State& next) {
    ++step;
    if (step % cfg.sample_stride != 0) return;
    EnergyRecord r;
    r.t = next.t;
    r.energy = total_energy(next, phys);
    r.dissipation = dissipation(next, phys);
    r.residual = energy_law_residual(prev, next, next.t - prev.t, phys);
    r.drift = unit_norm_drift(next.d);
    r.u0_proxy = data_size(next);
    records.push_back(r);
  };

  auto [s_end, reports] = advance_to(s0, cfg.t_end, slab, observer);

  const std::string out = cfg.output_dir;
  write_energy_csv(out + "/energy.csv", records, hash);
  write_picard_csv(out + "/picard.csv", reports, hash);
  write_snapshot(out + "/final_state", s_end, hash);
  write_vtk(out + "/final_state.vtk", s_end, hash);
  write_manifest(out + "/manifest.txt", hash, "simulate",
                 serialize_config(cfg), cfg.seed, thread_count(),
                 wall_since(t_start),
                 {"energy.csv", "picard.csv", "final_state.txt",
                  "final_state.bin", "final_state.vtk"});
  std::cout << "simulate: t=" << s_end.t
            << " E=" << total_energy(s_end, phys)
            << " drift=" << unit_norm_drift(s_end.d) << " slabs="
            << reports.size() << " -> " << out << "\n";
  return 0;
}

int cmd_mms(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.output_dir);
  const std::string hash = config_hash(cfg);
  const MmsResult res = run_mms(cfg);
  write_mms_csv(cfg.output_dir + "/mms.csv", res.rows, hash);
  write_manifest(cfg.output_dir + "/manifest.txt", hash, "mms",
                 serialize_config(cfg), cfg.seed, thread_count(),
                 wall_since(t_start), {"mms.csv"});
  std::printf("%10s %12s %14s %14s %8s %8s\n", "h", "dt", "err_u_L2",
              "err_d_L2", "order_u", "order_d");
  for (const auto& r : res.rows)
    std::printf("%10.5f %12.3e %14.6e %14.6e %8.3f %8.3f\n", r.h, r.dt,
                r.err_u, r.err_d, r.order_u, r.order_d);
  std::printf("fitted spatial order: u %.3f, d %.3f\n", res.fitted_order_u,
              res.fitted_order_d);
  return 0;
}

int cmd_weak_strong(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.output_dir);
  const std::string hash = config_hash(cfg);
  const ComparisonSummary summary = compare_runs(cfg);
  std::vector<std::string> artifacts;
  std::string report;
  for (const auto& level : summary.levels) {
    const std::string name =
        "relenergy_" + std::to_string(level.grid.dims[0]) + ".csv";
    write_rel_energy_csv(cfg.output_dir + "/" + name, level.records, hash);
    artifacts.push_back(name);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "coarse %4d: max R = %.6e, C_fit = %.4f\n",
                  level.grid.dims[0], level.max_rel_energy, level.c_fit);
    report += buf;
  }
  for (std::size_t l = 0; l < summary.convergence_factors.size(); ++l) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "convergence factor level %zu -> %zu: %.3f\n", l, l + 1,
                  summary.convergence_factors[l]);
    report += buf;
  }
  {
    std::ofstream out(cfg.output_dir + "/summary.txt");
    out << "# manifest=" << hash << "\n" << report;
  }
  artifacts.push_back("summary.txt");
  write_manifest(cfg.output_dir + "/manifest.txt", hash, "weak-strong",
                 serialize_config(cfg), cfg.seed, thread_count(),
                 wall_since(t_start), artifacts);
  std::cout << report;
  return 0;
}

int cmd_picard_study(const RunConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  std::filesystem::create_directories(cfg.output_dir);
  const std::string hash = config_hash(cfg);
  std::vector<StudyRow> rows;
  for (double slab_T : cfg.study_slabs) {
    for (double eps : cfg.study_eps) {
      RunConfig ic_cfg = cfg;
      if (eps > 0) {
        ic_cfg.preset = "taylor_green";
        ic_cfg.eps = eps;
        ic_cfg.director_perturb = eps;
      } else {
        ic_cfg.preset = "zero";
        ic_cfg.director_perturb = 0.0;
      }
      const State s0 = make_initial_state(ic_cfg);
      SlabConfig slab = slab_from(cfg);
      slab.slab_T = slab_T;
      slab.dt = slab_T / double(cfg.study_steps_per_slab);
      slab.allow_halving = false;
      const SlabResult res = picard_advance(s0, slab);
      StudyRow row;
      row.slab_T = slab_T;
      row.eps = eps;
      const auto& attempt = res.report.final_attempt();
      row.iters = int(attempt.u_bars.size());
      row.terminal_ratio = res.report.terminal_ratio();
      row.max_ratio = 0.0;
      for (double r : attempt.ratios) row.max_ratio = std::max(row.max_ratio, r);
      row.converged = res.report.converged;
      row.halvings = res.report.halvings;
      rows.push_back(row);
      std::printf(
          "slab_T=%.4g eps=%.3g iters=%d terminal_ratio=%.4g converged=%d\n",
          slab_T, eps, row.iters, row.terminal_ratio, int(row.converged));
    }
  }
  write_study_csv(cfg.output_dir + "/picard_study.csv", rows, hash);
  write_manifest(cfg.output_dir + "/manifest.txt", hash, "picard-study",
                 serialize_config(cfg), cfg.seed, thread_count(),
                 wall_since(t_start), {"picard_study.csv"});
  return 0;
}

int cmd_energy_report(const RunConfig& cfg) {
  const PhysicsParams phys = physics_from(cfg);
  const State s = read_snapshot(cfg.output_dir + "/final_state");
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "t = %.17g\nE = %.17g\nD = %.17g\ndrift = %.17g\n"
                "U0_proxy = %.17g\n",
                s.t, total_energy(s, phys), dissipation(s, phys),
                unit_norm_drift(s.d), data_size(s));
  std::ofstream out(cfg.output_dir + "/energy_report.txt");
  out << "# manifest=" << config_hash(cfg) << "\n" << buf;
  std::cout << buf;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlcflow: nematic liquid crystal flow solver and verification harness"};
  app.require_subcommand(1);

  CliOptions opt;
  int (*handler)(const RunConfig&) = nullptr;
  const struct {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&);
  } commands[] = {
      {"simulate", "advance the coupled system and emit diagnostics", cmd_simulate},
      {"mms", "manufactured-solutions convergence study", cmd_mms},
      {"weak-strong", "coarse/fine relative-energy comparison", cmd_weak_strong},
      {"picard-study", "contraction ratios over slab sizes and amplitudes",
       cmd_picard_study},
      {"energy-report", "diagnostics of a stored final state", cmd_energy_report},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config_path, "configuration file")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory override");
    sub->add_option("--seed", opt.seed, "seed override");
    sub->add_option("--threads", opt.threads, "worker thread count (0 = default)");
    sub->callback([&handler, fn = c.fn]() { handler = fn; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = load_config(opt);
    return handler(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: kind=" << ConfigError::kind_name(e.kind)
              << " field=" << e.field << " line=" << e.line << " message=\""
              << e.what() << "\"\n";
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "error: kind=NonConvergence iterations=" << e.iterations
              << " residual=" << e.residual << " message=\"" << e.what()
              << "\"\n";
    return 3;
  } catch (const MaxHalvingsExceeded& e) {
    std::cerr << "error: kind=MaxHalvingsExceeded halvings=" << e.halvings
              << " U0=" << e.data_size_proxy << " message=\"" << e.what()
              << "\"\n";
    return 3;
  } catch (const IncompatibleRhs& e) {
    std::cerr << "error: kind=IncompatibleRhs mean=" << e.mean
              << " message=\"" << e.what() << "\"\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: kind=Runtime message=\"" << e.what() << "\"\n";
    return 3;
  }
}
