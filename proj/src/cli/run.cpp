#include "tst/cli/run.hpp"
#include "tst/error.hpp"
#include "tst/exact/binder.hpp"
#include "tst/exact/brute_force.hpp"
#include "tst/mc/metropolis.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tst::cli {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

model::MassFieldModel mass_field_model(const ResolvedModel& rm) {
  model::MassFieldModel mm;
  mm.j = rm.j;
  mm.long_range = rm.long_range;
  mm.fbar_ratio = rm.fbar_ratio;
  mm.phibar_ratio = rm.phibar_ratio;
  return mm;
}

int num_variables(int nx, int ny) { return 2 * nx * ny + 4; }

} // namespace

ResolvedModel resolve_model(const RunConfig& cfg) {
  ResolvedModel rm;
  switch (cfg.variant) {
  case env::ModelVariant::super_local: break;
  case env::ModelVariant::super_imag: {
    const double eta =
        cfg.eta ? *cfg.eta : env::reduce_to_model(cfg.env, 1.0, cfg.variant).eta;
    rm.j = {0.0, eta};
    break;
  }
  case env::ModelVariant::ohmic_longrange:
    rm.long_range = true;
    rm.fbar_ratio = cfg.fbar_ratio;
    rm.phibar_ratio = cfg.phibar_ratio;
    break;
  case env::ModelVariant::general_kernel: {
    rm.j = env::reduce_to_model(cfg.env, 1.0, cfg.variant).j_complex;
    break;
  }
  }
  return rm;
}

Engine resolve_engine(const RunConfig& cfg, int nx, int ny) {
  if (cfg.engine != Engine::auto_) return cfg.engine;
  if (num_variables(nx, ny) <= 22) return Engine::brute;
  if (cfg.variant == env::ModelVariant::general_kernel) {
    throw Unsupported("general_kernel beyond 22 variables has no engine");
  }
  const ResolvedModel rm = resolve_model(cfg);
  if (rm.complex_coupling()) {
    if (!rm.long_range && nx <= cfg.binder_width) return Engine::binder;
    throw Unsupported("complex couplings at " + std::to_string(nx) + "x" + std::to_string(ny) +
                      " fit neither enumeration nor the Binder width budget");
  }
  return Engine::mc;
}

std::vector<CurveRow> compute_curves(const RunConfig& cfg) {
  const ResolvedModel rm = resolve_model(cfg);
  const model::MassFieldModel mm = mass_field_model(rm);
  const std::size_t ng = cfg.gamma.size();

  std::vector<CurveRow> rows;
  std::vector<Engine> engines;
  for (const auto& [nx, ny] : cfg.sizes) {
    const Engine e = resolve_engine(cfg, nx, ny);
    engines.push_back(e);
    for (std::size_t g = 0; g < ng; ++g) {
      CurveRow r;
      r.nx = nx;
      r.ny = ny;
      r.gamma = cfg.gamma[g];
      r.engine = e;
      r.seed = e == Engine::mc ? mc::stream_seed(cfg.schedule.seed, nx, ny, static_cast<int>(g))
                               : cfg.schedule.seed;
      rows.push_back(r);
    }
  }

  // A task is one row, or a whole size when Monte Carlo chains are warm-started.
  struct Task {
    std::size_t first, count;
  };
  std::vector<Task> tasks;
  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    if (engines[si] == Engine::mc && cfg.warm_start) {
      tasks.push_back({si * ng, ng});
    } else {
      for (std::size_t g = 0; g < ng; ++g) tasks.push_back({si * ng + g, 1});
    }
  }

  exact::BinderOptions bopts;
  bopts.max_width = cfg.binder_width;
  bopts.parallel = false;

  std::vector<std::string> failures(tasks.size());
  const int nt = static_cast<int>(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < nt; ++t) {
    try {
      const auto& task = tasks[static_cast<std::size_t>(t)];
      const model::LatticeGeometry geom(rows[task.first].nx, rows[task.first].ny);
      std::optional<model::MassFieldConfig> state;
      for (std::size_t i = task.first; i < task.first + task.count; ++i) {
        CurveRow& r = rows[i];
        switch (r.engine) {
        case Engine::brute: {
          if (cfg.variant == env::ModelVariant::general_kernel) {
            env::ReduceOptions ro;
            ro.max_distance_key = geom.max_distance_key();
            const auto k = env::reduce_to_model(cfg.env, 1.0, cfg.variant, ro);
            r.fidelity = exact::brute_force_general(geom, *k.kernel_table, r.gamma).amps.fidelity();
          } else {
            r.fidelity = exact::brute_force(geom, mm, r.gamma).amps.fidelity();
          }
          break;
        }
        case Engine::binder:
          r.fidelity = exact::binder_amplitudes(geom, rm.j, r.gamma, bopts).fidelity();
          break;
        case Engine::mc: {
          mc::McSchedule sch = cfg.schedule;
          sch.seed = r.seed;
          model::MassFieldConfig final_state;
          const auto est = mc::estimate_fidelity(geom, mm, r.gamma, sch, nullptr, state,
                                                 cfg.warm_start ? &final_state : nullptr);
          if (cfg.warm_start) state = final_state;
          r.fidelity = est.fidelity;
          r.stderr_ = est.stderr_;
          break;
        }
        case Engine::auto_: break;
        }
      }
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(t)] = e.what();
    }
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw Error(f);
  }
  return rows;
}

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "size_nx,size_ny,gamma,fidelity,stderr,engine,seed\n";
  for (const auto& r : rows) {
    out << r.nx << ',' << r.ny << ',' << g17(r.gamma) << ',' << g17(r.fidelity) << ','
        << g17(r.stderr_) << ',' << to_string(r.engine) << ',' << r.seed << '\n';
  }
}

void write_kernels_csv(std::ostream& out, const RunConfig& cfg) {
  std::vector<double> distances = cfg.kernel_distances;
  if (distances.empty()) {
    for (double f : {0.0, 0.5, 1.0 / std::sqrt(2.0), 1.0, 2.0, 5.0, 10.0}) distances.push_back(f * cfg.env.a);
  }
  auto attempt = [](auto&& fn) -> std::string {
    try {
      return g17(fn().value);
    } catch (const Error&) {
      return "nan";
    }
  };
  out << "distance,F_quad,F_closed,Phi_quad,Phi_closed,regime\n";
  for (double r : distances) {
    const auto tag = env::classify_regime(cfg.env, r);
    const std::string regime =
        std::string(tag.thermal == env::ThermalFlag::thermal ? "thermal" : "vacuum") + "/" +
        (tag.causal == env::CausalFlag::timelike ? "timelike" : "spacelike");
    out << g17(r) << ',' << attempt([&] { return env::f_quadrature(cfg.env, r, true); }) << ','
        << attempt([&] { return env::f_closed_form(cfg.env, r, true); }) << ','
        << attempt([&] { return env::phi_quadrature(cfg.env, r); }) << ','
        << attempt([&] { return env::phi_closed_form(cfg.env, r); }) << ',' << regime << '\n';
  }
}

std::vector<analysis::FidelityCurve> to_curves(const std::vector<CurveRow>& rows) {
  std::vector<analysis::FidelityCurve> curves;
  for (const auto& r : rows) {
    if (curves.empty() || curves.back().nx != r.nx || curves.back().ny != r.ny) {
      curves.push_back({r.nx, r.ny, {}});
    }
    // MC noise can overshoot 1 slightly; the crossing only needs the ordering.
    curves.back().points.push_back({r.gamma, std::min(r.fidelity, 1.0), r.stderr_});
  }
  return curves;
}

nlohmann::json threshold_report(const RunConfig& cfg, const analysis::ThresholdResult& result) {
  analysis::ThresholdResult res = result;
  nlohmann::json unit = nullptr;
  std::string note = res.method_note;
  try {
    const auto k = env::xi_unit_kernel(cfg.env, cfg.variant, cfg.fbar_ratio);
    res.lambda_c = analysis::lambda_from_gamma(res.gamma_c, k.value);
    unit = {{"value", k.value},
            {"method", k.method == env::KernelMethod::closed_form ? "closed_form" : "quadrature"}};
    note += "; lambda_c = sqrt(gamma_c / unit kernel) via " + unit["method"].get<std::string>();
  } catch (const Error& e) {
    note += std::string("; lambda_c unavailable: ") + e.what();
  }
  res.method_note = note;
  nlohmann::json j = analysis::to_json(res);
  if (unit.is_null()) j["lambda_c"] = nullptr;
  j["env"] = analysis::to_json(cfg.env);
  j["variant"] = env::to_string(cfg.variant);
  j["unit_kernel"] = unit;
  j["version"] = kVersion;
  return j;
}

void print_plan(std::ostream& out, const RunConfig& cfg, const std::string& command) {
  out << "# " << kVersion << " plan for '" << command << "'\n" << cfg.echo();
  if (command == "kernels") {
    out << "kernels.csv -> " << (std::filesystem::path(cfg.out_dir) / "kernels.csv").string() << "\n";
    return;
  }
  for (const auto& [nx, ny] : cfg.sizes) {
    out << nx << "x" << ny << ": ";
    try {
      const Engine e = resolve_engine(cfg, nx, ny);
      out << "engine=" << to_string(e) << " variables=" << num_variables(nx, ny);
      switch (e) {
      case Engine::brute: out << " states=2^" << num_variables(nx, ny); break;
      case Engine::binder: out << " table=4^" << nx + 1 << " x " << ny * nx << " steps x 6 patterns"; break;
      case Engine::mc:
        out << " proposals=" << static_cast<double>(cfg.schedule.n_sweeps) * num_variables(nx, ny);
        break;
      case Engine::auto_: break;
      }
    } catch (const Error& err) {
      out << "no engine: " << err.what();
    }
    out << " points=" << cfg.gamma.size() << "\n";
  }
}

int run_validation(std::ostream& out, std::uint64_t seed, int max_vars, int draws) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int failures = 0;
  for (int nx = 1; num_variables(nx, 1) <= max_vars; ++nx) {
    for (int ny = 1; num_variables(nx, ny) <= max_vars; ++ny) {
      const model::LatticeGeometry geom(nx, ny);
      double worst = 0.0;
      for (int d = 0; d < draws; ++d) {
        const double xi = 0.2 + 1.6 * u(rng);
        const std::complex<double> j{u(rng) - 0.5, u(rng) - 0.5};
        model::MassFieldModel mm;
        mm.j = j;
        const auto bf = exact::brute_force(geom, mm, xi).amps;
        for (const auto& rep : exact::kRepresentatives) {
          const int idx = rep.pattern.index();
          const auto c = exact::binder_partition(geom, j, xi, rep.pattern);
          const auto a = c.mantissa * std::exp(c.log_scale);
          const auto b = bf.c_table[idx] * std::exp(bf.log_scale);
          worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
      }
      const bool ok = worst <= 1e-10;
      failures += ok ? 0 : 1;
      out << (ok ? "PASS " : "FAIL ") << nx << "x" << ny << " worst relative deviation "
          << worst << "\n";
    }
  }
  return failures;
}

int main_cli(int argc, char** argv) {
  CLI::App app{"Surface-code fidelity under a thermal bosonic bath"};
  app.require_subcommand(1);
  std::string config_path, preset, out_dir, engine;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool dry_run = false;
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--preset", preset, "named preset (applied before --config)");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--engine", engine, "mc, binder, brute or auto");
  app.add_option("--threads", threads, "worker threads (TST_THREADS otherwise)");
  app.add_flag("--dry-run", dry_run, "print the resolved plan and exit");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"kernels", "tabulate F and Phi (quadrature and closed form)"},
      {"fidelity", "compute fidelity curves and print them"},
      {"sweep", "compute fidelity curves into curves.csv"},
      {"threshold", "curves plus crossing analysis into threshold.json"},
      {"validate", "Binder versus enumeration on every small lattice"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  if (threads <= 0) {
    if (const char* env_threads = std::getenv("TST_THREADS")) threads = std::atoi(env_threads);
  }
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  RunConfig cfg;
  try {
    if (!preset.empty()) cfg = parse_config(read_file(preset_path(preset)), cfg);
    if (!config_path.empty()) cfg = parse_config(read_file(config_path), cfg);
    if (seed) cfg.schedule.seed = *seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!engine.empty()) cfg.engine = parse_engine(engine);
    validate_config(cfg);
    if ((command == "fidelity" || command == "sweep" || command == "threshold") &&
        (cfg.sizes.empty() || cfg.gamma.empty())) {
      throw ValidationError("sizes: the '" + command + "' command needs sizes and a gamma grid");
    }
    if (command == "threshold" && cfg.sizes.size() < 2) {
      throw ValidationError("sizes: a threshold needs at least two sizes");
    }
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (dry_run) {
    print_plan(std::cout, cfg, command);
    return kExitOk;
  }

  const std::filesystem::path dir(cfg.out_dir);
  try {
    if (command == "validate") {
      const int failures = run_validation(std::cout, cfg.schedule.seed);
      std::cout << (failures == 0 ? "all lattices agree" : "mismatches found") << "\n";
      return failures == 0 ? kExitOk : kExitEngine;
    }
    std::filesystem::create_directories(dir);
    if (command == "kernels") {
      std::ofstream f(dir / "kernels.csv");
      write_kernels_csv(f, cfg);
      write_kernels_csv(std::cout, cfg);
      return kExitOk;
    }

    const auto rows = compute_curves(cfg);
    {
      std::ofstream f(dir / "curves.csv");
      write_curves_csv(f, rows);
    }
    if (command == "fidelity") write_curves_csv(std::cout, rows);
    if (command == "threshold") {
      analysis::CrossingOptions opts;
      opts.bootstrap = cfg.bootstrap;
      opts.seed = cfg.schedule.seed;
      analysis::ThresholdResult res;
      try {
        res = analysis::find_crossing(to_curves(rows), opts);
      } catch (const NoCrossing& e) {
        std::cerr << "no crossing: " << e.what() << "\n";
        return kExitNoCrossing;
      }
      const auto report = threshold_report(cfg, res);
      std::ofstream(dir / "threshold.json") << report.dump(2) << "\n";
      std::cout << "gamma_c = " << res.gamma_c << " +- " << res.gamma_c_err << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "engine error: " << e.what() << "\n";
    return kExitEngine;
  }
  return kExitOk;
}

} // namespace tst::cli
