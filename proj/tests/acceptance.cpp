// Acceptance run: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; otherwise only the numbers given (e.g. `acceptance 2 6`).
// `-v` adds per-item detail lines.

#include "tst/analysis/threshold.hpp"
#include "tst/cli/config.hpp"
#include "tst/cli/run.hpp"
#include "tst/error.hpp"
#include "tst/exact/binder.hpp"
#include "tst/exact/brute_force.hpp"
#include "tst/mc/metropolis.hpp"
#include "tst/model/energy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace tst;
using cplx = std::complex<double>;

namespace {

bool verbose = false;

struct Outcome {
  bool pass = false;
  std::string summary;
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

void detail(const std::string& line) {
  if (verbose) std::cout << "    " << line << "\n";
}

// Config text on top of a preset, through the same path as the command line.
cli::RunConfig preset_config(const std::string& preset, const std::string& overrides) {
  cli::RunConfig cfg = cli::parse_config(cli::read_file(cli::preset_path(preset)));
  cfg = cli::parse_config(overrides, cfg);
  cli::validate_config(cfg);
  return cfg;
}

analysis::ThresholdResult threshold_of(const cli::RunConfig& cfg) {
  const auto rows = cli::compute_curves(cfg);
  analysis::CrossingOptions opts;
  opts.bootstrap = cfg.bootstrap;
  opts.seed = cfg.schedule.seed;
  const auto res = analysis::find_crossing(cli::to_curves(rows), opts);
  for (const auto& pc : res.pair_crossings) {
    detail(fmt("%dx%d / %dx%d cross at %.4f +- %.4f%s", pc.size_a.first, pc.size_a.second,
               pc.size_b.first, pc.size_b.second, pc.gamma, pc.gamma_err,
               pc.ambiguous ? " (ambiguous)" : ""));
  }
  return res;
}

std::string crossings_text(const analysis::ThresholdResult& res) {
  std::string out;
  for (const auto& pc : res.pair_crossings) {
    out += fmt("%s(%d,%d)%.3f", out.empty() ? "" : " ", pc.size_a.first, pc.size_b.first, pc.gamma);
  }
  return out;
}

// ---------------------------------------------------------------------------

Outcome super_ohmic_threshold() {
  const auto cfg = preset_config("superohmic-fig2",
                                 "sizes = 2, 3, 4, 5\ngamma_min = 0.60\ngamma_max = 1.10\n"
                                 "gamma_step = 0.005\nengine = binder\n");
  const auto res = threshold_of(cfg);
  const bool ok = res.gamma_c >= 0.83 && res.gamma_c <= 0.93;
  return {ok, fmt("gamma_c = %.4f, window [0.83, 0.93]; pairs ", res.gamma_c) + crossings_text(res)};
}

Outcome mc_matches_enumeration() {
  const double xis[] = {0.3, analysis::kIsingCriticalXi, 1.5};
  mc::McSchedule sch;
  sch.n_sweeps = 1'000'000;
  const model::MassFieldModel mm; // super_local
  int compared = 0, failed = 0;
  double worst = 0.0;
  std::string worst_at;
  for (int nx = 1; 2 * nx + 4 <= 22; ++nx) {
    for (int ny = 1; 2 * nx * ny + 4 <= 22; ++ny) {
      const model::LatticeGeometry geom(nx, ny);
      for (int k = 0; k < 3; ++k) {
        const double exact = exact::brute_force(geom, mm, xis[k]).amps.fidelity();
        mc::McSchedule s = sch;
        s.seed = mc::stream_seed(1, nx, ny, k);
        const auto est = mc::estimate_fidelity(geom, mm, xis[k], s);
        const double z = std::abs(est.fidelity - exact) / est.stderr_;
        ++compared;
        if (!(z <= 3.0)) ++failed;
        if (!(z <= worst)) {
          worst = z;
          worst_at = fmt("%dx%d xi=%.4f", nx, ny, xis[k]);
        }
        detail(fmt("%dx%d xi=%.4f exact %.6f mc %.6f +- %.6f z=%.2f", nx, ny, xis[k], exact,
                   est.fidelity, est.stderr_, z));
      }
    }
  }
  return {failed == 0, fmt("%d/%d points within 3 standard errors, largest |z| = %.2f at ",
                           compared - failed, compared, worst) + worst_at};
}

Outcome binder_matches_enumeration() {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int draws = 0;
  for (auto [nx, ny] : {std::pair{2, 2}, std::pair{3, 3}}) {
    const model::LatticeGeometry geom(nx, ny);
    for (int d = 0; d < 20; ++d) {
      const double xi = 0.05 + 1.95 * u(rng);
      const cplx j{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0};
      model::MassFieldModel mm;
      mm.j = j;
      const auto bf = exact::brute_force(geom, mm, xi).amps;
      double dev = 0.0;
      for (const auto& rep : exact::kRepresentatives) {
        const auto c = exact::binder_partition(geom, j, xi, rep.pattern);
        const cplx a = c.mantissa * std::exp(c.log_scale);
        const cplx b = bf.c_table[rep.pattern.index()] * std::exp(bf.log_scale);
        dev = std::max(dev, std::abs(a - b) / std::abs(b));
      }
      worst = std::max(worst, dev);
      ++draws;
      detail(fmt("%dx%d xi=%.4f J=(%.4f,%.4f) max relative deviation %.2e", nx, ny, xi,
                 j.real(), j.imag(), dev));
    }
  }
  return {worst <= 1e-10,
          fmt("%d draws x 6 patterns, largest relative deviation %.2e (bound 1e-10)", draws, worst)};
}

Outcome imaginary_coupling_shift() {
  const std::string grid = "sizes = 2, 3, 4\ngamma_min = 0.60\ngamma_max = 1.10\n"
                           "gamma_step = 0.005\nengine = binder\n";
  const auto with_eta = threshold_of(preset_config("superohmic-eta-fig3", grid + "eta = 0.1\n"));
  const auto without = threshold_of(preset_config("superohmic-eta-fig3", grid + "eta = 0\n"));
  const bool ok = with_eta.gamma_c < without.gamma_c;
  return {ok, fmt("gamma_c(eta=0.1) = %.4f, gamma_c(eta=0) = %.4f, shift %+.4f", with_eta.gamma_c,
                  without.gamma_c, with_eta.gamma_c - without.gamma_c)};
}

Outcome ohmic_threshold() {
  const auto cfg = preset_config("ohmic-fig4", "sweeps = 1000000\n");
  const auto res = threshold_of(cfg);
  const bool ok = std::abs(res.gamma_c - analysis::kOhmicCriticalGamma) <= 0.05;
  return {ok, fmt("gamma_c = %.4f +- %.4f, target 0.475 +- 0.05; pairs ", res.gamma_c,
                  res.gamma_c_err) + crossings_text(res)};
}

// ---------------------------------------------------------------------------
// Kernels: quadrature against closed forms on 3x3 grids deep inside each
// row's regime.

struct KernelPoint {
  env::EnvironmentSpec env;
  double r = 0.0;
};

struct KernelRow {
  std::string name;
  bool phi = false;
  bool use_beta = true;
  std::function<KernelPoint(int, int)> point;
};

env::EnvironmentSpec bath(double s, double delta, double beta, double lambda_uv) {
  env::EnvironmentSpec e;
  e.s = s;
  e.delta = delta;
  e.beta = beta;
  e.lambda_uv = lambda_uv;
  return e;
}

std::vector<KernelRow> kernel_rows(double s) {
  const double deltas[] = {1.0, 2.0, 5.0};
  const double beta_ratio[] = {0.01, 0.003, 0.001};
  const double inside[] = {0.2, 0.4, 0.6};
  const double outside[] = {2.0, 3.0, 5.0};
  const double cutoff[] = {200.0, 500.0, 1000.0};
  // thermal rows: the cutoff time sits 1000x below beta
  auto thermal = [s](double d, double br) { return bath(s, d, br * d, 1000.0 / (br * d)); };
  return {
      {"F(0;0)", false, false,
       [=](int a, int b) { return KernelPoint{bath(s, deltas[a], 0.0, 100.0 * (b + 1) * (b + 1)), 0.0}; }},
      {"F(0;beta)", false, true,
       [=](int a, int b) { return KernelPoint{thermal(deltas[a], beta_ratio[b]), 0.0}; }},
      {"F(r;beta) r<vD", false, true,
       [=](int a, int b) { return KernelPoint{thermal(1.0, beta_ratio[b]), inside[a]}; }},
      {"F(r;beta) r>vD", false, true,
       [=](int a, int b) { return KernelPoint{thermal(1.0, beta_ratio[b]), outside[a]}; }},
      {"Phi(r) r<vD", true, false,
       [=](int a, int b) { return KernelPoint{bath(s, 1.0, 0.0, cutoff[b]), inside[a]}; }},
      {"Phi(r) r>vD", true, false,
       [=](int a, int b) { return KernelPoint{bath(s, 1.0, 0.0, cutoff[b]), outside[a]}; }},
  };
}

Outcome kernel_validation() {
  std::vector<std::string> failed_rows;
  int rows = 0;
  bool theta_zero = true;
  double worst_pass = 0.0;
  for (double s : {0.5, 0.0, -0.5}) {
    for (const auto& row : kernel_rows(s)) {
      ++rows;
      double worst = 0.0;
      bool row_ok = true;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const auto [e, r] = row.point(a, b);
          const double closed =
              row.phi ? env::phi_closed_form(e, r).value : env::f_closed_form(e, r, row.use_beta).value;
          const double quad =
              row.phi ? env::phi_quadrature(e, r).value : env::f_quadrature(e, r, row.use_beta).value;
          // theta-gated rows outside the cone: the closed form is exactly zero
          // and the quadrature must vanish on the scale of the prefactor
          double dev;
          if (row.phi && r > e.v * e.delta && s != 0.0) {
            if (closed != 0.0) theta_zero = false;
            const double scale = 1.0 / (std::numbers::pi * std::pow(e.delta, 2.0 * s));
            dev = std::abs(quad) / scale;
          } else {
            dev = std::abs(quad - closed) / std::abs(closed);
          }
          worst = std::max(worst, dev);
          if (!(dev <= 0.05)) row_ok = false;
          detail(fmt("s=%+.1f %-15s Delta=%g beta=%g Lambda=%g r=%g closed %.6e quad %.6e dev %.2e",
                     s, row.name.c_str(), e.delta, e.beta, e.lambda_uv, r, closed, quad, dev));
        }
      }
      if (row_ok) {
        worst_pass = std::max(worst_pass, worst);
      } else {
        failed_rows.push_back(fmt("s=%+.1f %s (dev %.2g)", s, row.name.c_str(), worst));
      }
    }
  }
  std::string summary = fmt("%d/%d rows within 5%% (largest passing deviation %.2e); theta rows %s",
                            rows - static_cast<int>(failed_rows.size()), rows, worst_pass,
                            theta_zero ? "exactly 0 outside the cone" : "NOT zero outside the cone");
  if (!failed_rows.empty()) {
    summary += "; failing:";
    for (const auto& f : failed_rows) summary += " " + f;
  }
  return {failed_rows.empty() && theta_zero, summary};
}

// ---------------------------------------------------------------------------

Outcome asymptotes() {
  std::vector<std::string> problems;
  model::MassFieldModel local;
  model::MassFieldModel complex_j;
  complex_j.j = {0.3, -0.4};
  model::MassFieldModel long_range;
  long_range.long_range = true;
  long_range.fbar_ratio = env::kOhmicFbarRatio;

  for (auto [nx, ny] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 3}}) {
    const model::LatticeGeometry geom(nx, ny);
    for (const auto* mm : {&local, &complex_j, &long_range}) {
      const double f = exact::brute_force(geom, *mm, 0.0).amps.fidelity();
      if (f != 1.0) problems.push_back(fmt("brute %dx%d F(0) = %.17g", nx, ny, f));
    }
  }
  for (int n : {2, 4, 6}) {
    const model::LatticeGeometry geom(n, n);
    for (cplx j : {cplx{}, cplx{0.3, -0.4}}) {
      const double f = exact::binder_amplitudes(geom, j, 0.0).fidelity();
      if (f != 1.0) problems.push_back(fmt("binder %dx%d F(0) = %.17g", n, n, f));
    }
  }
  // A chain estimates F(0) = 1 up to its own sampling error.
  double worst_z = 0.0;
  for (int n : {2, 4, 6}) {
    const model::LatticeGeometry geom(n, n);
    for (const auto* mm : {&local, &long_range}) {
      mc::McSchedule sch;
      sch.n_sweeps = 100'000;
      sch.seed = mc::stream_seed(7, n, n, 0);
      const auto est = mc::estimate_fidelity(geom, *mm, 0.0, sch);
      const double z = std::abs(est.b_corr_mean) / est.b_corr_stderr;
      worst_z = std::max(worst_z, z);
      if (!(z <= 3.0) || est.acceptance_rate != 1.0) {
        problems.push_back(fmt("mc %dx%d F(0) = %.6f +- %.6f", n, n, est.fidelity, est.stderr_));
      }
      detail(fmt("mc %dx%d xi=0 F = %.6f +- %.6f acceptance %.3f", n, n, est.fidelity, est.stderr_,
                 est.acceptance_rate));
    }
  }

  const model::LatticeGeometry big(6, 6);
  mc::McSchedule sch;
  sch.n_sweeps = 200'000;
  sch.seed = mc::stream_seed(7, 6, 6, 1);
  const auto hot = mc::estimate_fidelity(big, local, 2.0, sch);
  const double exact_hot = exact::binder_amplitudes(big, {}, 2.0).fidelity();
  if (!(hot.fidelity < 0.55)) problems.push_back(fmt("mc 6x6 F(2) = %.4f", hot.fidelity));
  if (!(exact_hot < 0.55)) problems.push_back(fmt("binder 6x6 F(2) = %.4f", exact_hot));

  env::EnvironmentSpec e;
  e.s = 0.5;
  e.beta = 0.1;
  e.lambda_uv = 1e4;
  double prev = analysis::single_qubit_fidelity(0.0, e);
  bool baseline_ok = prev == 1.0;
  for (int i = 1; i <= 300; ++i) {
    const double f = analysis::single_qubit_fidelity(0.01 * i, e);
    baseline_ok = baseline_ok && f < prev && f > 0.5 && f <= 1.0;
    prev = f;
  }
  if (!baseline_ok) problems.push_back("single-qubit baseline not strictly decreasing in (1/2, 1]");

  std::string summary =
      fmt("F(0) = 1 exactly for brute and Binder, MC |b|/stderr <= %.2f; 6x6 F(2): mc %.4f, "
          "Binder %.4f; single-qubit baseline %s",
          worst_z, hot.fidelity, exact_hot, baseline_ok ? "strictly decreasing in (1/2, 1]" : "bad");
  for (const auto& p : problems) summary += "; " + p;
  return {problems.empty(), summary};
}

Outcome symmetries() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_tr = 0.0, worst_conj = 0.0, worst_real = 0.0;
  int configs = 0;
  for (int nx = 1; nx <= 4; ++nx) {
    for (int ny = 1; ny <= 4; ++ny) {
      const model::LatticeGeometry geom(nx, ny);
      const cplx j{u(rng), u(rng)};
      model::MassFieldModel lr;
      lr.long_range = true;
      lr.fbar_ratio = 0.5 + 0.5 * u(rng);
      lr.phibar_ratio = u(rng);
      const model::CompiledModel compiled(geom, lr);
      for (int c = 0; c < 1000; ++c, ++configs) {
        auto m = model::MassFieldConfig::uniform(geom);
        for (int v = 0; v < m.num_variables(); ++v) {
          if (rng() & 1U) m.flip(v);
        }
        auto neg = m;
        for (int v = 0; v < m.num_variables(); ++v) neg.flip(v);
        auto swapped = m;
        std::swap(swapped.mu, swapped.nu);
        std::swap(swapped.alpha_t, swapped.beta_t);
        std::swap(swapped.alpha_b, swapped.beta_b);

        const cplx e = model::massfield_energy(geom, m, j);
        const double scale = 1.0 + std::abs(e);
        worst_tr = std::max(worst_tr, std::abs(model::massfield_energy(geom, neg, j) - e) / scale);
        worst_conj = std::max(
            worst_conj, std::abs(std::conj(model::massfield_energy(geom, swapped, j)) - e) / scale);

        const cplx el = compiled.energy(m);
        const double lscale = 1.0 + std::abs(el);
        worst_tr = std::max(worst_tr, std::abs(compiled.energy(neg) - el) / lscale);
        worst_conj = std::max(worst_conj, std::abs(std::conj(compiled.energy(swapped)) - el) / lscale);
      }

      // Z and B assembled from all 16 boundary patterns.
      for (int d = 0; d < 5; ++d) {
        const cplx jj{u(rng), u(rng)};
        const double xi = 1.0 + u(rng);
        const auto amps = exact::binder_amplitudes(geom, jj, xi, {}, true);
        worst_real = std::max(worst_real, std::abs(amps.z.imag()) / std::abs(amps.z));
        worst_real = std::max(worst_real, std::abs(amps.b_corr.imag()));
        if (2 * nx * ny + 4 <= 22) {
          model::MassFieldModel mm;
          mm.j = jj;
          const auto bf = exact::brute_force(geom, mm, xi).amps;
          worst_real = std::max(worst_real, std::abs(bf.z.imag()) / std::abs(bf.z));
          worst_real = std::max(worst_real, std::abs(bf.b_corr.imag()));
          lr.fbar_ratio = 0.72;
          const auto bl = exact::brute_force(geom, lr, xi).amps;
          worst_real = std::max(worst_real, std::abs(bl.z.imag()) / std::abs(bl.z));
          worst_real = std::max(worst_real, std::abs(bl.b_corr.imag()));
        }
      }
      detail(fmt("%dx%d: time reversal %.1e, conjugation %.1e, imaginary parts %.1e", nx, ny,
                 worst_tr, worst_conj, worst_real));
    }
  }
  const bool ok = worst_tr <= 1e-10 && worst_conj <= 1e-10 && worst_real <= 1e-10;
  return {ok, fmt("%d configurations on sizes up to 4x4: time reversal %.1e, conjugation %.1e, "
                  "Im Z/|Z| and Im B up to %.1e (bound 1e-10)",
                  configs, worst_tr, worst_conj, worst_real)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("tst_acceptance_" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  const auto cfg = (dir / "run.cfg").string();
  std::ofstream(cfg) << "variant = ohmic_longrange\ns = 0\nbeta = 0.1\nlambda_uv = 100\n"
                        "sizes = 2, 4, 6\ngamma = 0.4, 0.8, 1.2\nengine = auto\n"
                        "sweeps = 20000\nwarm_start = false\n";
  std::vector<std::string> outputs;
  for (const char* seed : {"5", "5", "6"}) {
    const auto out = dir / ("out" + std::to_string(outputs.size()));
    std::vector<std::string> args = {"tst", "sweep", "--config", cfg, "--seed", seed, "--out", out.string()};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    if (cli::main_cli(static_cast<int>(argv.size()), argv.data()) != cli::kExitOk) {
      std::filesystem::remove_all(dir);
      return {false, "sweep command failed"};
    }
    outputs.push_back(slurp(out / "curves.csv"));
  }
  std::filesystem::remove_all(dir);
  const bool same = outputs[0] == outputs[1] && !outputs[0].empty();
  const bool seed_matters = outputs[0] != outputs[2];
  return {same && seed_matters,
          fmt("two runs with seed 5: %s (%zu bytes); seed 6 differs: %s",
              same ? "byte-identical curves.csv" : "curves.csv DIFFERS", outputs[0].size(),
              seed_matters ? "yes" : "no")};
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "super-Ohmic threshold constant", super_ohmic_threshold},
    {2, "Monte Carlo versus enumeration", mc_matches_enumeration},
    {3, "Binder versus enumeration", binder_matches_enumeration},
    {4, "imaginary-coupling shift", imaginary_coupling_shift},
    {5, "Ohmic threshold", ohmic_threshold},
    {6, "kernel closed forms", kernel_validation},
    {7, "asymptotes", asymptotes},
    {8, "symmetries", symmetries},
    {9, "determinism", determinism},
};


// Collected lines of earlier `--record` runs, in criterion order; fails when a
// criterion failed or never ran.
int report(const std::filesystem::path& dir) {
  int failures = 0;
  for (const auto& c : kCriteria) {
    const auto line = slurp(dir / ("criterion_" + std::to_string(c.id) + ".txt"));
    if (line.empty()) {
      std::cout << "FAIL criterion " << c.id << " (" << c.title << "): not run\n";
      ++failures;
      continue;
    }
    std::cout << line;
    failures += line.rfind("PASS", 0) == 0 ? 0 : 1;
  }
  std::cout << static_cast<int>(std::size(kCriteria)) - failures << " of "
            << std::size(kCriteria) << " criteria pass\n";
  return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  std::filesystem::path record_dir;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "-v") {
      verbose = true;
    } else if (arg == "--record" && i + 1 < argc) {
      record_dir = argv[++i];
    } else if (arg == "--report" && i + 1 < argc) {
      return report(argv[++i]);
    } else {
      selected.insert(std::stoi(arg));
    }
  }
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream line;
    line << (out.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title
         << "): " << out.summary << fmt(" [%.1f s]", secs) << "\n";
    std::cout << line.str() << std::flush;
    if (!record_dir.empty()) {
      std::filesystem::create_directories(record_dir);
      std::ofstream(record_dir / ("criterion_" + std::to_string(c.id) + ".txt")) << line.str();
    }
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
