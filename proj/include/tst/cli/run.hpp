#pragma once

#include "tst/analysis/threshold.hpp"
#include "tst/cli/config.hpp"

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace tst::cli {

inline constexpr const char* kVersion = "tst 1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEngine = 3;
inline constexpr int kExitNoCrossing = 4;

/// Nearest-neighbour coupling and long-range ratios at unit xi.
struct ResolvedModel {
  std::complex<double> j{};
  bool long_range = false;
  double fbar_ratio = 0.0;
  double phibar_ratio = 0.0;
  bool complex_coupling() const { return j.imag() != 0.0 || phibar_ratio != 0.0; }
};
ResolvedModel resolve_model(const RunConfig& cfg);

/// Engine used for one lattice size.
Engine resolve_engine(const RunConfig& cfg, int nx, int ny);

struct CurveRow {
  int nx = 0;
  int ny = 0;
  double gamma = 0.0;
  double fidelity = 0.0;
  double stderr_ = 0.0;
  Engine engine = Engine::mc;
  std::uint64_t seed = 0;
};

/// One row per (size, gamma), sorted by size then gamma.
std::vector<CurveRow> compute_curves(const RunConfig& cfg);

void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows);
void write_kernels_csv(std::ostream& out, const RunConfig& cfg);
std::vector<analysis::FidelityCurve> to_curves(const std::vector<CurveRow>& rows);
/// threshold.json content with lambda_c back-converted through the unit kernel.
nlohmann::json threshold_report(const RunConfig& cfg, const analysis::ThresholdResult& result);

/// Resolved plan without running anything.
void print_plan(std::ostream& out, const RunConfig& cfg, const std::string& command);

/// Binder versus enumeration on every lattice with at most max_vars variables.
/// Returns the number of failed comparisons.
int run_validation(std::ostream& out, std::uint64_t seed, int max_vars = 22, int draws = 20);

/// Full command-line entry point.
int main_cli(int argc, char** argv);

} // namespace tst::cli
