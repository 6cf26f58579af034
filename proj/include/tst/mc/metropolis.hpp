#pragma once

#include "tst/model/energy.hpp"
#include "tst/model/lattice.hpp"
#include "tst/model/spins.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace tst::mc {

class TraceWriter;

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of the stream for one (size, xi-index) point: splitmix64(seed ^ hash).
std::uint64_t stream_seed(std::uint64_t seed, int nx, int ny, int xi_index);

struct McSchedule {
  long n_sweeps = 1'000'000;
  long n_burn = -1; ///< negative: 20% of n_sweeps
  int n_bins = 32;
  std::uint64_t seed = 1;
  int measure_stride = 1;

  long burn() const { return n_burn >= 0 ? n_burn : n_sweeps / 5; }
  /// Throws InvalidParam unless n_bins >= 10 and enough sweeps remain.
  void validate() const;
};

enum class EstimateMethod { mc, binder, brute };
std::string to_string(EstimateMethod m);

struct FidelityEstimate {
  double fidelity = 1.0;
  double stderr_ = 0.0;
  double b_corr_mean = 0.0;
  double b_corr_stderr = 0.0;
  double acceptance_rate = 0.0;
  EstimateMethod method = EstimateMethod::mc;
  long measurements = 0;
  /// Some bin mean sits more than 6 bin standard deviations from the mean.
  bool non_ergodic = false;
};

/// Single-spin-flip Metropolis chain over the mass-field variables with the
/// energy and (for long-range models) the layer magnetizations tracked
/// incrementally.
class MetropolisChain {
public:
  /// Throws ComplexCouplingRejected for models with imaginary couplings and
  /// InvalidParam for xi < 0.
  MetropolisChain(const model::CompiledModel& model, double xi, std::uint64_t seed,
                  const std::optional<model::MassFieldConfig>& start = std::nullopt);

  /// As many proposals as there are variables, each on a uniformly drawn
  /// variable; returns the number accepted. A fixed visiting order would flip
  /// every variable once per sweep at xi = 0 and freeze the observable.
  long sweep();

  int observable() const;
  double energy() const { return energy_; }
  const model::MagnetizationCache& cache() const { return cache_; }
  model::MassFieldConfig config() const;
  double xi() const { return xi_; }
  int num_variables() const { return static_cast<int>(spin_.size()); }

  /// Recount the magnetizations; throws CacheMismatch on disagreement.
  void validate_cache() const;
  /// Energy recomputed from scratch through the compiled model.
  double recompute_energy() const;

private:
  double delta(int v) const;

  const model::CompiledModel* model_;
  double xi_;
  Rng rng_;
  std::vector<std::int8_t> spin_;
  // Flat copies of the real term list.
  std::vector<double> coef_;
  std::vector<int> term_vars_;  // four slots per term, -1 unused
  std::vector<std::vector<int>> incident_;
  // Each affected qubit's spin is spin[v] * spin[partner].
  std::vector<std::vector<int>> partners_;
  std::vector<bool> sigma_var_;
  double fbar_ = 0.0;
  bool long_range_ = false;
  model::MagnetizationCache cache_;
  double energy_ = 0.0;
};

/// Free-function form of one sweep on an explicit state.
long metropolis_sweep(const model::CompiledModel& model, model::MassFieldConfig& state,
                      double xi, Rng& rng);

/// Burn in, then measure the boundary correlator every measure_stride sweeps.
/// Errors come from n_bins equal bins. The final configuration is written to
/// final_state when given, and a start state may be supplied for warm starts.
FidelityEstimate estimate_fidelity(const model::LatticeGeometry& geom,
                                   const model::MassFieldModel& model, double xi,
                                   const McSchedule& schedule, TraceWriter* trace = nullptr,
                                   const std::optional<model::MassFieldConfig>& start = std::nullopt,
                                   model::MassFieldConfig* final_state = nullptr);

struct SweepPoint {
  int nx = 0;
  int ny = 0;
  int xi_index = 0;
  double xi = 0.0;
  std::uint64_t seed = 0;
  FidelityEstimate estimate;
};

/// One estimate per (size, xi). Each point runs with stream_seed(schedule.seed,
/// nx, ny, xi_index). Sizes run in parallel; with warm_start each xi point of a
/// size starts from the previous point's final state.
std::vector<SweepPoint> run_sweep(const std::vector<std::pair<int, int>>& sizes,
                                  const model::MassFieldModel& model,
                                  const std::vector<double>& xi_grid, const McSchedule& schedule,
                                  bool warm_start = false);

} // namespace tst::mc
