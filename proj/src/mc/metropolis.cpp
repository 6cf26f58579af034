#include "tst/mc/metropolis.hpp"
#include "tst/error.hpp"
#include "tst/mc/trace.hpp"

#include <cmath>
#include <string>

namespace tst::mc {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, int nx, int ny, int xi_index) {
  const std::uint64_t key = (static_cast<std::uint64_t>(nx) << 42) ^
                            (static_cast<std::uint64_t>(ny) << 21) ^
                            static_cast<std::uint64_t>(xi_index);
  return splitmix64(seed ^ splitmix64(key));
}

void McSchedule::validate() const {
  if (n_bins < 10) throw InvalidParam("n_bins must be at least 10");
  if (measure_stride < 1) throw InvalidParam("measure_stride must be positive");
  if (burn() < 0 || burn() >= n_sweeps) throw InvalidParam("burn-in must be shorter than the run");
  if ((n_sweeps - burn()) / measure_stride < n_bins) {
    throw InvalidParam("fewer measurements than bins");
  }
}

std::string to_string(EstimateMethod m) {
  switch (m) {
  case EstimateMethod::mc: return "mc";
  case EstimateMethod::binder: return "binder";
  case EstimateMethod::brute: return "brute";
  }
  return "?";
}

MetropolisChain::MetropolisChain(const model::CompiledModel& model, double xi,
                                 std::uint64_t seed,
                                 const std::optional<model::MassFieldConfig>& start)
    : model_(&model), xi_(xi), rng_(seed) {
  const auto& mm = model.model();
  if (!mm.is_real()) {
    throw ComplexCouplingRejected("Monte Carlo needs real couplings; use the Binder engine");
  }
  if (!(xi >= 0.0)) throw InvalidParam("xi must be non-negative");

  const auto& geom = model.geometry();
  const int nvar = geom.num_mass_variables();
  const auto m0 = start ? *start : model::MassFieldConfig::uniform(geom);
  if (m0.num_variables() != nvar) throw InvalidSize("start state does not match the lattice");
  spin_.resize(nvar);
  for (int v = 0; v < nvar; ++v) spin_[v] = static_cast<std::int8_t>(m0.get(v));

  for (const auto& t : model.terms()) {
    coef_.push_back(t.coef.real());
    for (int i = 0; i < 4; ++i) term_vars_.push_back(i < t.size ? t.vars[i] : -1);
  }
  incident_.resize(nvar);
  for (int v = 0; v < nvar; ++v) incident_[v] = model.incident(v);

  long_range_ = mm.long_range;
  fbar_ = mm.fbar_ratio;
  sigma_var_.resize(nvar);
  partners_.resize(nvar);
  const int p = geom.num_plaquettes();
  for (int v = 0; v < nvar; ++v) {
    const bool sig = model.is_sigma_variable(v);
    sigma_var_[v] = sig;
    const int layer = sig ? 0 : p;
    for (int q : model.affected_qubits(v)) {
      const auto& qb = geom.qubits()[q];
      int partner;
      if (v >= 2 * p) {
        partner = layer + qb.plaquette_a;
      } else if (qb.kind == model::QubitKind::top_boundary) {
        partner = sig ? 2 * p : 2 * p + 2;
      } else if (qb.kind == model::QubitKind::bottom_boundary) {
        partner = sig ? 2 * p + 1 : 2 * p + 3;
      } else {
        const int own = v - layer;
        partner = layer + (qb.plaquette_a == own ? qb.plaquette_b : qb.plaquette_a);
      }
      partners_[v].push_back(partner);
    }
  }
  cache_ = model::MagnetizationCache::from(model::mass_to_spin(geom, m0));
  energy_ = recompute_energy();
}

double MetropolisChain::delta(int v) const {
  double de = 0.0;
  for (int t : incident_[v]) {
    const int* vars = &term_vars_[static_cast<std::size_t>(t) * 4];
    int prod = spin_[vars[0]];
    for (int i = 1; i < 4 && vars[i] >= 0; ++i) prod *= spin_[vars[i]];
    de -= 2.0 * coef_[t] * prod;
  }
  if (long_range_) {
    long sum = 0;
    for (int partner : partners_[v]) sum += spin_[partner];
    const long change = -2L * spin_[v] * sum;
    const long diff = cache_.m_sigma - cache_.m_tau;
    const long after = sigma_var_[v] ? diff + change : diff - change;
    de += 0.25 * fbar_ * static_cast<double>(after * after - diff * diff);
  }
  return de;
}

long MetropolisChain::sweep() {
  long accepted = 0;
  const int nvar = num_variables();
  for (int i = 0; i < nvar; ++i) {
    // multiply-shift draw of the variable; bias below nvar / 2^64
    const int v = static_cast<int>((static_cast<unsigned __int128>(rng_()) * nvar) >> 64);
    const double de = delta(v);
    if (de <= 0.0 || uniform01(rng_) < std::exp(-xi_ * de)) {
      long sum = 0;
      for (int partner : partners_[v]) sum += spin_[partner];
      (sigma_var_[v] ? cache_.m_sigma : cache_.m_tau) += -2L * spin_[v] * sum;
      spin_[v] = static_cast<std::int8_t>(-spin_[v]);
      energy_ += de;
      ++accepted;
    }
  }
  return accepted;
}

int MetropolisChain::observable() const {
  const std::size_t b = spin_.size() - 4;
  return spin_[b] * spin_[b + 1] * spin_[b + 2] * spin_[b + 3];
}

model::MassFieldConfig MetropolisChain::config() const {
  auto m = model::MassFieldConfig::uniform(model_->geometry());
  for (int v = 0; v < num_variables(); ++v) {
    if (spin_[v] < 0) m.flip(v);
  }
  return m;
}

void MetropolisChain::validate_cache() const {
  model::validate_cache(model::mass_to_spin(model_->geometry(), config()), cache_);
}

double MetropolisChain::recompute_energy() const { return model_->energy(config()).real(); }

long metropolis_sweep(const model::CompiledModel& model, model::MassFieldConfig& state,
                      double xi, Rng& rng) {
  MetropolisChain chain(model, xi, rng(), state);
  const long accepted = chain.sweep();
  state = chain.config();
  return accepted;
}

FidelityEstimate estimate_fidelity(const model::LatticeGeometry& geom,
                                   const model::MassFieldModel& model, double xi,
                                   const McSchedule& schedule, TraceWriter* trace,
                                   const std::optional<model::MassFieldConfig>& start,
                                   model::MassFieldConfig* final_state) {
  schedule.validate();
  const model::CompiledModel compiled(geom, model);
  MetropolisChain chain(compiled, xi, schedule.seed, start);

  const long burn = schedule.burn();
  const long measurements = (schedule.n_sweeps - burn) / schedule.measure_stride;
  const long per_bin = measurements / schedule.n_bins;
  const long used = per_bin * schedule.n_bins;
  std::vector<double> bins(static_cast<std::size_t>(schedule.n_bins), 0.0);

  long accepted = 0;
  long proposals = 0;
  long taken = 0;
  for (long s = 0; s < schedule.n_sweeps; ++s) {
    accepted += chain.sweep();
    proposals += chain.num_variables();
    if (s < burn || (s - burn + 1) % schedule.measure_stride != 0) continue;
    const int o = chain.observable();
    if (trace != nullptr) trace->record(static_cast<std::uint64_t>(s), o, chain.energy());
    // the first (measurements - used) samples are dropped so bins are equal
    const long k = taken++ - (measurements - used);
    if (k >= 0) bins[static_cast<std::size_t>(k / per_bin)] += o;
  }

  double mean = 0.0;
  for (auto& b : bins) {
    b /= static_cast<double>(per_bin);
    mean += b;
  }
  mean /= schedule.n_bins;
  double var = 0.0;
  for (double b : bins) var += (b - mean) * (b - mean);
  var /= schedule.n_bins - 1;
  const double sd = std::sqrt(var);

  FidelityEstimate est;
  est.method = EstimateMethod::mc;
  est.measurements = used;
  est.b_corr_mean = mean;
  est.b_corr_stderr = sd / std::sqrt(static_cast<double>(schedule.n_bins));
  est.fidelity = 1.0 / (1.0 + mean);
  est.stderr_ = est.b_corr_stderr / ((1.0 + mean) * (1.0 + mean));
  est.acceptance_rate = proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0;
  for (double b : bins) {
    if (sd > 0.0 && std::abs(b - mean) > 6.0 * sd) est.non_ergodic = true;
  }
  if (final_state != nullptr) *final_state = chain.config();
  return est;
}

std::vector<SweepPoint> run_sweep(const std::vector<std::pair<int, int>>& sizes,
                                  const model::MassFieldModel& model,
                                  const std::vector<double>& xi_grid, const McSchedule& schedule,
                                  bool warm_start) {
  for (std::size_t i = 1; i < xi_grid.size(); ++i) {
    if (!(xi_grid[i] > xi_grid[i - 1])) throw InvalidParam("xi grid must be strictly ascending");
  }
  const int nxi = static_cast<int>(xi_grid.size());
  std::vector<SweepPoint> out(sizes.size() * xi_grid.size());
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    for (int xi = 0; xi < nxi; ++xi) {
      auto& pt = out[si * xi_grid.size() + xi];
      pt.nx = sizes[si].first;
      pt.ny = sizes[si].second;
      pt.xi_index = xi;
      pt.xi = xi_grid[xi];
      pt.seed = stream_seed(schedule.seed, pt.nx, pt.ny, xi);
    }
  }

  auto run_point = [&](SweepPoint& pt, const model::LatticeGeometry& geom,
                       const std::optional<model::MassFieldConfig>& start,
                       model::MassFieldConfig* final_state) {
    McSchedule sch = schedule;
    sch.seed = pt.seed;
    pt.estimate = estimate_fidelity(geom, model, pt.xi, sch, nullptr, start, final_state);
  };

  if (warm_start) {
    const int n = static_cast<int>(sizes.size());
#pragma omp parallel for schedule(dynamic)
    for (int si = 0; si < n; ++si) {
      const model::LatticeGeometry geom(sizes[si].first, sizes[si].second);
      std::optional<model::MassFieldConfig> state;
      for (int xi = 0; xi < nxi; ++xi) {
        model::MassFieldConfig final_state;
        run_point(out[si * nxi + xi], geom, state, &final_state);
        state = final_state;
      }
    }
  } else {
    const int n = static_cast<int>(out.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      const model::LatticeGeometry geom(out[i].nx, out[i].ny);
      run_point(out[i], geom, std::nullopt, nullptr);
    }
  }
  return out;
}

} // namespace tst::mc
