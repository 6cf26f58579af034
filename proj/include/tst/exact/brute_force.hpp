#pragma once

#include "tst/env/couplings.hpp"
#include "tst/exact/amplitudes.hpp"
#include "tst/model/energy.hpp"
#include "tst/model/lattice.hpp"

#include <complex>

namespace tst::exact {

inline constexpr int kBruteForceMaxVariables = 26;

struct BruteForceResult {
  AmplitudePair amps; ///< all 16 boundary patterns
  std::complex<double> mean_energy{};
  std::complex<double> mean_energy_sq{};

  /// xi^2 (<E^2> - <E>^2), the analytic heat capacity.
  double heat_capacity(double xi) const;
  ObservableReport report(double xi) const;
};

/// Exhaustive sum over every mass-field state. Gray-code walk with incremental
/// energies, split into independent chunks that run under OpenMP.
BruteForceResult brute_force(const model::LatticeGeometry& geom,
                             const model::MassFieldModel& model, double xi,
                             int max_variables = kBruteForceMaxVariables);

/// Serial reference: every state evaluated from scratch with massfield_energy
/// (plus the long-range part via the qubit magnetizations).
BruteForceResult brute_force_reference(const model::LatticeGeometry& geom,
                                       const model::MassFieldModel& model, double xi,
                                       int max_variables = kBruteForceMaxVariables);

/// Enumeration over the full bilayer Hamiltonian with arbitrary kernel range.
BruteForceResult brute_force_general(const model::LatticeGeometry& geom,
                                     const env::KernelTable& kernels, double xi,
                                     int max_variables = kBruteForceMaxVariables);

/// Dispatch on the coupling variant, at k.xi.
BruteForceResult brute_force(const model::LatticeGeometry& geom, const env::ModelCouplings& k,
                             int max_variables = kBruteForceMaxVariables);

} // namespace tst::exact
