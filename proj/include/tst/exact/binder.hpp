#pragma once

#include "tst/env/couplings.hpp"
#include "tst/exact/amplitudes.hpp"
#include "tst/model/lattice.hpp"

#include <complex>

namespace tst::exact {

struct BinderOptions {
  /// Largest nx accepted. The frontier table holds 4^(nx+1) complex entries,
  /// so 12 is about 1 GB.
  int max_width = 12;
  /// Evaluate boundary patterns concurrently.
  bool parallel = true;
};

/// c(alpha, beta) for one boundary pattern, by row-by-row transfer over the
/// mass-field variables of one row. Each row is added one plaquette at a
/// time; the frontier keeps the overwritten upper-row site as an extra carry.
ScaledComplex binder_partition(const model::LatticeGeometry& geom, std::complex<double> j,
                               double xi, BoundaryPattern boundary,
                               const BinderOptions& opts = {});

/// Same recursion written plainly with two buffers; kept as a cross-check.
ScaledComplex binder_partition_reference(const model::LatticeGeometry& geom,
                                         std::complex<double> j, double xi,
                                         BoundaryPattern boundary,
                                         const BinderOptions& opts = {});

/// Z and B from the six representative patterns, or all 16 when requested.
AmplitudePair binder_amplitudes(const model::LatticeGeometry& geom, std::complex<double> j,
                                double xi, const BinderOptions& opts = {},
                                bool all_patterns = false);

/// Fidelity plus energy and heat capacity from Richardson-extrapolated finite
/// differences of ln Z in xi (relative step 1e-4).
ObservableReport binder_fidelity(const model::LatticeGeometry& geom, std::complex<double> j,
                                 double xi, const BinderOptions& opts = {});

/// Nearest-neighbour coupling of a super-Ohmic variant; throws Unsupported for
/// long-range or general models.
std::complex<double> binder_coupling(const env::ModelCouplings& k);

} // namespace tst::exact
