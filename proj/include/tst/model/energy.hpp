#pragma once

#include "tst/env/couplings.hpp"
#include "tst/model/lattice.hpp"
#include "tst/model/spins.hpp"

#include <array>
#include <complex>
#include <vector>

namespace tst::model {

using ComplexEnergy = std::complex<double>;

// ---------------------------------------------------------------------------
// Energies on qubit spins.

/// Full bilayer Hamiltonian, including the N/2 F(Delta;0;0) constant. Kernel
/// values come from the table (entry 0 holds the on-site F values).
ComplexEnergy energy_general(const LatticeGeometry& geom, const BilayerSpinConfig& cfg,
                             const env::KernelTable& kernels);

/// -1/2 sum_r sigma_r tau_r, at unit coupling.
double energy_super_local(const LatticeGeometry& geom, const BilayerSpinConfig& cfg);

/// Local term plus (i eta / 4) sum over ordered nearest-neighbour pairs of
/// (tau_s - sigma_s)(tau_r + sigma_r).
ComplexEnergy energy_super_imag(const LatticeGeometry& geom, const BilayerSpinConfig& cfg,
                                const env::ModelCouplings& k);

/// All-to-all model in raw kernel units:
/// -Delta F/2 sum sigma tau + F-bar/4 (m_s - m_t)^2 + i Phi-bar/4 (m_s - m_t)(m_s + m_t).
ComplexEnergy energy_ohmic_longrange(const LatticeGeometry& geom, const BilayerSpinConfig& cfg,
                                     const MagnetizationCache& cache,
                                     const env::ModelCouplings& k);

// ---------------------------------------------------------------------------
// Energies on mass fields.

/// Mass-field energy with on-site, next-nearest-neighbour and three-plaquette
/// terms, written out row by row (bulk, top, bottom). J is the nearest
/// neighbour coupling in units of F(Delta;0;beta).
ComplexEnergy massfield_energy(const LatticeGeometry& geom, const MassFieldConfig& m,
                               std::complex<double> j);

/// Engine-facing description of a mass-field model at unit coupling.
struct MassFieldModel {
  std::complex<double> j{};
  bool long_range = false;
  double fbar_ratio = 0.0;   ///< F-bar / Delta F
  double phibar_ratio = 0.0; ///< Phi-bar / Delta F

  static MassFieldModel from_couplings(const env::ModelCouplings& k);
  bool is_real() const { return j.imag() == 0.0 && phibar_ratio == 0.0; }
};

/// One product of at most four mass-field variables.
struct Term {
  std::complex<double> coef;
  std::array<int, 4> vars{};
  int size = 0;
};

/// Mass-field energy compiled into a flat term list by substituting the
/// mass-field parametrisation into the on-site and nearest-neighbour qubit
/// interactions. Shares nothing with massfield_energy, so the two serve as
/// independent routes for each other.
///
/// For long-range models the energy is (up to a constant N/2) the all-to-all
/// model divided by Delta F.
class CompiledModel {
public:
  CompiledModel(const LatticeGeometry& geom, const MassFieldModel& model);

  const LatticeGeometry& geometry() const { return *geom_; }
  const MassFieldModel& model() const { return model_; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<int>& incident(int var) const { return incident_[var]; }
  double constant() const { return constant_; }

  /// Qubits whose sigma (var < P or alpha) or tau changes when var flips.
  const std::vector<int>& affected_qubits(int var) const { return affected_[var]; }
  /// True when var belongs to the sigma layer (mu or alpha).
  bool is_sigma_variable(int var) const;

  ComplexEnergy energy(const MassFieldConfig& m) const;
  ComplexEnergy local_energy(const MassFieldConfig& m) const;
  ComplexEnergy long_range_energy(long m_sigma, long m_tau) const;

  /// E(after flip) - E(before). The cache is recomputed when not supplied.
  ComplexEnergy delta_energy(const MassFieldConfig& m, int var,
                             const MagnetizationCache* cache = nullptr) const;
  /// Change of m_sigma - or m_tau, depending on the layer - under a flip.
  long magnetization_change(const MassFieldConfig& m, int var) const;

private:
  int qubit_spin(const MassFieldConfig& m, int q, bool sigma_layer) const;

  const LatticeGeometry* geom_;
  MassFieldModel model_;
  std::vector<Term> terms_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<int>> affected_;
  double constant_ = 0.0;
};

ComplexEnergy delta_energy(const CompiledModel& model, const MassFieldConfig& m, VariableId flip,
                           const MagnetizationCache* cache = nullptr);

} // namespace tst::model
