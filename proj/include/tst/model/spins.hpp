#pragma once

#include "tst/model/lattice.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace tst::model {

/// Qubit spins of the two layers (ket and bra) in the x basis.
struct BilayerSpinConfig {
  std::vector<std::int8_t> sigma;
  std::vector<std::int8_t> tau;
};

/// Unconstrained plaquette spins plus the four rough-boundary fields.
struct MassFieldConfig {
  std::vector<std::int8_t> mu;
  std::vector<std::int8_t> nu;
  int alpha_t = 1;
  int alpha_b = 1;
  int beta_t = 1;
  int beta_b = 1;

  static MassFieldConfig uniform(const LatticeGeometry& geom, int value = 1);

  /// Flat variable layout: mu[0..P), nu[P..2P), alpha_t, alpha_b, beta_t, beta_b.
  int get(int index) const;
  void flip(int index);
  int num_variables() const { return 2 * static_cast<int>(mu.size()) + 4; }

  /// Product alpha_t alpha_b beta_t beta_b, the logical-flip correlator.
  int boundary_correlator() const { return alpha_t * alpha_b * beta_t * beta_b; }

  bool operator==(const MassFieldConfig&) const = default;
};

enum class FieldKind { mu, nu, alpha_t, alpha_b, beta_t, beta_b };

struct VariableId {
  FieldKind kind;
  int plaquette = -1;
};

/// Flat index of a variable; throws UnknownVariable when out of range.
int variable_index(const LatticeGeometry& geom, VariableId id);

struct MagnetizationCache {
  long m_sigma = 0;
  long m_tau = 0;

  static MagnetizationCache from(const BilayerSpinConfig& cfg);
  bool operator==(const MagnetizationCache&) const = default;
};

/// Throws CacheMismatch unless the cache equals a full recount of cfg.
void validate_cache(const BilayerSpinConfig& cfg, const MagnetizationCache& cache);

BilayerSpinConfig mass_to_spin(const LatticeGeometry& geom, const MassFieldConfig& m);

/// Every star has product +1 in both layers.
bool stars_positive(const LatticeGeometry& geom, const BilayerSpinConfig& cfg);

/// Diagonal element of the logical X along the canonical dual path for one layer.
int logical_value(const LatticeGeometry& geom, const std::vector<std::int8_t>& layer);

/// Plain-text snapshot: `mu x y s`, `nu x y s` (1-based) and `bnd name s`.
void write_config(std::ostream& out, const LatticeGeometry& geom, const MassFieldConfig& m);
MassFieldConfig read_config(std::istream& in, const LatticeGeometry& geom);

} // namespace tst::model
