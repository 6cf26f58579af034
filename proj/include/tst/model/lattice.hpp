#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace tst::model {

/// Where a qubit sits relative to the plaquette grid.
enum class QubitKind {
  vertical_bulk,   ///< shared by horizontally adjacent plaquettes
  horizontal_bulk, ///< shared by vertically adjacent plaquettes
  top_boundary,    ///< dangling edge above a top-row plaquette
  bottom_boundary, ///< dangling edge below a bottom-row plaquette
};

struct Qubit {
  QubitKind kind;
  int plaquette_a; ///< always valid
  int plaquette_b; ///< -1 for boundary qubits
  /// Edge midpoint in units of the lattice spacing, doubled so it is integral.
  int x2;
  int y2;
};

/// Planar surface-code patch of nx * ny plaquettes with rough top and bottom
/// boundaries.
///
/// Plaquette (x, y) covers [x, x+1] x [y, y+1], 0-based with row 0 at the
/// bottom. Qubits are the edges between adjacent plaquettes plus one dangling
/// edge above every top-row plaquette and below every bottom-row plaquette;
/// the outer left and right edges carry no qubit. Stars are the vertices
/// (i, j) with 1 <= i <= nx-1, 0 <= j <= ny.
class LatticeGeometry {
public:
  LatticeGeometry(int nx, int ny);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int num_plaquettes() const { return nx_ * ny_; }
  int num_qubits() const { return static_cast<int>(qubits_.size()); }
  /// Mass-field variables mu, nu plus the four boundary fields.
  int num_mass_variables() const { return 2 * num_plaquettes() + 4; }

  int plaquette(int x, int y) const { return y * nx_ + x; }
  int plaquette_x(int p) const { return p % nx_; }
  int plaquette_y(int p) const { return p / nx_; }

  const std::vector<Qubit>& qubits() const { return qubits_; }
  const std::vector<std::vector<int>>& stars() const { return stars_; }
  /// Qubits whose spin changes when the plaquette's mass field flips.
  const std::vector<int>& plaquette_qubits(int p) const { return plaquette_qubits_[p]; }
  const std::vector<int>& top_qubits() const { return top_qubits_; }
  const std::vector<int>& bottom_qubits() const { return bottom_qubits_; }
  /// Dual path from top to bottom along column 0; carries the logical X.
  const std::vector<int>& logical_path() const { return logical_path_; }
  /// Unordered qubit pairs at distance 1/sqrt(2) (perpendicular edges meeting
  /// at a star).
  const std::vector<std::array<int, 2>>& nearest_pairs() const { return nearest_pairs_; }

  /// 4 r^2 between two qubit midpoints, in lattice units (always integral).
  int distance_key(int q1, int q2) const;
  int max_distance_key() const;

private:
  int nx_;
  int ny_;
  std::vector<Qubit> qubits_;
  std::vector<std::vector<int>> stars_;
  std::vector<std::vector<int>> plaquette_qubits_;
  std::vector<int> top_qubits_;
  std::vector<int> bottom_qubits_;
  std::vector<int> logical_path_;
  std::vector<std::array<int, 2>> nearest_pairs_;
};

LatticeGeometry build_lattice(int nx, int ny);

} // namespace tst::model
