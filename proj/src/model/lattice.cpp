#include "tst/model/lattice.hpp"
#include "tst/error.hpp"

#include <map>
#include <string>
#include <utility>

namespace tst::model {

LatticeGeometry::LatticeGeometry(int nx, int ny) : nx_(nx), ny_(ny) {
  if (nx < 1 || ny < 1) {
    throw InvalidSize("lattice needs nx >= 1 and ny >= 1, got " + std::to_string(nx) + "x" +
                      std::to_string(ny));
  }
  plaquette_qubits_.resize(static_cast<std::size_t>(nx * ny));
  auto add = [&](QubitKind kind, int pa, int pb, int x2, int y2) {
    const int q = static_cast<int>(qubits_.size());
    qubits_.push_back({kind, pa, pb, x2, y2});
    plaquette_qubits_[pa].push_back(q);
    if (pb >= 0) plaquette_qubits_[pb].push_back(q);
    return q;
  };

  std::vector<int> horizontal_in_column0;
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const int p = plaquette(x, y);
      if (y == 0) bottom_qubits_.push_back(add(QubitKind::bottom_boundary, p, -1, 2 * x + 1, 0));
      if (x + 1 < nx) add(QubitKind::vertical_bulk, p, plaquette(x + 1, y), 2 * x + 2, 2 * y + 1);
      if (y + 1 < ny) {
        const int q = add(QubitKind::horizontal_bulk, p, plaquette(x, y + 1), 2 * x + 1, 2 * y + 2);
        if (x == 0) horizontal_in_column0.push_back(q);
      }
      if (y == ny - 1) top_qubits_.push_back(add(QubitKind::top_boundary, p, -1, 2 * x + 1, 2 * ny));
    }
  }

  logical_path_.push_back(top_qubits_.front());
  for (auto it = horizontal_in_column0.rbegin(); it != horizontal_in_column0.rend(); ++it) {
    logical_path_.push_back(*it);
  }
  logical_path_.push_back(bottom_qubits_.front());

  // Stars: qubits whose midpoint is half a lattice unit from an interior vertex.
  std::map<std::pair<int, int>, int> star_index;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      star_index[{2 * i, 2 * j}] = static_cast<int>(stars_.size());
      stars_.emplace_back();
    }
  }
  for (int q = 0; q < num_qubits(); ++q) {
    const Qubit& qb = qubits_[q];
    const bool vertical = qb.kind == QubitKind::vertical_bulk;
    const std::pair<int, int> ends[2] = {
        vertical ? std::pair{qb.x2, qb.y2 - 1} : std::pair{qb.x2 - 1, qb.y2},
        vertical ? std::pair{qb.x2, qb.y2 + 1} : std::pair{qb.x2 + 1, qb.y2}};
    for (const auto& e : ends) {
      auto it = star_index.find(e);
      if (it != star_index.end()) stars_[it->second].push_back(q);
    }
  }

  for (int q1 = 0; q1 < num_qubits(); ++q1) {
    for (int q2 = q1 + 1; q2 < num_qubits(); ++q2) {
      if (distance_key(q1, q2) == 2) nearest_pairs_.push_back({q1, q2});
    }
  }
}

int LatticeGeometry::distance_key(int q1, int q2) const {
  const int dx = qubits_[q1].x2 - qubits_[q2].x2;
  const int dy = qubits_[q1].y2 - qubits_[q2].y2;
  return dx * dx + dy * dy;
}

int LatticeGeometry::max_distance_key() const {
  int best = 0;
  for (int q1 = 0; q1 < num_qubits(); ++q1) {
    for (int q2 = q1 + 1; q2 < num_qubits(); ++q2) best = std::max(best, distance_key(q1, q2));
  }
  return best;
}

LatticeGeometry build_lattice(int nx, int ny) { return LatticeGeometry(nx, ny); }

} // namespace tst::model
