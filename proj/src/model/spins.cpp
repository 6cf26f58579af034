#include "tst/model/spins.hpp"
#include "tst/error.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace tst::model {

MassFieldConfig MassFieldConfig::uniform(const LatticeGeometry& geom, int value) {
  MassFieldConfig m;
  const auto p = static_cast<std::size_t>(geom.num_plaquettes());
  m.mu.assign(p, static_cast<std::int8_t>(value));
  m.nu.assign(p, static_cast<std::int8_t>(value));
  m.alpha_t = m.alpha_b = m.beta_t = m.beta_b = value;
  return m;
}

int MassFieldConfig::get(int index) const {
  const int p = static_cast<int>(mu.size());
  if (index < p) return mu[index];
  if (index < 2 * p) return nu[index - p];
  switch (index - 2 * p) {
  case 0: return alpha_t;
  case 1: return alpha_b;
  case 2: return beta_t;
  default: return beta_b;
  }
}

void MassFieldConfig::flip(int index) {
  const int p = static_cast<int>(mu.size());
  if (index < p) {
    mu[index] = static_cast<std::int8_t>(-mu[index]);
  } else if (index < 2 * p) {
    nu[index - p] = static_cast<std::int8_t>(-nu[index - p]);
  } else {
    switch (index - 2 * p) {
    case 0: alpha_t = -alpha_t; break;
    case 1: alpha_b = -alpha_b; break;
    case 2: beta_t = -beta_t; break;
    default: beta_b = -beta_b; break;
    }
  }
}

int variable_index(const LatticeGeometry& geom, VariableId id) {
  const int p = geom.num_plaquettes();
  const bool needs_plaquette = id.kind == FieldKind::mu || id.kind == FieldKind::nu;
  if (needs_plaquette && (id.plaquette < 0 || id.plaquette >= p)) {
    throw UnknownVariable("plaquette index " + std::to_string(id.plaquette) + " out of range");
  }
  switch (id.kind) {
  case FieldKind::mu: return id.plaquette;
  case FieldKind::nu: return p + id.plaquette;
  case FieldKind::alpha_t: return 2 * p;
  case FieldKind::alpha_b: return 2 * p + 1;
  case FieldKind::beta_t: return 2 * p + 2;
  case FieldKind::beta_b: return 2 * p + 3;
  }
  throw UnknownVariable("unknown field kind");
}

MagnetizationCache MagnetizationCache::from(const BilayerSpinConfig& cfg) {
  MagnetizationCache c;
  for (auto s : cfg.sigma) c.m_sigma += s;
  for (auto t : cfg.tau) c.m_tau += t;
  return c;
}

void validate_cache(const BilayerSpinConfig& cfg, const MagnetizationCache& cache) {
  const auto fresh = MagnetizationCache::from(cfg);
  if (!(fresh == cache)) {
    throw CacheMismatch("cached (" + std::to_string(cache.m_sigma) + ", " +
                        std::to_string(cache.m_tau) + ") vs recount (" +
                        std::to_string(fresh.m_sigma) + ", " + std::to_string(fresh.m_tau) + ")");
  }
}

BilayerSpinConfig mass_to_spin(const LatticeGeometry& geom, const MassFieldConfig& m) {
  BilayerSpinConfig cfg;
  const auto n = static_cast<std::size_t>(geom.num_qubits());
  cfg.sigma.resize(n);
  cfg.tau.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    const Qubit& qb = geom.qubits()[q];
    int s = m.mu[qb.plaquette_a];
    int t = m.nu[qb.plaquette_a];
    switch (qb.kind) {
    case QubitKind::top_boundary:
      s *= m.alpha_t;
      t *= m.beta_t;
      break;
    case QubitKind::bottom_boundary:
      s *= m.alpha_b;
      t *= m.beta_b;
      break;
    default:
      s *= m.mu[qb.plaquette_b];
      t *= m.nu[qb.plaquette_b];
      break;
    }
    cfg.sigma[q] = static_cast<std::int8_t>(s);
    cfg.tau[q] = static_cast<std::int8_t>(t);
  }
  return cfg;
}

bool stars_positive(const LatticeGeometry& geom, const BilayerSpinConfig& cfg) {
  for (const auto& star : geom.stars()) {
    int ps = 1;
    int pt = 1;
    for (int q : star) {
      ps *= cfg.sigma[q];
      pt *= cfg.tau[q];
    }
    if (ps != 1 || pt != 1) return false;
  }
  return true;
}

int logical_value(const LatticeGeometry& geom, const std::vector<std::int8_t>& layer) {
  int prod = 1;
  for (int q : geom.logical_path()) prod *= layer[q];
  return prod;
}

void write_config(std::ostream& out, const LatticeGeometry& geom, const MassFieldConfig& m) {
  out << "# mass-field snapshot " << geom.nx() << "x" << geom.ny() << "\n";
  for (int p = 0; p < geom.num_plaquettes(); ++p) {
    out << "mu " << geom.plaquette_x(p) + 1 << ' ' << geom.plaquette_y(p) + 1 << ' '
        << static_cast<int>(m.mu[p]) << "\n";
  }
  for (int p = 0; p < geom.num_plaquettes(); ++p) {
    out << "nu " << geom.plaquette_x(p) + 1 << ' ' << geom.plaquette_y(p) + 1 << ' '
        << static_cast<int>(m.nu[p]) << "\n";
  }
  out << "bnd alpha_t " << m.alpha_t << "\n"
      << "bnd alpha_b " << m.alpha_b << "\n"
      << "bnd beta_t " << m.beta_t << "\n"
      << "bnd beta_b " << m.beta_b << "\n";
}

MassFieldConfig read_config(std::istream& in, const LatticeGeometry& geom) {
  MassFieldConfig m = MassFieldConfig::uniform(geom);
  std::string line;
  int lineno = 0;
  auto check_spin = [&](int s) {
    if (s != 1 && s != -1) throw ParseError("line " + std::to_string(lineno) + ": spin must be +-1");
    return s;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "mu" || tag == "nu") {
      int x = 0;
      int y = 0;
      int s = 0;
      if (!(ls >> x >> y >> s) || x < 1 || x > geom.nx() || y < 1 || y > geom.ny()) {
        throw ParseError("line " + std::to_string(lineno) + ": bad plaquette record");
      }
      auto& field = tag == "mu" ? m.mu : m.nu;
      field[geom.plaquette(x - 1, y - 1)] = static_cast<std::int8_t>(check_spin(s));
    } else if (tag == "bnd") {
      std::string name;
      int s = 0;
      if (!(ls >> name >> s)) throw ParseError("line " + std::to_string(lineno) + ": bad bnd record");
      if (name == "alpha_t") m.alpha_t = check_spin(s);
      else if (name == "alpha_b") m.alpha_b = check_spin(s);
      else if (name == "beta_t") m.beta_t = check_spin(s);
      else if (name == "beta_b") m.beta_b = check_spin(s);
      else throw ParseError("line " + std::to_string(lineno) + ": unknown boundary field " + name);
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
    }
  }
  return m;
}

} // namespace tst::model
