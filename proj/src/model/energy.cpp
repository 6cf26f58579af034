#include "tst/model/energy.hpp"
#include "tst/error.hpp"

#include <string>

namespace tst::model {

namespace {

const env::KernelEntry& lookup(const env::KernelTable& kernels, int key) {
  auto it = kernels.find(key);
  if (it == kernels.end()) {
    throw MissingKernelEntry("no kernel for 4r^2 = " + std::to_string(key));
  }
  return it->second;
}

} // namespace

ComplexEnergy energy_general(const LatticeGeometry& geom, const BilayerSpinConfig& cfg,
                             const env::KernelTable& kernels) {
  const int n = geom.num_qubits();
  const auto& onsite = lookup(kernels, 0);
  ComplexEnergy e = 0.5 * n * onsite.f_vacuum;
  double local = 0.0;
  for (int r = 0; r < n; ++r) local += cfg.sigma[r] * cfg.tau[r];
  e -= 0.5 * onsite.f_thermal * local;

  for (int r = 0; r < n; ++r) {
    const double sr = cfg.sigma[r];
    const double tr = cfg.tau[r];
    for (int s = 0; s < n; ++s) {
      if (s == r) continue;
      const auto& k = lookup(kernels, geom.distance_key(r, s));
      const double ss = cfg.sigma[s];
      const double ts = cfg.tau[s];
      e += 0.25 * ComplexEnergy(k.f_vacuum * (tr * ts + sr * ss) - k.f_thermal * (sr * ts + tr * ss),
                                k.phi * (ts - ss) * (tr + sr));
    }
  }
  return e;
}

double energy_super_local(const LatticeGeometry& geom, const BilayerSpinConfig& cfg) {
  double sum = 0.0;
  for (int r = 0; r < geom.num_qubits(); ++r) sum += cfg.sigma[r] * cfg.tau[r];
  return -0.5 * sum;
}

ComplexEnergy energy_super_imag(const LatticeGeometry& geom, const BilayerSpinConfig& cfg,
                                const env::ModelCouplings& k) {
  double imag = 0.0;
  for (const auto& [r, s] : geom.nearest_pairs()) {
    // both orderings of the pair
    imag += (cfg.tau[s] - cfg.sigma[s]) * (cfg.tau[r] + cfg.sigma[r]);
    imag += (cfg.tau[r] - cfg.sigma[r]) * (cfg.tau[s] + cfg.sigma[s]);
  }
  return {energy_super_local(geom, cfg), 0.25 * k.eta * imag};
}

ComplexEnergy energy_ohmic_longrange(const LatticeGeometry& geom, const BilayerSpinConfig& cfg,
                                     const MagnetizationCache& cache,
                                     const env::ModelCouplings& k) {
#ifndef NDEBUG
  validate_cache(cfg, cache);
#endif
  const double diff = static_cast<double>(cache.m_sigma - cache.m_tau);
  const double sum = static_cast<double>(cache.m_sigma + cache.m_tau);
  return {k.delta_f * energy_super_local(geom, cfg) + 0.25 * k.f_bar * diff * diff,
          0.25 * k.phi_bar * diff * sum};
}

ComplexEnergy massfield_energy(const LatticeGeometry& geom, const MassFieldConfig& m,
                               std::complex<double> j) {
  const int nx = geom.nx();
  const int ny = geom.ny();
  const auto& mu = m.mu;
  const auto& nu = m.nu;
  auto P = [&](int x, int y) { return geom.plaquette(x, y); };
  const std::complex<double> jc = std::conj(j);
  const double re_j = j.real();

  // Bulk: nearest-neighbour plaquette pairs carry the on-site qubit term.
  double nn = 0.0;
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const int p = P(x, y);
      if (x + 1 < nx) nn += mu[p] * mu[P(x + 1, y)] * nu[p] * nu[P(x + 1, y)];
      if (y + 1 < ny) nn += mu[p] * mu[P(x, y + 1)] * nu[p] * nu[P(x, y + 1)];
    }
  }
  ComplexEnergy e = 0.5 * (geom.num_qubits() - nn);

  // Diagonal pairs and L-shaped triples live on the 2x2 blocks around each
  // interior vertex. Each L-shape (corner n, arms m, m') enters symmetrised
  // over which arm carries mu.
  double diag_mu = 0.0;
  double diag_nu = 0.0;
  double ell = 0.0;
  for (int y = 0; y + 1 < ny; ++y) {
    for (int x = 0; x + 1 < nx; ++x) {
      const int a = P(x, y), b = P(x + 1, y), c = P(x, y + 1), d = P(x + 1, y + 1);
      diag_mu += mu[a] * mu[d] + mu[b] * mu[c];
      diag_nu += nu[a] * nu[d] + nu[b] * nu[c];
      const int corners[4][3] = {{a, b, c}, {b, a, d}, {c, a, d}, {d, b, c}};
      for (const auto& [n, m1, m2] : corners) {
        ell += 0.5 * (mu[m1] * mu[n] * nu[n] * nu[m2] + mu[m2] * mu[n] * nu[n] * nu[m1]);
      }
    }
  }
  e += jc * diag_mu + j * diag_nu - re_j * ell;

  // Top and bottom rows with their boundary fields. The per-vertex bracket
  // sum_x (s_x + s_{x+1})/2 gives the half-weighted end plaquettes.
  auto boundary_row = [&](int y, int alpha, int beta) {
    double onsite = 0.0;
    for (int x = 0; x < nx; ++x) onsite += mu[P(x, y)] * nu[P(x, y)];
    double bracket_mu = 0.0;
    double bracket_nu = 0.0;
    double three_a = 0.0;
    double three_b = 0.0;
    for (int x = 0; x + 1 < nx; ++x) {
      const int p = P(x, y);
      const int q = P(x + 1, y);
      bracket_mu += 0.5 * (mu[p] + mu[q]);
      bracket_nu += 0.5 * (nu[p] + nu[q]);
      // ordered neighbour pairs, each weighted 1/2
      three_a += 0.5 * (nu[p] * nu[q] * mu[q] + nu[q] * nu[p] * mu[p]);
      three_b += 0.5 * (mu[p] * mu[q] * nu[q] + mu[q] * mu[p] * nu[p]);
    }
    return -0.5 * alpha * beta * onsite + jc * (alpha * bracket_mu) + j * (beta * bracket_nu) -
           re_j * (alpha * three_a + beta * three_b);
  };
  e += boundary_row(ny - 1, m.alpha_t, m.beta_t);
  e += boundary_row(0, m.alpha_b, m.beta_b);
  return e;
}

MassFieldModel MassFieldModel::from_couplings(const env::ModelCouplings& k) {
  MassFieldModel out;
  switch (k.variant) {
  case env::ModelVariant::super_local: break;
  case env::ModelVariant::super_imag: out.j = k.j_complex; break;
  case env::ModelVariant::ohmic_longrange:
    out.long_range = true;
    out.fbar_ratio = k.fbar_ratio();
    out.phibar_ratio = k.phibar_ratio();
    break;
  case env::ModelVariant::general_kernel:
    throw Unsupported("general_kernel has no mass-field form beyond nearest neighbours");
  }
  return out;
}

} // namespace tst::model
