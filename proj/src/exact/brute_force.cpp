#include "tst/exact/brute_force.hpp"
#include "tst/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace tst::exact {

namespace {

using model::ComplexEnergy;

void check_budget(int n, int max_variables) {
  if (n > max_variables || n > 62) {
    throw TooLarge(std::to_string(n) + " mass-field variables exceed the enumeration budget of " +
                   std::to_string(max_variables));
  }
}

struct Accumulator {
  std::array<std::complex<double>, 16> c{};
  std::complex<double> m1{};
  std::complex<double> m2{};

  void add(int pattern, ComplexEnergy e, std::complex<double> w) {
    c[pattern] += w;
    m1 += e * w;
    m2 += e * e * w;
  }
  void merge(const Accumulator& o) {
    for (int i = 0; i < 16; ++i) c[i] += o.c[i];
    m1 += o.m1;
    m2 += o.m2;
  }
};

BruteForceResult finish(const Accumulator& acc, double log_scale) {
  std::array<ScaledComplex, 16> c;
  for (int i = 0; i < 16; ++i) c[i] = {acc.c[i], log_scale};
  BruteForceResult out;
  out.amps = assemble_full(c);
  std::complex<double> z{};
  for (const auto& v : acc.c) z += v;
  out.mean_energy = acc.m1 / z;
  out.mean_energy_sq = acc.m2 / z;
  return out;
}

model::MassFieldConfig config_from_bits(const model::LatticeGeometry& geom, std::uint64_t bits) {
  auto m = model::MassFieldConfig::uniform(geom);
  for (int v = 0; v < m.num_variables(); ++v) {
    if ((bits >> v) & 1U) m.flip(v);
  }
  return m;
}

int pattern_of(std::uint64_t bits, int p) { return static_cast<int>((bits >> (2 * p)) & 15U); }

// Bitmask form of a compiled model: term signs and qubit spins are parities.
struct MaskedModel {
  std::vector<std::uint64_t> term_mask;
  std::vector<std::complex<double>> term_coef;
  std::vector<std::vector<int>> incident;
  std::vector<std::uint64_t> sigma_mask;
  std::vector<std::uint64_t> tau_mask;
  std::vector<std::vector<std::uint64_t>> flip_qubits; // spin masks of affected qubits
  std::vector<bool> flips_sigma;
  double constant = 0.0;
  bool long_range = false;
  double fbar = 0.0;
  double phibar = 0.0;
  double lower_bound = 0.0;
};

int parity_sign(std::uint64_t x) { return (std::popcount(x) & 1) ? -1 : 1; }

MaskedModel mask_model(const model::LatticeGeometry& geom, const model::MassFieldModel& mm) {
  const model::CompiledModel cm(geom, mm);
  MaskedModel out;
  const int p = geom.num_plaquettes();
  const int nvar = geom.num_mass_variables();
  out.constant = cm.constant();
  out.long_range = mm.long_range;
  out.fbar = mm.fbar_ratio;
  out.phibar = mm.phibar_ratio;
  out.incident.resize(nvar);
  out.lower_bound = cm.constant();
  for (const auto& t : cm.terms()) {
    std::uint64_t mask = 0;
    for (int i = 0; i < t.size; ++i) mask |= std::uint64_t{1} << t.vars[i];
    const int idx = static_cast<int>(out.term_mask.size());
    for (int i = 0; i < t.size; ++i) out.incident[t.vars[i]].push_back(idx);
    out.term_mask.push_back(mask);
    out.term_coef.push_back(t.coef);
    out.lower_bound -= std::abs(t.coef.real());
  }
  for (const auto& q : geom.qubits()) {
    std::uint64_t other_s = 0, other_t = 0;
    switch (q.kind) {
    case model::QubitKind::top_boundary:
      other_s = std::uint64_t{1} << (2 * p);
      other_t = std::uint64_t{1} << (2 * p + 2);
      break;
    case model::QubitKind::bottom_boundary:
      other_s = std::uint64_t{1} << (2 * p + 1);
      other_t = std::uint64_t{1} << (2 * p + 3);
      break;
    default:
      other_s = std::uint64_t{1} << q.plaquette_b;
      other_t = std::uint64_t{1} << (p + q.plaquette_b);
      break;
    }
    out.sigma_mask.push_back((std::uint64_t{1} << q.plaquette_a) | other_s);
    out.tau_mask.push_back((std::uint64_t{1} << (p + q.plaquette_a)) | other_t);
  }
  out.flip_qubits.resize(nvar);
  out.flips_sigma.resize(nvar);
  for (int v = 0; v < nvar; ++v) {
    out.flips_sigma[v] = cm.is_sigma_variable(v);
    for (int q : cm.affected_qubits(v)) {
      out.flip_qubits[v].push_back(out.flips_sigma[v] ? out.sigma_mask[q] : out.tau_mask[q]);
    }
  }
  if (out.long_range && out.fbar < 0.0) {
    const double n = 2.0 * geom.num_qubits();
    out.lower_bound += 0.25 * out.fbar * n * n;
  }
  return out;
}

ComplexEnergy long_range_part(const MaskedModel& mm, long ms, long mt) {
  const double diff = static_cast<double>(ms - mt);
  const double sum = static_cast<double>(ms + mt);
  return {0.25 * mm.fbar * diff * diff, 0.25 * mm.phibar * diff * sum};
}

} // namespace

double BruteForceResult::heat_capacity(double xi) const {
  return xi * xi * (mean_energy_sq - mean_energy * mean_energy).real();
}

ObservableReport BruteForceResult::report(double xi) const {
  ObservableReport rep = make_report(amps);
  rep.energy = mean_energy.real();
  rep.heat_capacity = heat_capacity(xi);
  return rep;
}

BruteForceResult brute_force(const model::LatticeGeometry& geom,
                             const model::MassFieldModel& model, double xi, int max_variables) {
  const int n = geom.num_mass_variables();
  check_budget(n, max_variables);
  const MaskedModel mm = mask_model(geom, model);
  const int p = geom.num_plaquettes();
  const int nq = geom.num_qubits();

  // Weights are taken relative to a lower bound of Re E so none overflows.
  const double shift = mm.lower_bound;
  const int prefix_bits = std::min(n, 8);
  const int low_bits = n - prefix_bits;
  const long num_chunks = 1L << prefix_bits;
  std::vector<Accumulator> partial(static_cast<std::size_t>(num_chunks));

#pragma omp parallel for schedule(dynamic)
  for (long chunk = 0; chunk < num_chunks; ++chunk) {
    Accumulator acc;
    std::uint64_t state = static_cast<std::uint64_t>(chunk) << low_bits;

    std::vector<int> term_sign(mm.term_mask.size());
    ComplexEnergy local = mm.constant;
    for (std::size_t t = 0; t < mm.term_mask.size(); ++t) {
      term_sign[t] = parity_sign(state & mm.term_mask[t]);
      local += mm.term_coef[t] * static_cast<double>(term_sign[t]);
    }
    long ms = 0, mt = 0;
    if (mm.long_range) {
      for (int q = 0; q < nq; ++q) {
        ms += parity_sign(state & mm.sigma_mask[q]);
        mt += parity_sign(state & mm.tau_mask[q]);
      }
    }

    auto visit = [&]() {
      const ComplexEnergy e = mm.long_range ? local + long_range_part(mm, ms, mt) : local;
      acc.add(pattern_of(state, p), e, std::exp(-xi * (e - shift)));
    };
    visit();
    const std::uint64_t count = std::uint64_t{1} << low_bits;
    for (std::uint64_t i = 1; i < count; ++i) {
      const int v = std::countr_zero(i);
      for (int t : mm.incident[v]) {
        local -= 2.0 * mm.term_coef[t] * static_cast<double>(term_sign[t]);
        term_sign[t] = -term_sign[t];
      }
      if (mm.long_range) {
        long change = 0;
        for (auto qmask : mm.flip_qubits[v]) change -= 2 * parity_sign(state & qmask);
        (mm.flips_sigma[v] ? ms : mt) += change;
      }
      state ^= std::uint64_t{1} << v;
      visit();
    }
    partial[static_cast<std::size_t>(chunk)] = acc;
  }

  Accumulator total;
  for (const auto& a : partial) total.merge(a);
  return finish(total, -xi * shift);
}

BruteForceResult brute_force_reference(const model::LatticeGeometry& geom,
                                       const model::MassFieldModel& model, double xi,
                                       int max_variables) {
  const int n = geom.num_mass_variables();
  check_budget(n, max_variables);
  const int p = geom.num_plaquettes();
  const double shift = mask_model(geom, model).lower_bound;
  Accumulator acc;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const auto m = config_from_bits(geom, bits);
    ComplexEnergy e = model::massfield_energy(geom, m, model.j);
    if (model.long_range) {
      const auto cache = model::MagnetizationCache::from(model::mass_to_spin(geom, m));
      const double diff = static_cast<double>(cache.m_sigma - cache.m_tau);
      const double sum = static_cast<double>(cache.m_sigma + cache.m_tau);
      e += ComplexEnergy(0.25 * model.fbar_ratio * diff * diff,
                         0.25 * model.phibar_ratio * diff * sum);
    }
    acc.add(pattern_of(bits, p), e, std::exp(-xi * (e - shift)));
  }
  return finish(acc, -xi * shift);
}

BruteForceResult brute_force_general(const model::LatticeGeometry& geom,
                                     const env::KernelTable& kernels, double xi,
                                     int max_variables) {
  const int n = geom.num_mass_variables();
  check_budget(n, max_variables);
  const int p = geom.num_plaquettes();
  const std::uint64_t count = std::uint64_t{1} << n;

  auto energy_of = [&](std::uint64_t bits) {
    return model::energy_general(geom, model::mass_to_spin(geom, config_from_bits(geom, bits)),
                                 kernels);
  };

  // Two passes: the first finds the minimum of Re E for a safe shift.
  double shift = energy_of(0).real();
#pragma omp parallel for schedule(static) reduction(min : shift)
  for (long long bits = 0; bits < static_cast<long long>(count); ++bits) {
    shift = std::min(shift, energy_of(static_cast<std::uint64_t>(bits)).real());
  }

  Accumulator acc;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const ComplexEnergy e = energy_of(bits);
    acc.add(pattern_of(bits, p), e, std::exp(-xi * (e - shift)));
  }
  return finish(acc, -xi * shift);
}

BruteForceResult brute_force(const model::LatticeGeometry& geom, const env::ModelCouplings& k,
                             int max_variables) {
  if (k.variant == env::ModelVariant::general_kernel) {
    if (!k.kernel_table) throw InvalidParam("general_kernel couplings carry no kernel table");
    return brute_force_general(geom, *k.kernel_table, k.xi, max_variables);
  }
  return brute_force(geom, model::MassFieldModel::from_couplings(k), k.xi, max_variables);
}

} // namespace tst::exact
