#include "tst/error.hpp"
#include "tst/model/energy.hpp"

#include <algorithm>
#include <map>

namespace tst::model {

namespace {

using VarSet = std::vector<int>;

// Product of two spin monomials: variables appearing twice square to one.
VarSet multiply(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VarSet sorted(VarSet v) {
  std::sort(v.begin(), v.end());
  return v;
}

} // namespace

CompiledModel::CompiledModel(const LatticeGeometry& geom, const MassFieldModel& model)
    : geom_(&geom), model_(model) {
  const int p = geom.num_plaquettes();
  const int alpha_t = 2 * p, alpha_b = 2 * p + 1, beta_t = 2 * p + 2, beta_b = 2 * p + 3;
  const int nq = geom.num_qubits();

  std::vector<VarSet> sigma(nq), tau(nq);
  for (int q = 0; q < nq; ++q) {
    const Qubit& qb = geom.qubits()[q];
    switch (qb.kind) {
    case QubitKind::top_boundary:
      sigma[q] = sorted({qb.plaquette_a, alpha_t});
      tau[q] = sorted({p + qb.plaquette_a, beta_t});
      break;
    case QubitKind::bottom_boundary:
      sigma[q] = sorted({qb.plaquette_a, alpha_b});
      tau[q] = sorted({p + qb.plaquette_a, beta_b});
      break;
    default:
      sigma[q] = sorted({qb.plaquette_a, qb.plaquette_b});
      tau[q] = sorted({p + qb.plaquette_a, p + qb.plaquette_b});
      break;
    }
  }

  std::map<VarSet, std::complex<double>> collected;
  auto add = [&](const VarSet& vars, std::complex<double> coef) {
    if (coef == 0.0) return;
    if (vars.empty()) {
      constant_ += coef.real();
      return;
    }
    collected[vars] += coef;
  };

  constant_ = 0.5 * nq;
  for (int q = 0; q < nq; ++q) add(multiply(sigma[q], tau[q]), -0.5);

  const std::complex<double> j = model.j;
  for (const auto& [r, s] : geom.nearest_pairs()) {
    add(multiply(sigma[r], sigma[s]), 0.5 * std::conj(j));
    add(multiply(tau[r], tau[s]), 0.5 * j);
    add(multiply(sigma[r], tau[s]), -0.5 * j.real());
    add(multiply(tau[r], sigma[s]), -0.5 * j.real());
  }

  incident_.resize(static_cast<std::size_t>(geom.num_mass_variables()));
  for (const auto& [vars, coef] : collected) {
    if (coef == 0.0) continue;
    Term t;
    t.coef = coef;
    t.size = static_cast<int>(vars.size());
    std::copy(vars.begin(), vars.end(), t.vars.begin());
    const int idx = static_cast<int>(terms_.size());
    for (int v : vars) incident_[v].push_back(idx);
    terms_.push_back(t);
  }

  affected_.resize(incident_.size());
  for (int pl = 0; pl < p; ++pl) {
    affected_[pl] = geom.plaquette_qubits(pl);
    affected_[p + pl] = geom.plaquette_qubits(pl);
  }
  affected_[alpha_t] = affected_[beta_t] = geom.top_qubits();
  affected_[alpha_b] = affected_[beta_b] = geom.bottom_qubits();
}

bool CompiledModel::is_sigma_variable(int var) const {
  const int p = geom_->num_plaquettes();
  return var < p || var == 2 * p || var == 2 * p + 1;
}

int CompiledModel::qubit_spin(const MassFieldConfig& m, int q, bool sigma_layer) const {
  const Qubit& qb = geom_->qubits()[q];
  const auto& field = sigma_layer ? m.mu : m.nu;
  int s = field[qb.plaquette_a];
  switch (qb.kind) {
  case QubitKind::top_boundary: return s * (sigma_layer ? m.alpha_t : m.beta_t);
  case QubitKind::bottom_boundary: return s * (sigma_layer ? m.alpha_b : m.beta_b);
  default: return s * field[qb.plaquette_b];
  }
}

ComplexEnergy CompiledModel::local_energy(const MassFieldConfig& m) const {
  ComplexEnergy e = constant_;
  for (const Term& t : terms_) {
    int prod = 1;
    for (int i = 0; i < t.size; ++i) prod *= m.get(t.vars[i]);
    e += t.coef * static_cast<double>(prod);
  }
  return e;
}

ComplexEnergy CompiledModel::long_range_energy(long m_sigma, long m_tau) const {
  if (!model_.long_range) return 0.0;
  const double diff = static_cast<double>(m_sigma - m_tau);
  const double sum = static_cast<double>(m_sigma + m_tau);
  return {0.25 * model_.fbar_ratio * diff * diff, 0.25 * model_.phibar_ratio * diff * sum};
}

ComplexEnergy CompiledModel::energy(const MassFieldConfig& m) const {
  ComplexEnergy e = local_energy(m);
  if (model_.long_range) {
    const auto cache = MagnetizationCache::from(mass_to_spin(*geom_, m));
    e += long_range_energy(cache.m_sigma, cache.m_tau);
  }
  return e;
}

long CompiledModel::magnetization_change(const MassFieldConfig& m, int var) const {
  const bool sigma_layer = is_sigma_variable(var);
  long change = 0;
  for (int q : affected_[var]) change -= 2 * qubit_spin(m, q, sigma_layer);
  return change;
}

ComplexEnergy CompiledModel::delta_energy(const MassFieldConfig& m, int var,
                                          const MagnetizationCache* cache) const {
  if (var < 0 || var >= static_cast<int>(incident_.size())) {
    throw UnknownVariable("variable index " + std::to_string(var) + " out of range");
  }
  ComplexEnergy de = 0.0;
  for (int idx : incident_[var]) {
    const Term& t = terms_[idx];
    int prod = 1;
    for (int i = 0; i < t.size; ++i) prod *= m.get(t.vars[i]);
    de -= 2.0 * t.coef * static_cast<double>(prod);
  }
  if (model_.long_range) {
    const MagnetizationCache current =
        cache != nullptr ? *cache : MagnetizationCache::from(mass_to_spin(*geom_, m));
    MagnetizationCache after = current;
    const long change = magnetization_change(m, var);
    (is_sigma_variable(var) ? after.m_sigma : after.m_tau) += change;
    de += long_range_energy(after.m_sigma, after.m_tau) -
          long_range_energy(current.m_sigma, current.m_tau);
  }
  return de;
}

ComplexEnergy delta_energy(const CompiledModel& model, const MassFieldConfig& m, VariableId flip,
                           const MagnetizationCache* cache) {
  return model.delta_energy(m, variable_index(model.geometry(), flip), cache);
}

} // namespace tst::model
