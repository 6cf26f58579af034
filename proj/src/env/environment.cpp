#include "tst/env/couplings.hpp"
#include "tst/error.hpp"

#include <cmath>
#include <numbers>

namespace tst::env {

void EnvironmentSpec::validate() const {
  if (dimension != 2) throw InvalidParam("only a two-dimensional bath is supported");
  if (!std::isfinite(s)) throw InvalidParam("s must be finite");
  if (!(beta >= 0.0) || std::isinf(beta)) throw InvalidParam("beta must be >= 0 and finite");
  if (!(delta > 0.0) || std::isinf(delta)) throw InvalidParam("delta must be > 0");
  if (!(v > 0.0) || std::isinf(v)) throw InvalidParam("v must be > 0");
  if (!(lambda_uv > 0.0)) throw InvalidParam("lambda_uv must be > 0");
  if (!(omega0 > 0.0) || std::isinf(omega0)) throw InvalidParam("omega0 must be > 0");
  if (!(a > 0.0) || std::isinf(a)) throw InvalidParam("a must be > 0");
}

RegimeTag classify_regime(const EnvironmentSpec& env, double r) {
  RegimeTag tag;
  tag.thermal = env.beta < env.delta ? ThermalFlag::thermal : ThermalFlag::vacuum;
  tag.causal = std::abs(r) < env.v * env.delta ? CausalFlag::timelike : CausalFlag::spacelike;
  return tag;
}

KernelValue f_kernel(const EnvironmentSpec& env, double r, bool use_beta) {
  if (has_closed_form(env.s)) {
    try {
      return f_closed_form(env, r, use_beta);
    } catch (const OutOfRegime&) {
    } catch (const InvalidParam&) {
    }
  }
  return f_quadrature(env, r, use_beta);
}

KernelValue phi_kernel(const EnvironmentSpec& env, double r) {
  if (r != 0.0 && has_closed_form(env.s)) return phi_closed_form(env, r);
  return phi_quadrature(env, r);
}

std::string to_string(ModelVariant v) {
  switch (v) {
  case ModelVariant::super_local: return "super_local";
  case ModelVariant::super_imag: return "super_imag";
  case ModelVariant::ohmic_longrange: return "ohmic_longrange";
  case ModelVariant::general_kernel: return "general_kernel";
  }
  return "?";
}

ModelVariant parse_variant(const std::string& name) {
  for (auto v : {ModelVariant::super_local, ModelVariant::super_imag,
                 ModelVariant::ohmic_longrange, ModelVariant::general_kernel}) {
    if (to_string(v) == name) return v;
  }
  throw InvalidParam("unknown model variant '" + name + "'");
}

bool ModelCouplings::has_imaginary_part() const {
  if (j_complex.imag() != 0.0 || eta != 0.0 || phi_bar != 0.0) return true;
  if (kernel_table) {
    for (const auto& [key, entry] : *kernel_table) {
      if (key != 0 && entry.phi != 0.0) return true;
    }
  }
  return false;
}

namespace {

void check_variant(const EnvironmentSpec& env, ModelVariant variant) {
  switch (variant) {
  case ModelVariant::super_local:
  case ModelVariant::super_imag:
    if (!(env.s > 0.0)) throw VariantMismatch(to_string(variant) + " needs s > 0");
    break;
  case ModelVariant::ohmic_longrange:
    if (env.s != 0.0) throw VariantMismatch("ohmic_longrange needs s = 0");
    break;
  case ModelVariant::general_kernel: break;
  }
}

} // namespace

KernelValue xi_unit_kernel(const EnvironmentSpec& env, ModelVariant variant, double fbar_ratio) {
  KernelValue f = f_kernel(env, 0.0, true);
  if (variant == ModelVariant::ohmic_longrange) {
    f.value /= 1.0 + fbar_ratio;
    f.est_error /= 1.0 + fbar_ratio;
  }
  return f;
}

ModelCouplings reduce_to_model(const EnvironmentSpec& env, double lambda_coupling,
                               ModelVariant variant, const ReduceOptions& opts) {
  env.validate();
  if (!(lambda_coupling >= 0.0)) throw InvalidParam("lambda must be >= 0");
  check_variant(env, variant);

  ModelCouplings out;
  out.variant = variant;
  const KernelValue f_local = f_kernel(env, 0.0, true);
  const double lam2 = lambda_coupling * lambda_coupling;
  const double nn_distance = env.a / std::numbers::sqrt2;

  switch (variant) {
  case ModelVariant::super_local:
    out.xi_unit = f_local.value;
    break;
  case ModelVariant::super_imag:
    out.xi_unit = f_local.value;
    out.eta = phi_kernel(env, nn_distance).value / f_local.value;
    out.j_complex = {0.0, out.eta};
    break;
  case ModelVariant::ohmic_longrange:
    out.delta_f = f_local.value / (1.0 + opts.fbar_ratio);
    out.f_bar = opts.fbar_ratio * out.delta_f;
    out.phi_bar = opts.phibar_ratio * out.delta_f;
    out.xi_unit = out.delta_f;
    if (!(out.delta_f > 0.0)) throw InvalidParam("Delta F must be positive");
    break;
  case ModelVariant::general_kernel: {
    out.xi_unit = f_local.value;
    const double f_nn = f_kernel(env, nn_distance, true).value;
    const double phi_nn = phi_kernel(env, nn_distance).value;
    out.j_complex = {f_nn / f_local.value, phi_nn / f_local.value};
    KernelTable table;
    table[0] = KernelEntry{f_kernel(env, 0.0, false).value / f_local.value, 1.0, 0.0};
    for (int m = 0; m * m <= opts.max_distance_key; ++m) {
      for (int n = m; m * m + n * n <= opts.max_distance_key; ++n) {
        const int key = m * m + n * n;
        if (key == 0 || table.count(key) != 0) continue;
        const double r = env.a * std::sqrt(static_cast<double>(key)) / 2.0;
        table[key] = KernelEntry{f_kernel(env, r, false).value / f_local.value,
                                 f_kernel(env, r, true).value / f_local.value,
                                 phi_kernel(env, r).value / f_local.value};
      }
    }
    out.kernel_table = std::move(table);
    break;
  }
  }
  out.unit_method = f_local.method;
  out.xi = lam2 * out.xi_unit;
  return out;
}

} // namespace tst::env
