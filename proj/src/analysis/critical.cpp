#include "tst/analysis/threshold.hpp"
#include "tst/error.hpp"

#include <cmath>

namespace tst::analysis {

namespace {

void require_row(const env::EnvironmentSpec& env, double s, const char* name) {
  env.validate();
  if (std::abs(env.s - s) > 1e-12) throw InvalidParam(std::string(name) + " needs s = " + std::to_string(s));
  if (!(env.beta < env.delta)) throw OutOfRegime("threshold formulas need the thermal regime");
}

} // namespace

CriticalCoupling critical_coupling_super(const env::EnvironmentSpec& env) {
  require_row(env, 0.5, "critical_coupling_super");
  const auto f = env::f_kernel(env, 0.0, true);
  CriticalCoupling out;
  out.gamma_c = kIsingCriticalXi;
  out.kernel = f.value;
  out.method = f.method;
  out.lambda_c = lambda_from_gamma(out.gamma_c, f.value);
  out.scaling = "lambda_c ~ omega0 sqrt(omega0 beta)";
  return out;
}

CriticalCoupling critical_coupling_ohmic(const env::EnvironmentSpec& env, double fbar_ratio) {
  require_row(env, 0.0, "critical_coupling_ohmic");
  const auto df = env::xi_unit_kernel(env, env::ModelVariant::ohmic_longrange, fbar_ratio);
  CriticalCoupling out;
  out.gamma_c = kOhmicCriticalGamma;
  out.kernel = df.value;
  out.method = df.method;
  out.lambda_c = lambda_from_gamma(out.gamma_c, df.value);
  out.scaling = "lambda_c ~ omega0 |ln(Delta/beta)|^(-1/2)";
  return out;
}

CriticalCoupling critical_coupling_subohmic(const env::EnvironmentSpec& env) {
  require_row(env, -0.5, "critical_coupling_subohmic");
  const auto f = env::f_kernel(env, 0.0, true);
  CriticalCoupling out;
  out.gamma_c = kIsingCriticalXi;
  out.kernel = f.value;
  out.method = f.method;
  out.lambda_c = lambda_from_gamma(out.gamma_c, f.value);
  out.scaling = "lambda_c ~ sqrt(omega0 / Delta)";
  out.scaling_only = true;
  return out;
}

double single_qubit_fidelity_xi(double xi) {
  if (!(xi >= 0.0)) throw InvalidParam("xi must be >= 0");
  return 1.0 / (1.0 + std::tanh(0.5 * xi));
}

double single_qubit_fidelity(double lambda_coupling, const env::EnvironmentSpec& env) {
  if (!(lambda_coupling >= 0.0)) throw InvalidParam("lambda must be >= 0");
  const auto f = env::f_kernel(env, 0.0, true);
  return single_qubit_fidelity_xi(lambda_coupling * lambda_coupling * f.value);
}

double lambda_from_gamma(double gamma, double unit) {
  if (!(unit > 0.0)) throw InvalidParam("kernel unit must be positive");
  if (!(gamma >= 0.0)) throw InvalidParam("gamma must be >= 0");
  return std::sqrt(gamma / unit);
}

} // namespace tst::analysis
