#include "tst/env/couplings.hpp"
#include "tst/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tst::env {

namespace {

using std::numbers::pi;

enum class Row { super_ohmic, ohmic, sub_ohmic };

Row tabulated_row(double s) {
  constexpr double eps = 1e-12;
  if (std::abs(s - 0.5) < eps) return Row::super_ohmic;
  if (std::abs(s) < eps) return Row::ohmic;
  if (std::abs(s + 0.5) < eps) return Row::sub_ohmic;
  throw Unsupported("no closed form for s = " + std::to_string(s));
}

double step(double x) { return x > 0.0 ? 1.0 : 0.0; }

void require_finite_cutoff(const EnvironmentSpec& env) {
  if (std::isinf(env.lambda_uv)) {
    throw InvalidParam("F(Delta;0;0) grows with the cutoff; a finite lambda_uv is required");
  }
}

} // namespace

bool has_closed_form(double s) {
  try {
    tabulated_row(s);
    return true;
  } catch (const Unsupported&) {
    return false;
  }
}

KernelValue f_closed_form(const EnvironmentSpec& env, double r, bool use_beta,
                          const RegimeMargins& margins) {
  env.validate();
  const Row row = tabulated_row(env.s);
  const double w0 = env.omega0;
  const double vd = env.v * env.delta;
  const double dist = std::abs(r);
  const double inv_cutoff = std::isinf(env.lambda_uv) ? 0.0 : 1.0 / env.lambda_uv;

  if (use_beta) {
    if (!(env.beta > 0.0)) throw InvalidParam("thermal closed form needs beta > 0");
    if (env.beta / env.delta > margins.max_beta_over_delta) {
      throw OutOfRegime("beta/Delta = " + std::to_string(env.beta / env.delta) +
                        " is not in the thermal regime");
    }
  }
  if (dist > 0.0) {
    const double scale = std::max(use_beta ? env.v * env.beta : 0.0, inv_cutoff);
    if (dist < margins.min_distance_ratio * scale) {
      throw OutOfRegime("|r| is not much larger than max(v beta, 1/Lambda)");
    }
  }

  KernelValue out;
  out.method = KernelMethod::closed_form;

  if (dist == 0.0 && !use_beta) {
    if (row != Row::sub_ohmic) require_finite_cutoff(env);
    // The vacuum row assumes the cutoff time 1/(v Lambda) is short against Delta.
    if (inv_cutoff / env.v > margins.max_beta_over_delta * env.delta) {
      throw OutOfRegime("1/(v Lambda) is not small against Delta");
    }
    switch (row) {
    case Row::super_ohmic: out.value = env.v * env.lambda_uv / (pi * w0 * w0 * w0); break;
    case Row::ohmic: out.value = std::log(env.v * env.lambda_uv * env.delta) / (pi * w0 * w0); break;
    case Row::sub_ohmic: out.value = env.delta / (2.0 * w0); break;
    }
    return out;
  }

  const double beta = use_beta ? env.beta : 0.0;
  if (dist == 0.0) {
    const double ratio = beta / env.delta;
    switch (row) {
    case Row::super_ohmic: out.value = 1.0 / (pi * w0 * w0 * w0 * beta); break;
    case Row::ohmic: out.value = std::log(1.0 / ratio) / (pi * w0 * w0); break;
    case Row::sub_ohmic:
      out.value = env.delta / (pi * w0) * (pi / 2.0 + ratio * std::log(ratio));
      break;
    }
    return out;
  }

  // Thermal r != 0 row; at beta = 0 it is the cutoff-dominated vacuum value.
  const double inside = step(vd - dist);
  const double outside = step(dist - vd);
  switch (row) {
  case Row::super_ohmic: {
    const double tail = outside > 0.0 ? 1.0 / std::sqrt(dist * dist - vd * vd) : 0.0;
    out.value = env.v / (pi * w0 * w0 * w0) * (1.0 / dist - tail);
    break;
  }
  case Row::ohmic: {
    const double vb = env.v * beta;
    double bracket = -vb / dist;
    if (inside > 0.0) bracket += std::acosh(vd / dist);
    if (outside > 0.0) bracket += vb / std::sqrt(dist * dist - vd * vd);
    out.value = bracket / (pi * w0 * w0);
    break;
  }
  case Row::sub_ohmic: {
    const double x = dist / vd;
    double brace = 0.0;
    if (inside > 0.0) brace += (pi / 2.0 - x) + beta / env.delta * std::acosh(1.0 / x);
    if (outside > 0.0) brace += std::asin(1.0 / x) + std::sqrt(x * x - 1.0) - x;
    out.value = env.delta / (pi * w0) * brace;
    break;
  }
  }
  return out;
}

KernelValue phi_closed_form(const EnvironmentSpec& env, double r) {
  env.validate();
  const Row row = tabulated_row(env.s);
  const double dist = std::abs(r);
  if (dist == 0.0) throw InvalidParam("Phi(Delta;0) is not tabulated; use quadrature");
  const double w0 = env.omega0;
  const double vd = env.v * env.delta;

  KernelValue out;
  out.method = KernelMethod::closed_form;
  switch (row) {
  case Row::super_ohmic:
    out.value = dist < vd ? env.v / (pi * w0 * w0 * w0) / std::sqrt(vd * vd - dist * dist) : 0.0;
    break;
  case Row::ohmic:
    out.value = (dist < vd ? pi / 2.0 : std::asin(vd / dist)) / (pi * w0 * w0);
    break;
  case Row::sub_ohmic:
    if (dist < vd) {
      // arccosh(v Delta/r) - sqrt(1 - (r/v Delta)^2); the square root sits
      // outside the logarithm.
      const double y = vd / dist;
      out.value = env.delta / (pi * w0) *
                  (std::log(std::sqrt(y * y - 1.0) + y) - std::sqrt(1.0 - 1.0 / (y * y)));
    } else {
      out.value = 0.0;
    }
    break;
  }
  return out;
}

} // namespace tst::env
