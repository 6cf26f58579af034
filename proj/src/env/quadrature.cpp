#include "tst/env/couplings.hpp"
#include "tst/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tst::env {

namespace {

using std::numbers::pi;

// 1 - cos x without cancellation near the origin.
double one_minus_cos(double x) {
  const double h = std::sin(0.5 * x);
  return 2.0 * h * h;
}

// x - sin x; series below 0.1 where direct subtraction loses digits.
double x_minus_sin(double x) {
  if (std::abs(x) < 0.1) {
    const double x2 = x * x;
    return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  }
  return x - std::sin(x);
}

double bessel_j0(double z) { return z == 0.0 ? 1.0 : std::cyl_bessel_j(0.0, z); }

// Upper limit where the envelope x^q e^{-cx} has dropped below `cutoff` times
// its maximum, with q = q_small below x = 1 and q = q_large above it (the
// oscillating factor behaves as a power near the origin).
double envelope_limit(double q_small, double q_large, double c, double cutoff) {
  auto log_env = [&](double x) { return (x < 1.0 ? q_small : q_large) * std::log(x) - c * x; };
  double x_peak = 1.0;
  for (double cand : {q_small / c, q_large / c}) {
    if (cand > 0.0 && log_env(cand) > log_env(x_peak)) x_peak = cand;
  }
  const double target = log_env(x_peak) + std::log(cutoff);
  double lo = x_peak;
  double hi = x_peak + 1.0 / c;
  while (log_env(hi) > target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_env(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

struct IntegralResult {
  double value;
  double error;
};

// Adaptive bisection on top of a single Gauss-Kronrod rule. Boost's own
// adaptive driver stops on a relative criterion only, which never triggers on
// panels whose integral cancels to nearly zero. Refinement also stops once a
// bisection no longer halves the error: that is the rounding floor of f.
template <class F>
IntegralResult adapt(F& f, double lo, double hi, double abs_target, int depth,
                     double parent_err = std::numeric_limits<double>::infinity()) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0.0, l1 = 0.0;
  const double v = gauss_kronrod<double, 61>::integrate(f, lo, hi, 0, 0.0, &err, &l1);
  if (err <= std::max({abs_target, 1e-13 * std::abs(v), 1e-14 * l1}) || depth == 0 ||
      err > 0.25 * parent_err) {
    return {v, err};
  }
  const double mid = 0.5 * (lo + hi);
  const auto a = adapt(f, lo, mid, 0.5 * abs_target, depth - 1, err);
  const auto b = adapt(f, mid, hi, 0.5 * abs_target, depth - 1, err);
  return {a.value + b.value, a.error + b.error};
}

// Integrates f over [0, x_max] in panels no wider than half a period of the
// fastest oscillating factor. `scale` multiplies the result afterwards, so the
// absolute target per panel is taken in unscaled units.
template <class F>
IntegralResult panel_integrate(F&& f, double x_max, double bessel_rate, double scale,
                               const QuadratureOptions& opts) {
  const double width = pi / std::max(1.0, bessel_rate);
  const double panels = std::ceil(x_max / width);
  if (panels > static_cast<double>(opts.max_panels)) {
    throw NonConvergence("integration window needs " + std::to_string(panels) +
                         " panels, budget is " + std::to_string(opts.max_panels));
  }
  const long n = static_cast<long>(panels);
  const double abs_target = 0.5 * opts.abs_tol / (std::abs(scale) * static_cast<double>(n));
  double total = 0.0;
  double total_err = 0.0;
  for (long i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) * width;
    const double hi = std::min(x_max, lo + width);
    const auto part = adapt(f, lo, hi, abs_target, 12);
    total += part.value;
    total_err += part.error;
  }
  return {total, total_err};
}

double prefactor(const EnvironmentSpec& env) {
  return 1.0 / (pi * env.omega0 * env.omega0 *
                std::pow(env.omega0 * env.delta, 2.0 * env.s));
}

KernelValue finish(const IntegralResult& res, double scale, const QuadratureOptions& opts) {
  KernelValue out;
  out.value = scale * res.value;
  out.est_error = std::abs(scale) * res.error;
  out.method = KernelMethod::quadrature;
  const double allowed = std::max(opts.abs_tol, opts.rel_tol * std::abs(out.value));
  if (!(out.est_error <= allowed) || !std::isfinite(out.value)) {
    throw NonConvergence("quadrature error estimate " + std::to_string(out.est_error) +
                         " exceeds tolerance " + std::to_string(allowed));
  }
  return out;
}

void check_options(const QuadratureOptions& opts) {
  if (!(opts.abs_tol > 0.0)) throw InvalidParam("quadrature tolerance must be positive");
}

} // namespace

KernelValue f_quadrature(const EnvironmentSpec& env, double r, bool use_beta,
                         const QuadratureOptions& opts) {
  env.validate();
  check_options(opts);
  if (env.s <= -1.0) {
    throw InvalidParam("F integral diverges at small x for s <= -1");
  }
  const double inv_cutoff_time = std::isinf(env.lambda_uv) ? 0.0 : 1.0 / (env.v * env.lambda_uv);
  const double damping = ((use_beta ? env.beta : 0.0) + inv_cutoff_time) / env.delta;
  if (damping <= 0.0) {
    throw InvalidParam("F needs beta > 0 or a finite ultraviolet cutoff; "
                       "use a regularized regime");
  }
  const double rate = std::abs(r) / (env.v * env.delta);
  const double p = 2.0 * env.s - 1.0;
  auto integrand = [&](double x) {
    if (x == 0.0) return 0.0;
    return std::pow(x, p) * bessel_j0(rate * x) * one_minus_cos(x) * std::exp(-damping * x);
  };
  const double x_max = envelope_limit(p + 2.0, p, damping, opts.envelope_cutoff);
  const double scale = prefactor(env);
  return finish(panel_integrate(integrand, x_max, rate, scale, opts), scale, opts);
}

KernelValue phi_quadrature(const EnvironmentSpec& env, double r,
                           const QuadratureOptions& opts) {
  env.validate();
  check_options(opts);
  if (env.s <= -1.5) {
    throw InvalidParam("Phi integral diverges at small x for s <= -3/2");
  }
  if (std::isinf(env.lambda_uv)) {
    throw InvalidParam("Phi needs a finite ultraviolet cutoff");
  }
  const double damping = 1.0 / (env.v * env.delta * env.lambda_uv);
  const double rate = std::abs(r) / (env.v * env.delta);
  const double p = 2.0 * env.s - 1.0;
  auto integrand = [&](double x) {
    if (x == 0.0) return 0.0;
    return std::pow(x, p) * bessel_j0(rate * x) * x_minus_sin(x) * std::exp(-damping * x);
  };
  const double x_max = envelope_limit(p + 3.0, p + 1.0, damping, opts.envelope_cutoff);
  const double scale = prefactor(env);
  return finish(panel_integrate(integrand, x_max, rate, scale, opts), scale, opts);
}

} // namespace tst::env
