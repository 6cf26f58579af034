#include "tst/env/couplings.hpp"
#include "tst/error.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

using namespace tst;
using namespace tst::env;
using std::numbers::pi;

namespace {

using cplx = std::complex<double>;

EnvironmentSpec make_env(double s, double beta, double delta, double lambda_uv) {
  EnvironmentSpec e;
  e.s = s;
  e.beta = beta;
  e.delta = delta;
  e.v = 1.0;
  e.lambda_uv = lambda_uv;
  e.omega0 = 1.0;
  e.a = 1.0;
  return e;
}

double prefactor(const EnvironmentSpec& e) {
  return 1.0 / (pi * e.omega0 * e.omega0 * std::pow(e.omega0 * e.delta, 2.0 * e.s));
}

// Laplace transforms of J0(bx) against e^{-px}: 1/sqrt(p^2 + b^2) and its
// p-derivative and p-antiderivative give the integrals in closed form.
cplx laplace_j0(cplx p, double b) { return 1.0 / std::sqrt(p * p + b * b); }

// s = 1/2: integrand J0(bx)(1 - cos x) e^{-dx}
double f_half_oracle(double d, double b) {
  return laplace_j0(d, b).real() - laplace_j0(cplx(d, -1.0), b).real();
}

// s = 1/2: integrand J0(bx)(x - sin x) e^{-dx}
double phi_half_oracle(double d, double b) {
  const double moment = d / std::pow(d * d + b * b, 1.5);
  return moment - laplace_j0(cplx(d, -1.0), b).imag();
}

// s = 0, b > 0: integrand J0(bx)(1 - cos x) e^{-dx} / x
double f_ohmic_oracle(double d, double b) {
  return (std::asinh(cplx(d, -1.0) / b) - std::asinh(cplx(d / b, 0.0))).real();
}

} // namespace

TEST_CASE("environment validation rejects out-of-domain fields") {
  auto e = make_env(0.5, 0.1, 1.0, 100.0);
  CHECK_NOTHROW(e.validate());
  for (auto mutate : {+[](EnvironmentSpec& x) { x.dimension = 3; },
                      +[](EnvironmentSpec& x) { x.beta = -1.0; },
                      +[](EnvironmentSpec& x) { x.delta = 0.0; },
                      +[](EnvironmentSpec& x) { x.v = -2.0; },
                      +[](EnvironmentSpec& x) { x.lambda_uv = 0.0; },
                      +[](EnvironmentSpec& x) { x.omega0 = 0.0; },
                      +[](EnvironmentSpec& x) { x.a = 0.0; }}) {
    auto bad = e;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), InvalidParam);
  }
}

TEST_CASE("closed forms reproduce the tabulated examples") {
  SUBCASE("super-Ohmic thermal r = 0") {
    auto e = make_env(0.5, 0.01, 1.0, 1e6);
    CHECK(f_closed_form(e, 0.0, true).value == doctest::Approx(100.0 / pi).epsilon(1e-12));
  }
  SUBCASE("Ohmic thermal r = 0 at delta/beta = e") {
    auto e = make_env(0.0, 1.0, std::numbers::e, 1e6);
    RegimeMargins loose{1.0, 10.0};
    CHECK(f_closed_form(e, 0.0, true, loose).value == doctest::Approx(1.0 / pi).epsilon(1e-12));
    CHECK_THROWS_AS(f_closed_form(e, 0.0, true), OutOfRegime);
  }
  SUBCASE("super-Ohmic inside the light cone") {
    auto e = make_env(0.5, 0.01, 5.0, 1e6);
    CHECK(f_closed_form(e, 2.0, true).value == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-12));
  }
  SUBCASE("sub-Ohmic vacuum r = 0") {
    auto e = make_env(-0.5, 0.0, 2.0, 1e6);
    CHECK(f_closed_form(e, 0.0, false).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("Phi rows") {
    auto e = make_env(0.5, 0.0, 2.0, 1e6);
    CHECK(phi_closed_form(e, 1.0).value == doctest::Approx(1.0 / (pi * std::sqrt(3.0))));
    auto o = make_env(0.0, 0.0, 1.0, 1e6);
    CHECK(phi_closed_form(o, 2.0).value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    auto m = make_env(-0.5, 0.0, 1.0, 1e6);
    CHECK(phi_closed_form(m, 1.0).value == 0.0);
    CHECK(phi_closed_form(m, 3.0).value == 0.0);
    CHECK(phi_closed_form(e, 2.0).value == 0.0);
    CHECK(phi_closed_form(e, 7.5).value == 0.0);
    CHECK_THROWS_AS(phi_closed_form(e, 0.0), InvalidParam);
  }
  SUBCASE("untabulated exponent") {
    auto e = make_env(0.25, 0.01, 1.0, 1e6);
    CHECK_FALSE(has_closed_form(0.25));
    CHECK_THROWS_AS(f_closed_form(e, 0.0, true), Unsupported);
    CHECK_THROWS_AS(phi_closed_form(e, 1.0), Unsupported);
  }
}

TEST_CASE("F quadrature matches exact Laplace transforms") {
  for (double delta : {0.5, 2.0}) {
    for (double beta : {0.01, 0.05}) {
      auto e = make_env(0.5, beta, delta, 200.0);
      e.omega0 = 1.3;
      const double d = (beta + 1.0 / (e.v * e.lambda_uv)) / delta;
      for (double r : {0.0, 0.3, 1.7, 4.0}) {
        const double b = r / (e.v * delta);
        const auto q = f_quadrature(e, r, true);
        CHECK(q.method == KernelMethod::quadrature);
        CHECK(q.value == doctest::Approx(prefactor(e) * f_half_oracle(d, b)).epsilon(1e-7));
        CHECK(q.est_error <= 1e-8);
      }
    }
  }
  auto o = make_env(0.0, 0.02, 1.5, 300.0);
  const double d = (o.beta + 1.0 / o.lambda_uv) / o.delta;
  for (double r : {0.4, 1.0, 3.0}) {
    CHECK(f_quadrature(o, r, true).value ==
          doctest::Approx(prefactor(o) * f_ohmic_oracle(d, r / o.delta)).epsilon(1e-7));
  }
  // r = 0 limits of the same transforms
  CHECK(f_quadrature(o, 0.0, true).value ==
        doctest::Approx(prefactor(o) * 0.5 * std::log1p(1.0 / (d * d))).epsilon(1e-7));
  auto m = make_env(-0.5, 0.02, 1.5, 300.0);
  CHECK(f_quadrature(m, 0.0, true).value ==
        doctest::Approx(prefactor(m) * (std::atan(1.0 / d) - 0.5 * d * std::log1p(1.0 / (d * d))))
            .epsilon(1e-7));
}

TEST_CASE("Phi quadrature matches exact Laplace transforms") {
  for (double lambda_uv : {50.0, 400.0}) {
    auto e = make_env(0.5, 0.0, 1.0, lambda_uv);
    const double d = 1.0 / lambda_uv;
    for (double r : {0.0, 0.5, 0.9, 2.0, 6.0}) {
      const double want = prefactor(e) * phi_half_oracle(d, r);
      const auto q = phi_quadrature(e, r);
      CHECK(std::abs(q.value - want) <= 1e-8 + 1e-7 * std::abs(want));
    }
  }
}

TEST_CASE("quadrature examples") {
  SUBCASE("super-Ohmic vacuum r = 0 approaches v Lambda / pi") {
    auto e = make_env(0.5, 0.0, 100.0, 1.0);
    CHECK(f_quadrature(e, 0.0, false).value == doctest::Approx(1.0 / pi).epsilon(1e-3));
    CHECK(f_closed_form(e, 0.0, false).value == doctest::Approx(1.0 / pi).epsilon(1e-12));
  }
  SUBCASE("sub-Ohmic r = 0 approaches delta / 2") {
    auto e = make_env(-0.5, 1e-4, 2.0, 1e5);
    CHECK(f_quadrature(e, 0.0, true).value == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("vanishing window kills both kernels") {
    auto big = make_env(0.5, 0.0, 1.0, 10.0);
    auto tiny = big;
    tiny.delta = 1e-12;
    const double f1 = f_quadrature(big, 0.5, false).value;
    CHECK(std::abs(f_quadrature(tiny, 0.5, false).value) < 1e-6 * std::abs(f1));
    const double p1 = phi_quadrature(big, 0.5).value;
    CHECK(std::abs(phi_quadrature(tiny, 0.5).value) < 1e-6 * std::abs(p1));
  }
  SUBCASE("super-Ohmic Phi vanishes outside the light cone") {
    auto e = make_env(0.5, 0.0, 1.0, 1e3);
    CHECK(std::abs(phi_quadrature(e, 2.0).value) < 0.01 * std::abs(phi_closed_form(e, 0.5).value));
  }
}

TEST_CASE("quadrature refuses divergent or malformed requests") {
  auto e = make_env(0.5, 0.0, 1.0, 10.0);
  e.lambda_uv = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(f_quadrature(e, 0.0, false), InvalidParam);
  CHECK_THROWS_AS(phi_quadrature(e, 0.5), InvalidParam);
  auto s = make_env(-1.0, 0.1, 1.0, 10.0);
  CHECK_THROWS_AS(f_quadrature(s, 0.0, true), InvalidParam);
  QuadratureOptions bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(f_quadrature(make_env(0.5, 0.1, 1.0, 10.0), 0.0, true, bad), InvalidParam);
  QuadratureOptions tight;
  tight.max_panels = 3;
  CHECK_THROWS_AS(f_quadrature(make_env(0.5, 0.1, 1.0, 10.0), 30.0, true, tight), NonConvergence);
}

TEST_CASE("F at r = 0 is positive and non-increasing in beta") {
  for (double s : {0.5, 0.0, -0.5, 0.3}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double beta : {0.0, 0.001, 0.01, 0.1, 0.5, 2.0}) {
      const double f = f_quadrature(make_env(s, beta, 1.0, 100.0), 0.0, true).value;
      CHECK(f > 0.0);
      CHECK(f <= prev * (1.0 + 1e-12));
      prev = f;
    }
    CHECK(phi_quadrature(make_env(s, 0.0, 1.0, 100.0), 0.0).value > 0.0);
  }
}

TEST_CASE("regime classification") {
  auto e = make_env(0.5, 1e-9, 1e-7, 1.0);
  e.v = 1e8;
  CHECK(classify_regime(e, 0.0).thermal == ThermalFlag::thermal);
  CHECK(classify_regime(e, 1e-5).causal == CausalFlag::timelike);
  CHECK(classify_regime(e, 20.0).causal == CausalFlag::spacelike);
  CHECK(classify_regime(e, 10.0).causal == CausalFlag::spacelike);
  e.beta = e.delta;
  CHECK(classify_regime(e, 0.0).thermal == ThermalFlag::vacuum);
}

TEST_CASE("reduction to model couplings") {
  auto e = make_env(0.5, 0.05, 1.0, 1e4);
  SUBCASE("xi is lambda squared times the local kernel") {
    const double f0 = f_kernel(e, 0.0, true).value;
    const double lam = std::sqrt(0.8814 / f0);
    const auto k = reduce_to_model(e, lam, ModelVariant::super_local);
    CHECK(k.xi == doctest::Approx(0.8814).epsilon(1e-12));
    CHECK(k.eta == 0.0);
    CHECK(k.j_complex == cplx{});
    CHECK_FALSE(k.has_imaginary_part());
  }
  SUBCASE("zero coupling") {
    for (auto v : {ModelVariant::super_local, ModelVariant::super_imag}) {
      CHECK(reduce_to_model(e, 0.0, v).xi == 0.0);
    }
    CHECK(reduce_to_model(make_env(0.0, 0.05, 1.0, 1e4), 0.0, ModelVariant::ohmic_longrange).xi ==
          0.0);
  }
  SUBCASE("eta is small in the thermal regime") {
    const auto k = reduce_to_model(e, 1.0, ModelVariant::super_imag);
    CHECK(std::abs(k.eta) < 0.2);
    CHECK(k.eta != 0.0);
    CHECK(k.j_complex == cplx(0.0, k.eta));
    const double oracle = (1.0 / pi) / std::sqrt(1.0 - 0.5) / (1.0 / (pi * 0.05));
    CHECK(k.eta == doctest::Approx(oracle).epsilon(1e-12));
  }
  SUBCASE("Ohmic split") {
    auto o = make_env(0.0, 0.01, 1.0, 1e4);
    const auto k = reduce_to_model(o, 2.0, ModelVariant::ohmic_longrange);
    const double f0 = std::log(100.0) / pi;
    CHECK(k.delta_f == doctest::Approx(f0 / 1.72).epsilon(1e-12));
    CHECK(k.fbar_ratio() == doctest::Approx(0.72));
    CHECK(k.phi_bar == 0.0);
    CHECK(k.xi == doctest::Approx(4.0 * f0 / 1.72).epsilon(1e-12));
  }
  SUBCASE("variant mismatch and bad coupling") {
    CHECK_THROWS_AS(reduce_to_model(e, 1.0, ModelVariant::ohmic_longrange), VariantMismatch);
    CHECK_THROWS_AS(reduce_to_model(make_env(0.0, 0.01, 1.0, 1e4), 1.0, ModelVariant::super_local),
                    VariantMismatch);
    CHECK_THROWS_AS(reduce_to_model(e, -1.0, ModelVariant::super_local), InvalidParam);
  }
  SUBCASE("general kernel table keys") {
    ReduceOptions opts;
    opts.max_distance_key = 8;
    const auto k = reduce_to_model(e, 1.0, ModelVariant::general_kernel, opts);
    REQUIRE(k.kernel_table);
    for (int key : {0, 1, 2, 4, 5, 8}) CHECK(k.kernel_table->count(key) == 1);
    CHECK(k.kernel_table->count(3) == 0);
    CHECK(k.kernel_table->at(0).f_thermal == 1.0);
    CHECK(k.j_complex.real() == doctest::Approx(k.kernel_table->at(2).f_thermal));
  }
  SUBCASE("variant names round trip") {
    for (auto v : {ModelVariant::super_local, ModelVariant::super_imag,
                   ModelVariant::ohmic_longrange, ModelVariant::general_kernel}) {
      CHECK(parse_variant(to_string(v)) == v);
    }
    CHECK_THROWS_AS(parse_variant("nope"), InvalidParam);
  }
}
