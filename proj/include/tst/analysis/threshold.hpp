#pragma once

#include "tst/env/couplings.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tst::analysis {

/// ln(1 + sqrt 2), the square-lattice Ising critical point in xi = 2K.
inline constexpr double kIsingCriticalXi = 0.88137358701954302;
/// Ohmic threshold constant in gamma = lambda^2 Delta F.
inline constexpr double kOhmicCriticalGamma = 0.475;

struct CriticalCoupling {
  double lambda_c = 0.0;
  double gamma_c = 0.0;
  double kernel = 0.0; ///< F(Delta;0;beta), or Delta F for the Ohmic case
  env::KernelMethod method = env::KernelMethod::closed_form;
  std::string scaling; ///< the proportionality the threshold obeys
  /// The constant is a convention and only the scaling is meaningful.
  bool scaling_only = false;
};

/// lambda_c = sqrt(ln(1+sqrt2) / F(Delta;0;beta)) for s = 1/2.
CriticalCoupling critical_coupling_super(const env::EnvironmentSpec& env);
/// lambda_c = sqrt(0.475 / Delta F) for s = 0, Delta F = F / (1 + fbar_ratio).
CriticalCoupling critical_coupling_ohmic(const env::EnvironmentSpec& env,
                                         double fbar_ratio = env::kOhmicFbarRatio);
/// s = -1/2: the super-Ohmic constant applied to the thermal F, flagged as a
/// scaling statement (lambda_c ~ sqrt(omega0 / Delta)).
CriticalCoupling critical_coupling_subohmic(const env::EnvironmentSpec& env);

/// 1 / (1 + tanh(xi / 2)) for an unprotected qubit at xi = lambda^2 F.
double single_qubit_fidelity_xi(double xi);
double single_qubit_fidelity(double lambda_coupling, const env::EnvironmentSpec& env);

/// lambda = sqrt(gamma / unit), where unit is the kernel that defines gamma.
double lambda_from_gamma(double gamma, double unit);

struct CurvePoint {
  double gamma = 0.0;
  double fidelity = 0.0;
  double stderr_ = 0.0;
};

struct FidelityCurve {
  int nx = 0;
  int ny = 0;
  std::vector<CurvePoint> points;

  /// Throws InvalidParam unless gammas increase strictly and fidelities lie in [0, 1].
  void validate() const;
};

struct PairCrossing {
  std::pair<int, int> size_a;
  std::pair<int, int> size_b;
  double gamma = 0.0;
  double gamma_err = 0.0;
  /// The pair changed sign more than once; the crossing nearest the ensemble
  /// median was kept.
  bool ambiguous = false;
};

struct ThresholdResult {
  double gamma_c = 0.0;
  double gamma_c_err = 0.0;
  double lambda_c = 0.0; ///< zero until back-converted
  std::vector<PairCrossing> pair_crossings;
  std::string method_note;
};

struct CrossingOptions {
  int bootstrap = 200;
  std::uint64_t seed = 20240607;
};

/// Pairwise crossings of linearly interpolated curves, combined by an
/// error-weighted mean; errors from a parametric bootstrap of the points.
/// Throws NoCrossing when no pair changes sign.
ThresholdResult find_crossing(std::vector<FidelityCurve> curves, const CrossingOptions& opts = {});

nlohmann::json to_json(const ThresholdResult& result);
nlohmann::json to_json(const env::EnvironmentSpec& env);

} // namespace tst::analysis
