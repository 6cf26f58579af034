#pragma once

#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <string>

namespace tst::env {

/// Physical description of the bosonic bath and the qubit array.
///
/// Times are in seconds (beta follows the hbar/k_B T convention), lengths in
/// meters, frequencies in rad/s. The bath is two dimensional with linear
/// dispersion omega_k = v|k| and form factor g_k = |k|^s; neither is stored.
/// `lambda_uv` may be +infinity to request the cutoff-free limit, which only
/// the closed forms can evaluate.
struct EnvironmentSpec {
  double s = 0.5;
  double beta = 0.0;
  double delta = 1.0;
  double v = 1.0;
  double lambda_uv = 1.0;
  double omega0 = 1.0;
  double a = 1.0;
  int dimension = 2;

  /// Throws InvalidParam when a field violates its domain.
  void validate() const;
};

enum class ThermalFlag { vacuum, thermal };
enum class CausalFlag { timelike, spacelike };

struct RegimeTag {
  ThermalFlag thermal = ThermalFlag::vacuum;
  CausalFlag causal = CausalFlag::timelike;
};

enum class KernelMethod { quadrature, closed_form };

struct KernelValue {
  double value = 0.0;
  KernelMethod method = KernelMethod::quadrature;
  double est_error = 0.0;
};

struct QuadratureOptions {
  double abs_tol = 1e-8;
  /// Relative tolerance accepted in place of abs_tol for large kernels.
  double rel_tol = 1e-10;
  /// Panel count after which the integral is declared non-convergent.
  long max_panels = 4'000'000;
  /// Envelope fraction defining the upper integration limit.
  double envelope_cutoff = 1e-12;
};

/// Separation ratios the closed forms require ("much larger" made concrete).
struct RegimeMargins {
  double max_beta_over_delta = 0.1;
  double min_distance_ratio = 10.0;
};

KernelValue f_quadrature(const EnvironmentSpec& env, double r, bool use_beta,
                         const QuadratureOptions& opts = {});
KernelValue phi_quadrature(const EnvironmentSpec& env, double r,
                           const QuadratureOptions& opts = {});

KernelValue f_closed_form(const EnvironmentSpec& env, double r, bool use_beta,
                          const RegimeMargins& margins = {});
KernelValue phi_closed_form(const EnvironmentSpec& env, double r);

RegimeTag classify_regime(const EnvironmentSpec& env, double r);

/// True when s is one of the three tabulated spectral exponents.
bool has_closed_form(double s);

/// Closed form when tabulated and inside its regime, quadrature otherwise.
KernelValue f_kernel(const EnvironmentSpec& env, double r, bool use_beta);
KernelValue phi_kernel(const EnvironmentSpec& env, double r);

// ---------------------------------------------------------------------------
// Reduction to the dimensionless statistical model.

enum class ModelVariant { super_local, super_imag, ohmic_longrange, general_kernel };

std::string to_string(ModelVariant v);
ModelVariant parse_variant(const std::string& name);

/// Kernel values at one qubit separation, already divided by F(Delta;0;beta).
struct KernelEntry {
  double f_vacuum = 0.0;  ///< F(Delta; r; 0)
  double f_thermal = 0.0; ///< F(Delta; r; beta)
  double phi = 0.0;       ///< Phi(Delta; r)
};

/// Keyed by 4 r^2 with r in units of the lattice spacing; qubit midpoints sit
/// on a half-integer grid so the key is an exact integer.
using KernelTable = std::map<int, KernelEntry>;

inline constexpr double kOhmicFbarRatio = 0.72;

struct ModelCouplings {
  ModelVariant variant = ModelVariant::super_local;
  /// Fictitious inverse temperature. lambda^2 F(Delta;0;beta) for the
  /// super-Ohmic and general variants, lambda^2 Delta F for ohmic_longrange.
  double xi = 0.0;
  double eta = 0.0;
  std::complex<double> j_complex{};
  double delta_f = 0.0;
  double f_bar = 0.0;
  double phi_bar = 0.0;
  /// Raw kernel that xi is measured in (F(Delta;0;beta) or Delta F).
  double xi_unit = 1.0;
  KernelMethod unit_method = KernelMethod::closed_form;
  std::optional<KernelTable> kernel_table;

  /// F-bar and Phi-bar in units of Delta F.
  double fbar_ratio() const { return delta_f != 0.0 ? f_bar / delta_f : 0.0; }
  double phibar_ratio() const { return delta_f != 0.0 ? phi_bar / delta_f : 0.0; }
  bool has_imaginary_part() const;
};

struct ReduceOptions {
  double fbar_ratio = kOhmicFbarRatio;
  double phibar_ratio = 0.0;
  /// Largest 4 r^2 key tabulated for general_kernel.
  int max_distance_key = 0;
};

ModelCouplings reduce_to_model(const EnvironmentSpec& env, double lambda_coupling,
                               ModelVariant variant, const ReduceOptions& opts = {});

/// The raw kernel xi is measured in for this variant (see ModelCouplings::xi_unit).
KernelValue xi_unit_kernel(const EnvironmentSpec& env, ModelVariant variant,
                           double fbar_ratio = kOhmicFbarRatio);

} // namespace tst::env
