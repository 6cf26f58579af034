#pragma once

#include <array>
#include <complex>

namespace tst::exact {

/// Boundary-field sign pattern (alpha_t, alpha_b, beta_t, beta_b). The index
/// sets bit 0..3 when the corresponding field is -1.
struct BoundaryPattern {
  int alpha_t = 1;
  int alpha_b = 1;
  int beta_t = 1;
  int beta_b = 1;

  int index() const {
    return (alpha_t < 0 ? 1 : 0) | (alpha_b < 0 ? 2 : 0) | (beta_t < 0 ? 4 : 0) |
           (beta_b < 0 ? 8 : 0);
  }
  int correlator() const { return alpha_t * alpha_b * beta_t * beta_b; }
  static BoundaryPattern from_index(int idx) {
    return {idx & 1 ? -1 : 1, idx & 2 ? -1 : 1, idx & 4 ? -1 : 1, idx & 8 ? -1 : 1};
  }
};

/// The six representatives left after time reversal and top/bottom
/// reflection, with their multiplicities among the 16 patterns.
struct Representative {
  BoundaryPattern pattern;
  int multiplicity;
};
inline constexpr std::array<Representative, 6> kRepresentatives = {{
    {{+1, +1, +1, +1}, 2},
    {{+1, +1, +1, -1}, 4},
    {{+1, -1, +1, +1}, 4},
    {{+1, +1, -1, -1}, 2},
    {{+1, -1, +1, -1}, 2},
    {{+1, -1, -1, +1}, 2},
}};

/// A complex number stored as mantissa * exp(log_scale).
struct ScaledComplex {
  std::complex<double> mantissa{};
  double log_scale = 0.0;
};

/// Partition sums for one lattice and coupling. All c-values share log_scale;
/// entries not computed stay zero.
struct AmplitudePair {
  std::complex<double> z{};      ///< mantissa of Z
  std::complex<double> b_corr{}; ///< boundary correlator, already divided by Z
  std::array<std::complex<double>, 16> c_table{};
  double log_scale = 0.0;

  double fidelity() const { return 1.0 / (1.0 + b_corr.real()); }
  /// ln |Re Z| including the common scale.
  double log_z() const;
};

/// Z and B from all 16 c-values.
AmplitudePair assemble_full(const std::array<ScaledComplex, 16>& c);
/// Z and B from the six representatives only (other entries ignored).
AmplitudePair assemble_symmetric(const std::array<ScaledComplex, 16>& c);

/// fidelity with its validity flag; complex couplings can push 1 + B <= 0.
struct ObservableReport {
  double energy = 0.0;
  double heat_capacity = 0.0;
  double fidelity = 1.0;
  double b_corr = 0.0;
  bool valid = true;
};

ObservableReport make_report(const AmplitudePair& amps);

} // namespace tst::exact
