#include "tst/exact/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tst::exact {

namespace {

double common_scale(const std::array<ScaledComplex, 16>& c, bool reps_only) {
  double scale = -std::numeric_limits<double>::infinity();
  auto consider = [&](const ScaledComplex& v) {
    if (v.mantissa != 0.0) scale = std::max(scale, v.log_scale);
  };
  if (reps_only) {
    for (const auto& r : kRepresentatives) consider(c[r.pattern.index()]);
  } else {
    for (const auto& v : c) consider(v);
  }
  return std::isfinite(scale) ? scale : 0.0;
}

std::complex<double> rescaled(const ScaledComplex& v, double scale) {
  return v.mantissa == 0.0 ? std::complex<double>{} : v.mantissa * std::exp(v.log_scale - scale);
}

} // namespace

double AmplitudePair::log_z() const { return std::log(std::abs(z.real())) + log_scale; }

AmplitudePair assemble_full(const std::array<ScaledComplex, 16>& c) {
  AmplitudePair out;
  out.log_scale = common_scale(c, false);
  std::complex<double> even{};
  std::complex<double> odd{};
  for (int idx = 0; idx < 16; ++idx) {
    out.c_table[idx] = rescaled(c[idx], out.log_scale);
    (BoundaryPattern::from_index(idx).correlator() > 0 ? even : odd) += out.c_table[idx];
  }
  out.z = even + odd;
  out.b_corr = (even - odd) / out.z;
  return out;
}

AmplitudePair assemble_symmetric(const std::array<ScaledComplex, 16>& c) {
  AmplitudePair out;
  out.log_scale = common_scale(c, true);
  std::complex<double> even{};
  std::complex<double> odd{};
  for (const auto& r : kRepresentatives) {
    const int idx = r.pattern.index();
    out.c_table[idx] = rescaled(c[idx], out.log_scale);
    const auto weighted = static_cast<double>(r.multiplicity) * out.c_table[idx];
    (r.pattern.correlator() > 0 ? even : odd) += weighted;
  }
  out.z = even + odd;
  out.b_corr = (even - odd) / out.z;
  return out;
}

ObservableReport make_report(const AmplitudePair& amps) {
  ObservableReport rep;
  rep.b_corr = amps.b_corr.real();
  rep.fidelity = 1.0 / (1.0 + rep.b_corr);
  rep.valid = rep.b_corr >= -1e-6 && 1.0 + rep.b_corr > 0.0;
  return rep;
}

} // namespace tst::exact
