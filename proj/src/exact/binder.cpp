#include "tst/exact/binder.hpp"
#include "tst/error.hpp"
#include "tst/model/energy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

namespace tst::exact {

namespace {

using cplx = std::complex<double>;

// A step adds plaquette (k, y). Its weight table is indexed by five sites, two
// bits each (bit 0: mu = -1, bit 1: nu = -1):
//   slot 0 old(k-1), slot 1 old(k), slot 2 old(k+1), slot 3 new(k-1), slot 4 new(k)
// where "old" is row y-1 and "new" is row y. Row 0 only uses slots 3 and 4.
constexpr int kSlots = 5;
constexpr int kTableSize = 1 << (2 * kSlots);

int slot_index(int old_km1, int old_k, int old_kp1, int new_km1, int new_k) {
  return old_km1 | (old_k << 2) | (old_kp1 << 4) | (new_km1 << 6) | (new_k << 8);
}

struct StepTables {
  std::vector<std::vector<cplx>> weight; // one table per plaquette, row-major
  double log_scale = 0.0;
};

void check_width(const model::LatticeGeometry& geom, const BinderOptions& opts) {
  if (geom.nx() > opts.max_width) {
    throw WidthTooLarge("nx = " + std::to_string(geom.nx()) + " exceeds the width budget " +
                        std::to_string(opts.max_width));
  }
}

int slot_of(const model::LatticeGeometry& geom, int step, int plaquette) {
  const int k = geom.plaquette_x(step), y = geom.plaquette_y(step);
  const int x = geom.plaquette_x(plaquette), py = geom.plaquette_y(plaquette);
  if (py == y && x == k) return 4;
  if (py == y && x == k - 1) return 3;
  if (y > 0 && py == y - 1 && x >= k - 1 && x <= k + 1) return x - k + 1;
  throw Error("mass-field term outside the transfer window");
}

// Assign every compiled term to the step that binds its last plaquette and
// tabulate exp(-xi E_step) over the local window. Boundary fields enter as
// fixed signs.
StepTables build_tables(const model::LatticeGeometry& geom, cplx j, double xi,
                        BoundaryPattern boundary) {
  model::MassFieldModel mm;
  mm.j = j;
  const model::CompiledModel cm(geom, mm);
  const int p = geom.num_plaquettes();
  const int fixed[4] = {boundary.alpha_t, boundary.alpha_b, boundary.beta_t, boundary.beta_b};

  struct LocalTerm {
    cplx coef;
    int mask;
  };
  std::vector<std::vector<LocalTerm>> per_step(static_cast<std::size_t>(p));
  for (const auto& t : cm.terms()) {
    cplx coef = t.coef;
    int last = -1;
    for (int i = 0; i < t.size; ++i) {
      const int v = t.vars[i];
      if (v >= 2 * p) {
        coef *= fixed[v - 2 * p];
      } else {
        last = std::max(last, v % p);
      }
    }
    if (last < 0) throw Error("mass-field term without plaquette variables");
    int mask = 0;
    for (int i = 0; i < t.size; ++i) {
      const int v = t.vars[i];
      if (v >= 2 * p) continue;
      const int slot = slot_of(geom, last, v % p);
      mask |= 1 << (2 * slot + (v >= p ? 1 : 0));
    }
    per_step[last].push_back({coef, mask});
  }

  StepTables out;
  out.log_scale = -xi * cm.constant();
  out.weight.resize(static_cast<std::size_t>(p));
  for (int s = 0; s < p; ++s) {
    auto& table = out.weight[s];
    table.resize(kTableSize);
    for (int idx = 0; idx < kTableSize; ++idx) {
      cplx e{};
      for (const auto& lt : per_step[s]) {
        e += (std::popcount(static_cast<unsigned>(idx & lt.mask)) & 1) ? -lt.coef : lt.coef;
      }
      table[idx] = std::exp(-xi * e);
    }
  }
  return out;
}

int digit(std::size_t f, int k) { return static_cast<int>((f >> (2 * k)) & 3U); }

// Divide by the largest modulus and fold it into the scale.
void rescale(std::vector<cplx>& v, double& log_scale) {
  double top = 0.0;
  for (const auto& x : v) top = std::max(top, std::abs(x));
  if (top == 0.0 || !std::isfinite(top)) return;
  for (auto& x : v) x /= top;
  log_scale += std::log(top);
}

ScaledComplex finish(const std::vector<cplx>& row, double log_scale) {
  cplx sum{};
  for (const auto& x : row) sum += x;
  return {sum, log_scale};
}

} // namespace

ScaledComplex binder_partition(const model::LatticeGeometry& geom, std::complex<double> j,
                               double xi, BoundaryPattern boundary, const BinderOptions& opts) {
  check_width(geom, opts);
  const int nx = geom.nx(), ny = geom.ny();
  StepTables tables = build_tables(geom, j, xi, boundary);
  const std::size_t row_states = std::size_t{1} << (2 * nx);

  // buf[(F << 2) | carry]: F is the frontier row, carry the overwritten old site.
  std::vector<cplx> buf(row_states * 4);
  {
    // Row 0, built directly on the row index.
    for (std::size_t f = 0; f < row_states; ++f) {
      cplx w = 1.0;
      for (int k = 0; k < nx; ++k) {
        const int prev = k > 0 ? digit(f, k - 1) : 0;
        w *= tables.weight[geom.plaquette(k, 0)][slot_index(0, 0, 0, prev, digit(f, k))];
      }
      buf[f << 2] = w;
    }
  }

  for (int y = 1; y < ny; ++y) {
    rescale(buf, tables.log_scale);
    for (int k = 0; k < nx; ++k) {
      const auto& table = tables.weight[geom.plaquette(k, y)];
      const std::size_t lo_count = std::size_t{1} << (2 * k);
      const std::size_t hi_count = std::size_t{1} << (2 * (nx - k - 1));
      const std::size_t digit_stride = lo_count << 2;
      const int carries = k == 0 ? 1 : 4;
      for (std::size_t hi = 0; hi < hi_count; ++hi) {
        const int old_kp1 = k + 1 < nx ? static_cast<int>(hi & 3U) : 0;
        for (std::size_t lo = 0; lo < lo_count; ++lo) {
          const int new_km1 = k > 0 ? digit(lo, k - 1) : 0;
          const std::size_t base = ((hi << (2 * (k + 1))) | lo) << 2;
          cplx in[4][4];
          for (int d = 0; d < 4; ++d) {
            for (int c = 0; c < 4; ++c) in[d][c] = buf[base + d * digit_stride + c];
          }
          for (int nk = 0; nk < 4; ++nk) {
            for (int ok = 0; ok < 4; ++ok) {
              cplx acc{};
              for (int c = 0; c < carries; ++c) {
                acc += in[ok][c] * table[slot_index(c, ok, old_kp1, new_km1, nk)];
              }
              buf[base + nk * digit_stride + ok] = acc;
            }
          }
        }
      }
    }
    // Fold the carry away before the next row.
    for (std::size_t f = 0; f < row_states; ++f) {
      const std::size_t b = f << 2;
      buf[b] = buf[b] + buf[b + 1] + buf[b + 2] + buf[b + 3];
      buf[b + 1] = buf[b + 2] = buf[b + 3] = 0.0;
    }
  }

  cplx sum{};
  for (std::size_t f = 0; f < row_states; ++f) sum += buf[f << 2];
  return {sum, tables.log_scale};
}

ScaledComplex binder_partition_reference(const model::LatticeGeometry& geom,
                                         std::complex<double> j, double xi,
                                         BoundaryPattern boundary, const BinderOptions& opts) {
  check_width(geom, opts);
  const int nx = geom.nx(), ny = geom.ny();
  StepTables tables = build_tables(geom, j, xi, boundary);
  const std::size_t row_states = std::size_t{1} << (2 * nx);

  std::vector<cplx> row(row_states);
  for (std::size_t f = 0; f < row_states; ++f) {
    cplx w = 1.0;
    for (int k = 0; k < nx; ++k) {
      const int prev = k > 0 ? digit(f, k - 1) : 0;
      w *= tables.weight[geom.plaquette(k, 0)][slot_index(0, 0, 0, prev, digit(f, k))];
    }
    row[f] = w;
  }

  // Whole-row transfer: new row weight = sum over old rows of the product of
  // the step weights. Quadratic in the row count, so only for small widths.
  for (int y = 1; y < ny; ++y) {
    rescale(row, tables.log_scale);
    std::vector<cplx> next(row_states);
    for (std::size_t g = 0; g < row_states; ++g) {
      cplx acc{};
      for (std::size_t f = 0; f < row_states; ++f) {
        if (row[f] == 0.0) continue;
        cplx w = row[f];
        for (int k = 0; k < nx; ++k) {
          const int old_km1 = k > 0 ? digit(f, k - 1) : 0;
          const int old_kp1 = k + 1 < nx ? digit(f, k + 1) : 0;
          const int new_km1 = k > 0 ? digit(g, k - 1) : 0;
          w *= tables.weight[geom.plaquette(k, y)][slot_index(old_km1, digit(f, k), old_kp1,
                                                              new_km1, digit(g, k))];
        }
        acc += w;
      }
      next[g] = acc;
    }
    row.swap(next);
  }
  return finish(row, tables.log_scale);
}

AmplitudePair binder_amplitudes(const model::LatticeGeometry& geom, std::complex<double> j,
                                double xi, const BinderOptions& opts, bool all_patterns) {
  check_width(geom, opts);
  std::vector<int> patterns;
  if (all_patterns) {
    for (int i = 0; i < 16; ++i) patterns.push_back(i);
  } else {
    for (const auto& r : kRepresentatives) patterns.push_back(r.pattern.index());
  }
  std::array<ScaledComplex, 16> c{};
  const int count = static_cast<int>(patterns.size());
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (int i = 0; i < count; ++i) {
    const int idx = patterns[i];
    c[idx] = binder_partition(geom, j, xi, BoundaryPattern::from_index(idx), opts);
  }
  return all_patterns ? assemble_full(c) : assemble_symmetric(c);
}

ObservableReport binder_fidelity(const model::LatticeGeometry& geom, std::complex<double> j,
                                 double xi, const BinderOptions& opts) {
  const AmplitudePair centre = binder_amplitudes(geom, j, xi, opts);
  ObservableReport rep = make_report(centre);

  const double h = xi != 0.0 ? 1e-4 * std::abs(xi) : 1e-4;
  auto log_z = [&](double x) { return binder_amplitudes(geom, j, x, opts).log_z(); };
  const double l0 = centre.log_z();
  const double lp = log_z(xi + h), lm = log_z(xi - h);
  const double lp2 = log_z(xi + 0.5 * h), lm2 = log_z(xi - 0.5 * h);

  const double d1 = (lp - lm) / (2.0 * h);
  const double d1_half = (lp2 - lm2) / h;
  const double d2 = (lp - 2.0 * l0 + lm) / (h * h);
  const double d2_half = (lp2 - 2.0 * l0 + lm2) / (0.25 * h * h);
  rep.energy = -(4.0 * d1_half - d1) / 3.0;
  rep.heat_capacity = xi * xi * (4.0 * d2_half - d2) / 3.0;
  return rep;
}

std::complex<double> binder_coupling(const env::ModelCouplings& k) {
  switch (k.variant) {
  case env::ModelVariant::super_local: return {};
  case env::ModelVariant::super_imag: return k.j_complex;
  default:
    throw Unsupported("Binder recursion needs a nearest-neighbour model, got " +
                      env::to_string(k.variant));
  }
}

} // namespace tst::exact
