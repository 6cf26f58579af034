#include "tst/analysis/threshold.hpp"
#include "tst/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace tst::analysis {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double interpolate(const std::vector<CurvePoint>& pts, const std::vector<double>& f, double g) {
  auto it = std::lower_bound(pts.begin(), pts.end(), g,
                             [](const CurvePoint& p, double x) { return p.gamma < x; });
  const auto i = static_cast<std::size_t>(it - pts.begin());
  if (i < pts.size() && pts[i].gamma == g) return f[i];
  const double t = (g - pts[i - 1].gamma) / (pts[i].gamma - pts[i - 1].gamma);
  return f[i - 1] + t * (f[i] - f[i - 1]);
}

// Every sign change of f_a - f_b on the union grid of the overlap.
std::vector<double> pair_roots(const FidelityCurve& a, const std::vector<double>& fa,
                               const FidelityCurve& b, const std::vector<double>& fb) {
  const double lo = std::max(a.points.front().gamma, b.points.front().gamma);
  const double hi = std::min(a.points.back().gamma, b.points.back().gamma);
  std::vector<double> grid;
  for (const auto* c : {&a, &b}) {
    for (const auto& p : c->points) {
      if (p.gamma >= lo && p.gamma <= hi) grid.push_back(p.gamma);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> roots;
  double prev_g = kNaN, prev_d = kNaN;
  for (double g : grid) {
    const double d = interpolate(a.points, fa, g) - interpolate(b.points, fb, g);
    if (d == 0.0) {
      roots.push_back(g);
    } else if (!std::isnan(prev_d) && prev_d != 0.0 && (prev_d < 0.0) != (d < 0.0)) {
      roots.push_back(prev_g + (g - prev_g) * prev_d / (prev_d - d));
    }
    prev_g = g;
    prev_d = d;
  }
  return roots;
}

double nearest(const std::vector<double>& roots, double ref) {
  double best = roots.front();
  for (double r : roots) {
    if (std::abs(r - ref) < std::abs(best - ref)) best = r;
  }
  return best;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> fidelities(const FidelityCurve& c) {
  std::vector<double> f;
  for (const auto& p : c.points) f.push_back(p.fidelity);
  return f;
}

double weighted_mean(const std::vector<double>& x, const std::vector<double>& w) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i])) continue;
    num += w[i] * x[i];
    den += w[i];
  }
  return den > 0.0 ? num / den : kNaN;
}

double stddev(const std::vector<double>& x) {
  double mean = 0.0;
  int n = 0;
  for (double v : x) {
    if (!std::isnan(v)) {
      mean += v;
      ++n;
    }
  }
  if (n < 2) return 0.0;
  mean /= n;
  double var = 0.0;
  for (double v : x) {
    if (!std::isnan(v)) var += (v - mean) * (v - mean);
  }
  return std::sqrt(var / (n - 1));
}

} // namespace

void FidelityCurve::validate() const {
  if (points.size() < 2) throw InvalidParam("a fidelity curve needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.fidelity >= 0.0 && p.fidelity <= 1.0 + 1e-9)) {
      throw InvalidParam("fidelity outside [0, 1]");
    }
    if (!(p.stderr_ >= 0.0)) throw InvalidParam("negative standard error");
    if (i > 0 && !(p.gamma > points[i - 1].gamma)) {
      throw InvalidParam("curve gammas must increase strictly");
    }
  }
}

ThresholdResult find_crossing(std::vector<FidelityCurve> curves, const CrossingOptions& opts) {
  if (curves.size() < 2) throw InvalidParam("need at least two curves");
  for (const auto& c : curves) c.validate();
  std::sort(curves.begin(), curves.end(), [](const FidelityCurve& a, const FidelityCurve& b) {
    return std::pair{a.nx, a.ny} < std::pair{b.nx, b.ny};
  });

  struct Pair {
    std::size_t a, b;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = i + 1; j < curves.size(); ++j) pairs.push_back({i, j});
  }

  std::vector<std::vector<double>> base(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) base[i] = fidelities(curves[i]);

  std::vector<std::vector<double>> roots(pairs.size());
  std::vector<double> all_roots;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [a, b] = pairs[k];
    roots[k] = pair_roots(curves[a], base[a], curves[b], base[b]);
    all_roots.insert(all_roots.end(), roots[k].begin(), roots[k].end());
  }
  if (all_roots.empty()) throw NoCrossing("no pair of fidelity curves crosses on the grid");
  const double reference = median(all_roots);

  ThresholdResult out;
  std::vector<std::size_t> crossing_pairs;
  std::vector<double> central;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (roots[k].empty()) continue;
    PairCrossing pc;
    pc.size_a = {curves[pairs[k].a].nx, curves[pairs[k].a].ny};
    pc.size_b = {curves[pairs[k].b].nx, curves[pairs[k].b].ny};
    pc.gamma = nearest(roots[k], reference);
    pc.ambiguous = roots[k].size() > 1;
    out.pair_crossings.push_back(pc);
    crossing_pairs.push_back(k);
    central.push_back(pc.gamma);
  }

  // Parametric bootstrap: redraw every point from N(f, stderr).
  const int nb = std::max(opts.bootstrap, 0);
  std::vector<std::vector<double>> samples(crossing_pairs.size(),
                                           std::vector<double>(static_cast<std::size_t>(nb), kNaN));
#pragma omp parallel for schedule(static)
  for (int r = 0; r < nb; ++r) {
    std::mt19937_64 rng(opts.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r + 1));
    std::normal_distribution<double> normal;
    std::vector<std::vector<double>> f(curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
      for (const auto& p : curves[i].points) f[i].push_back(p.fidelity + p.stderr_ * normal(rng));
    }
    for (std::size_t m = 0; m < crossing_pairs.size(); ++m) {
      const auto& [a, b] = pairs[crossing_pairs[m]];
      const auto rr = pair_roots(curves[a], f[a], curves[b], f[b]);
      if (!rr.empty()) samples[m][static_cast<std::size_t>(r)] = nearest(rr, central[m]);
    }
  }

  std::vector<double> weights(central.size(), 1.0);
  bool any_zero = false;
  for (std::size_t m = 0; m < central.size(); ++m) {
    // spreads at rounding level mean the inputs carried no error
    double err = stddev(samples[m]);
    if (err <= 1e-12 * std::max(1.0, std::abs(central[m]))) err = 0.0;
    out.pair_crossings[m].gamma_err = err;
    if (err == 0.0) any_zero = true;
  }
  if (!any_zero) {
    for (std::size_t m = 0; m < central.size(); ++m) {
      weights[m] = 1.0 / (out.pair_crossings[m].gamma_err * out.pair_crossings[m].gamma_err);
    }
  }
  out.gamma_c = weighted_mean(central, weights);

  std::vector<double> resampled(static_cast<std::size_t>(nb), kNaN);
  for (int r = 0; r < nb; ++r) {
    std::vector<double> x(central.size());
    for (std::size_t m = 0; m < central.size(); ++m) x[m] = samples[m][static_cast<std::size_t>(r)];
    resampled[static_cast<std::size_t>(r)] = weighted_mean(x, weights);
  }
  out.gamma_c_err = stddev(resampled);
  if (out.gamma_c_err <= 1e-12 * std::max(1.0, std::abs(out.gamma_c))) out.gamma_c_err = 0.0;

  std::ostringstream note;
  note << "pairwise linear interpolation over " << curves.size() << " curves, "
       << out.pair_crossings.size() << " of " << pairs.size() << " pairs cross; "
       << (any_zero ? "equal" : "inverse-variance") << " weights; parametric bootstrap with "
       << nb << " resamples";
  int ambiguous = 0;
  for (const auto& pc : out.pair_crossings) ambiguous += pc.ambiguous ? 1 : 0;
  if (ambiguous > 0) note << "; " << ambiguous << " ambiguous pair(s), crossing nearest the median kept";
  out.method_note = note.str();
  return out;
}

nlohmann::json to_json(const ThresholdResult& result) {
  nlohmann::json crossings = nlohmann::json::array();
  for (const auto& pc : result.pair_crossings) {
    crossings.push_back({{"size_a", {pc.size_a.first, pc.size_a.second}},
                         {"size_b", {pc.size_b.first, pc.size_b.second}},
                         {"gamma", pc.gamma},
                         {"gamma_err", pc.gamma_err},
                         {"ambiguous", pc.ambiguous}});
  }
  return {{"gamma_c", result.gamma_c},
          {"gamma_c_err", result.gamma_c_err},
          {"lambda_c", result.lambda_c},
          {"crossings", crossings},
          {"method_note", result.method_note}};
}

nlohmann::json to_json(const env::EnvironmentSpec& env) {
  return {{"s", env.s},           {"beta", env.beta},
          {"delta", env.delta},   {"v", env.v},
          {"lambda_uv", std::isinf(env.lambda_uv) ? nlohmann::json("inf") : nlohmann::json(env.lambda_uv)},
          {"omega0", env.omega0}, {"a", env.a},
          {"dimension", env.dimension}};
}

} // namespace tst::analysis
