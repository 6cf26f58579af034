#include "tst/cli/config.hpp"
#include "tst/error.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#ifndef TST_PRESET_DIR
#define TST_PRESET_DIR "presets"
#endif

namespace tst::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ValidationError(key + ": not a number: '" + v + "'");
  return out;
}

long to_long(const std::string& key, const std::string& v) {
  long out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ValidationError(key + ": not an integer: '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw ValidationError(key + ": not an unsigned integer: '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(key + ": expected true or false");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(key, item));
  return out;
}

// "4x6" or "5" (square).
std::pair<int, int> to_size(const std::string& key, const std::string& v) {
  const auto x = v.find('x');
  if (x == std::string::npos) {
    const int n = static_cast<int>(to_long(key, v));
    return {n, n};
  }
  return {static_cast<int>(to_long(key, trim(v.substr(0, x)))),
          static_cast<int>(to_long(key, trim(v.substr(x + 1))))};
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T, typename F> std::string join(const std::vector<T>& v, F f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
  return out;
}

} // namespace

std::string to_string(Engine e) {
  switch (e) {
  case Engine::auto_: return "auto";
  case Engine::mc: return "mc";
  case Engine::binder: return "binder";
  case Engine::brute: return "brute";
  }
  return "?";
}

Engine parse_engine(const std::string& name) {
  for (Engine e : {Engine::auto_, Engine::mc, Engine::binder, Engine::brute}) {
    if (to_string(e) == name) return e;
  }
  throw ValidationError("engine: unknown engine '" + name + "' (mc, binder, brute, auto)");
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  RunConfig cfg = std::move(base);
  std::optional<double> gmin, gmax, gstep;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"variant", [&](auto&, auto& v) { cfg.variant = env::parse_variant(v); }},
      {"s", [&](auto& k, auto& v) { cfg.env.s = to_double(k, v); }},
      {"beta", [&](auto& k, auto& v) { cfg.env.beta = to_double(k, v); }},
      {"delta", [&](auto& k, auto& v) { cfg.env.delta = to_double(k, v); }},
      {"v", [&](auto& k, auto& v) { cfg.env.v = to_double(k, v); }},
      {"lambda_uv", [&](auto& k, auto& v) { cfg.env.lambda_uv = to_double(k, v); }},
      {"omega0", [&](auto& k, auto& v) { cfg.env.omega0 = to_double(k, v); }},
      {"a", [&](auto& k, auto& v) { cfg.env.a = to_double(k, v); }},
      {"dimension", [&](auto& k, auto& v) { cfg.env.dimension = static_cast<int>(to_long(k, v)); }},
      {"gamma", [&](auto& k, auto& v) { cfg.gamma = to_doubles(k, v); cfg.lambda.clear(); }},
      {"gamma_min", [&](auto& k, auto& v) { gmin = to_double(k, v); }},
      {"gamma_max", [&](auto& k, auto& v) { gmax = to_double(k, v); }},
      {"gamma_step", [&](auto& k, auto& v) { gstep = to_double(k, v); }},
      {"lambda", [&](auto& k, auto& v) { cfg.lambda = to_doubles(k, v); cfg.gamma.clear(); }},
      {"sizes",
       [&](auto& k, auto& v) {
         cfg.sizes.clear();
         for (const auto& item : split_list(v)) cfg.sizes.push_back(to_size(k, item));
       }},
      {"engine", [&](auto&, auto& v) { cfg.engine = parse_engine(v); }},
      {"sweeps", [&](auto& k, auto& v) { cfg.schedule.n_sweeps = to_long(k, v); }},
      {"burn", [&](auto& k, auto& v) { cfg.schedule.n_burn = to_long(k, v); }},
      {"bins", [&](auto& k, auto& v) { cfg.schedule.n_bins = static_cast<int>(to_long(k, v)); }},
      {"stride", [&](auto& k, auto& v) { cfg.schedule.measure_stride = static_cast<int>(to_long(k, v)); }},
      {"seed", [&](auto& k, auto& v) { cfg.schedule.seed = to_u64(k, v); }},
      {"warm_start", [&](auto& k, auto& v) { cfg.warm_start = to_bool(k, v); }},
      {"eta", [&](auto& k, auto& v) { cfg.eta = to_double(k, v); }},
      {"fbar_ratio", [&](auto& k, auto& v) { cfg.fbar_ratio = to_double(k, v); }},
      {"phibar_ratio", [&](auto& k, auto& v) { cfg.phibar_ratio = to_double(k, v); }},
      {"binder_width", [&](auto& k, auto& v) { cfg.binder_width = static_cast<int>(to_long(k, v)); }},
      {"bootstrap", [&](auto& k, auto& v) { cfg.bootstrap = static_cast<int>(to_long(k, v)); }},
      {"kernel_distances", [&](auto& k, auto& v) { cfg.kernel_distances = to_doubles(k, v); }},
      {"out", [&](auto&, auto& v) { cfg.out_dir = v; }},
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const auto key_col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(key_col) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw ParseError("line " + std::to_string(line_no) + ", column " + std::to_string(key_col) +
                       ": unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ", column " +
                       std::to_string(static_cast<int>(eq) + 2) + ": missing value for '" + key + "'");
    }
    try {
      it->second(key, value);
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(key + ": " + e.what());
    }
  }

  if (gmin || gmax || gstep) {
    if (!(gmin && gmax && gstep)) {
      throw ValidationError("gamma_min: gamma_min, gamma_max and gamma_step go together");
    }
    if (!(*gstep > 0.0) || !(*gmax >= *gmin)) {
      throw ValidationError("gamma_step: needs gamma_step > 0 and gamma_max >= gamma_min");
    }
    cfg.gamma.clear();
    cfg.lambda.clear();
    const long n = std::lround(std::floor((*gmax - *gmin) / *gstep + 1e-9));
    // rounded so that 0.7 + 2 * 0.05 prints as 0.8
    for (long i = 0; i <= n; ++i) {
      cfg.gamma.push_back(std::round((*gmin + static_cast<double>(i) * *gstep) * 1e12) / 1e12);
    }
  }
  return cfg;
}

void validate_config(RunConfig& cfg) {
  try {
    cfg.env.validate();
  } catch (const Error& e) {
    throw ValidationError(std::string("env: ") + e.what());
  }
  const bool super = cfg.variant == env::ModelVariant::super_local ||
                     cfg.variant == env::ModelVariant::super_imag;
  if (super && !(cfg.env.s > 0.0)) throw ValidationError("variant: super-Ohmic variants need s > 0");
  if (cfg.variant == env::ModelVariant::ohmic_longrange && cfg.env.s != 0.0) {
    throw ValidationError("variant: ohmic_longrange needs s = 0");
  }

  for (const auto& [nx, ny] : cfg.sizes) {
    if (nx < 1 || ny < 1) throw ValidationError("sizes: lattice dimensions must be positive");
  }
  if (!cfg.lambda.empty()) {
    env::KernelValue unit;
    try {
      unit = env::xi_unit_kernel(cfg.env, cfg.variant, cfg.fbar_ratio);
    } catch (const Error& e) {
      throw ValidationError(std::string("lambda: cannot convert to gamma: ") + e.what());
    }
    cfg.gamma.clear();
    for (double l : cfg.lambda) cfg.gamma.push_back(l * l * unit.value);
  }
  for (std::size_t i = 0; i < cfg.gamma.size(); ++i) {
    if (!(cfg.gamma[i] >= 0.0)) throw ValidationError("gamma: values must be >= 0");
    if (i > 0 && !(cfg.gamma[i] > cfg.gamma[i - 1])) {
      throw ValidationError("gamma: grid must be strictly ascending");
    }
  }

  const bool complex_coupling =
      (cfg.variant == env::ModelVariant::super_imag && (!cfg.eta || *cfg.eta != 0.0)) ||
      (cfg.variant == env::ModelVariant::ohmic_longrange && cfg.phibar_ratio != 0.0) ||
      cfg.variant == env::ModelVariant::general_kernel;
  if (cfg.engine == Engine::mc && complex_coupling) {
    throw ValidationError("engine: Monte Carlo cannot sample complex couplings (sign problem)");
  }
  if (cfg.engine == Engine::binder && (cfg.variant == env::ModelVariant::ohmic_longrange ||
                                       cfg.variant == env::ModelVariant::general_kernel)) {
    throw ValidationError("engine: Binder recursion needs a nearest-neighbour model");
  }
  if (cfg.engine == Engine::mc && cfg.variant == env::ModelVariant::general_kernel) {
    throw ValidationError("engine: general_kernel runs only with brute");
  }
  if (cfg.binder_width < 1) throw ValidationError("binder_width: must be positive");
  if (cfg.bootstrap < 0) throw ValidationError("bootstrap: must be >= 0");
  if (!(cfg.fbar_ratio >= 0.0)) throw ValidationError("fbar_ratio: must be >= 0");
  try {
    cfg.schedule.validate();
  } catch (const Error& e) {
    throw ValidationError(std::string("sweeps: ") + e.what());
  }
}

std::string RunConfig::echo() const {
  std::ostringstream out;
  out << "variant = " << env::to_string(variant) << "\n"
      << "s = " << fmt(env.s) << "\n"
      << "beta = " << fmt(env.beta) << "\n"
      << "delta = " << fmt(env.delta) << "\n"
      << "v = " << fmt(env.v) << "\n"
      << "lambda_uv = " << fmt(env.lambda_uv) << "\n"
      << "omega0 = " << fmt(env.omega0) << "\n"
      << "a = " << fmt(env.a) << "\n"
      << "dimension = " << env.dimension << "\n"
      << "gamma = " << join(gamma, fmt) << "\n";
  if (!lambda.empty()) out << "lambda = " << join(lambda, fmt) << "\n";
  out << "sizes = "
      << join(sizes, [](const std::pair<int, int>& s) {
           return std::to_string(s.first) + "x" + std::to_string(s.second);
         })
      << "\n"
      << "engine = " << to_string(engine) << "\n"
      << "sweeps = " << schedule.n_sweeps << "\n"
      << "burn = " << schedule.burn() << "\n"
      << "bins = " << schedule.n_bins << "\n"
      << "stride = " << schedule.measure_stride << "\n"
      << "seed = " << schedule.seed << "\n"
      << "warm_start = " << (warm_start ? "true" : "false") << "\n";
  if (eta) out << "eta = " << fmt(*eta) << "\n";
  out << "fbar_ratio = " << fmt(fbar_ratio) << "\n"
      << "phibar_ratio = " << fmt(phibar_ratio) << "\n"
      << "binder_width = " << binder_width << "\n"
      << "bootstrap = " << bootstrap << "\n";
  if (!kernel_distances.empty()) out << "kernel_distances = " << join(kernel_distances, fmt) << "\n";
  out << "out = " << out_dir << "\n";
  return out.str();
}

std::string preset_path(const std::string& name) {
  for (const std::filesystem::path& dir : {std::filesystem::path(TST_PRESET_DIR),
                                          std::filesystem::path("presets")}) {
    const auto p = dir / (name + ".cfg");
    if (std::filesystem::exists(p)) return p.string();
  }
  throw ValidationError("preset: no preset named '" + name + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

} // namespace tst::cli
