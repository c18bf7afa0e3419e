#include "rkha/commands.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "rkha/algebra.hpp"
#include "rkha/embedding.hpp"
#include "rkha/errors.hpp"
#include "rkha/kernel.hpp"
#include "rkha/markov.hpp"
#include "rkha/serialization.hpp"
#include "rkha/weight_analysis.hpp"
#include "rkha/weights.hpp"

namespace rkha::cli {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& config, const char* key, T fallback) {
  if (!config.contains(key)) return fallback;
  try {
    return config.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

Weight config_weight(const json& config) {
  if (!config.contains("weight")) return Weight::subexponential(1, 1.0, 0.5);
  return weight_from_json(config.at("weight"));
}

std::int64_t config_window(const json& config, const Overrides& o, std::int64_t fallback) {
  const std::int64_t window = o.window.value_or(get_or<std::int64_t>(config, "window", fallback));
  if (window < 1) throw ConfigError("window must be >= 1");
  return window;
}

// Box radius from --trunc-eps, then "trunc_eps", then "radius".
std::int64_t config_radius(const json& config, const Overrides& o, const Weight& w,
                           std::int64_t fallback) {
  std::optional<double> eps = o.trunc_eps;
  if (!eps && config.contains("trunc_eps")) eps = get_or<double>(config, "trunc_eps", 0.0);
  if (eps) {
    if (!(*eps > 0.0)) throw ConfigError("trunc_eps must be positive");
    return w.truncation_radius(*eps);
  }
  const auto radius = get_or<std::int64_t>(config, "radius", fallback);
  if (radius < 0) throw ConfigError("radius must be nonnegative");
  return radius;
}

std::uint64_t config_seed(const json& config, const Overrides& o) {
  return o.seed.value_or(get_or<std::uint64_t>(config, "seed", 0));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

FourierPoly cosine(const Weight& w, double constant, double amplitude) {
  FourierPoly f = FourierPoly::unit(w) * constant;
  std::vector<std::int64_t> c(w.dim(), 0);
  c[0] = 1;
  f.add(FreqVector(c), amplitude / 2);
  c[0] = -1;
  f.add(FreqVector(c), amplitude / 2);
  return f;
}

FourierPoly random_element(const Weight& w, std::int64_t radius, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  FourierPoly f(w);
  for (const auto& g : box(w.dim(), radius)) {
    if (!w.has_value(g)) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    f.set(g, Complex(re, im) * w.xi(g));
  }
  return f;
}

std::vector<FourierPoly> config_polys(const json& config, const char* key, const Weight& w,
                                      std::vector<FourierPoly> fallback) {
  if (!config.contains(key)) return fallback;
  if (!config.at(key).is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  std::vector<FourierPoly> out;
  for (const auto& j : config.at(key)) out.push_back(poly_from_json(j, &w));
  return out;
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("complex numbers are written as a number or [re, im]");
}

// Distance from z to the values of f on the check grid.
double range_distance(const FourierPoly& f, Complex z, std::size_t n) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : sample_on_grid(f, n)) best = std::min(best, std::abs(v - z));
  return best;
}

json window_block(const Weight& w, std::int64_t window, double tol,
                  WindowConstant (*report)(const Weight&, std::int64_t)) {
  try {
    const WindowConstant c = report(w, window);
    const WindowConstant doubled = report(w, 2 * window);
    json j = to_json(c);
    const double change = std::abs(doubled.constant - c.constant) / doubled.constant;
    j["doubled_window_constant"] = doubled.constant;
    j["relative_change"] = change;
    j["stable"] = std::isfinite(c.constant) && change < tol;
    return j;
  } catch (const Unsupported& e) {
    return {{"error", e.what()}};
  }
}

}  // namespace

void cmd_weight_report(const json& config, const Overrides& o, std::ostream& out) {
  const Weight w = config_weight(config);
  const std::int64_t window = config_window(config, o, 16);
  ReportOptions opts;
  opts.tol = get_or<double>(config, "tol", opts.tol);
  opts.max_radius = get_or<std::int64_t>(config, "max_radius", opts.max_radius);
  const ConvolutionReport rep = subconvolutivity_report(w, window, opts);

  json j;
  j["weight"] = to_json(w);
  j["subconvolutivity"] = to_json(rep);
  j["banach_constant"] = rep.verdict == Verdict::certified_bounded
                             ? json(banach_constant(w, rep))
                             : json(nullptr);
  j["subadditivity"] = window_block(w, window, opts.tol, subadditivity_report);
  j["submultiplicativity"] = window_block(w, window, opts.tol, submultiplicativity_report);
  write_json(out, j);
}

void cmd_algebra(const json& config, const Overrides& o, std::ostream& out) {
  const Weight w = config_weight(config);
  const std::int64_t radius = config_radius(config, o, w, 8);
  const auto pairs = get_or<std::size_t>(config, "pairs", 1000);
  const auto bandwidth = get_or<std::int64_t>(config, "bandwidth", 32);
  const double tol = get_or<double>(config, "tol", 1e-8);
  std::mt19937_64 rng(config_seed(config, o));

  json j;
  j["weight"] = to_json(w);
  j["radius"] = radius;

  // Products of two radius-R elements live in the box of radius 2R.
  const ConvolutionReport rep = subconvolutivity_report(w, std::max<std::int64_t>(2 * radius, 1));
  const bool certified = rep.verdict == Verdict::certified_bounded;
  const double bound = certified ? banach_constant(w, rep) : 0.0;
  j["banach_constant"] = certified ? json(bound) : json(nullptr);
  j["subconvolutivity_verdict"] = to_string(rep.verdict);

  double max_ratio = 0.0;
  double involution_defect = 0.0;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const FourierPoly f = random_element(w, radius, rng);
    const FourierPoly g = random_element(w, radius, rng);
    const double nf = hnorm(f);
    const double ratio = hnorm(multiply(f, g)) / (nf * hnorm(g));
    max_ratio = std::max(max_ratio, ratio);
    if (certified && ratio > bound) ++violations;
    involution_defect = std::max(involution_defect, std::abs(hnorm(involution(f)) - nf) / nf);
  }
  j["pairs"] = pairs;
  j["max_ratio"] = max_ratio;
  j["violations"] = certified ? json(violations) : json(nullptr);
  j["involution_max_relative_defect"] = involution_defect;

  const auto inverses = config_polys(config, "invert", w, {cosine(w, 1.0, 0.25), cosine(w, 0.0, 1.0)});
  json inv = json::array();
  for (const auto& f : inverses) {
    json entry = {{"f", to_json(f)}};
    try {
      entry["result"] = to_json(invert(f, bandwidth, tol));
      entry["status"] = "inverted";
    } catch (const NotInvertible&) {
      entry["status"] = "not-invertible";
    }
    inv.push_back(entry);
  }
  j["inversions"] = inv;

  const auto roots = config_polys(config, "sqrt", w, {cosine(w, 1.0, 0.5), cosine(w, 0.0, 1.0)});
  json sq = json::array();
  for (const auto& f : roots) {
    json entry = {{"f", to_json(f)}};
    try {
      const AlgebraResult r = sqrt_positive(f, bandwidth, tol);
      entry["result"] = to_json(r);
      entry["grid_min"] = grid_min_real(r.value, check_grid_size(f, bandwidth));
      entry["status"] = "ok";
    } catch (const DomainError&) {
      entry["status"] = "domain-error";
    }
    sq.push_back(entry);
  }
  j["square_roots"] = sq;

  json probes = json::array();
  if (config.contains("spectrum")) {
    for (const auto& p : config.at("spectrum")) {
      const FourierPoly f = poly_from_json(p.at("f"), &w);
      probes.push_back(to_json(spectrum_probe(f, complex_from_json(p.at("z")), bandwidth, tol)));
    }
  }
  j["spectrum_probes"] = probes;
  write_json(out, j);
}

void cmd_kernel(const json& config, const Overrides& o, std::ostream& out) {
  const Weight w = config_weight(config);
  const std::int64_t radius = config_radius(config, o, w, 64);
  const auto points = get_or<std::size_t>(config, "points", 64);
  if (points == 0) throw ConfigError("points must be positive");

  out << "# kernel sweep along the first coordinate axis\n"
      << "# weight: " << to_json(w).dump() << "\n"
      << "# radius: " << radius << "\n"
      << "# x: first coordinate j/points; l: truncated shape function; err: certified tail bound\n"
      << "x,l,err\n";
  for (std::size_t i = 0; i <= points; ++i) {
    std::vector<double> c(w.dim(), 0.0);
    c[0] = static_cast<double>(i) / static_cast<double>(points);
    const Certified l = shape_function(w, TorusPoint(c), radius);
    out << fmt(c[0]) << ',' << fmt(l.value) << ',' << fmt(l.error) << '\n';
  }
}

void cmd_markov(const json& config, const Overrides& o, std::ostream& out) {
  const auto d = get_or<std::size_t>(config, "d", 1);
  const double p = get_or<double>(config, "p", 1.0);
  const LatticeNorm norm = lattice_norm_from_string(get_or<std::string>(config, "norm", "l2"));
  const MarkovFamily fam = MarkovFamily::catalog(d, p, norm);
  const auto taus = get_or<std::vector<double>>(config, "taus", {0.5, 1.0, 2.0});
  const double tau_prime = get_or<double>(config, "tau_prime", 0.5);
  const std::int64_t window = config_window(config, o, 8);
  const auto grid = get_or<std::size_t>(config, "grid", 64);

  out << "# markov sweep, eta(g) = |g|^p\n"
      << "# d: " << d << ", p: " << fmt(p) << ", norm: " << to_string(norm) << ", window: " << window
      << ", grid: " << grid << ", tau_prime: " << fmt(tau_prime) << "\n"
      << "# C_meas: window subconvolutivity constant; gridmin: min of truncated k_tau(0, .) on the grid;\n"
      << "# massdefect: |integral k_tau(0, .) - 1|; semigroupdefect: max |lambda_tau lambda_tau' - "
         "lambda_(tau+tau')|\n"
      << "tau,C_meas,gridmin,massdefect,semigroupdefect\n";
  for (const double tau : taus) {
    const Weight w = fam.weight_at(tau);
    const std::int64_t radius = config_radius(config, o, w, 64);
    const ConvolutionReport rep = subconvolutivity_report(w, window);
    const MarkovReport m = markov_checks(fam, tau, grid, radius, tau_prime);
    out << fmt(tau) << ',' << fmt(rep.constant) << ',' << fmt(m.grid_min) << ','
        << fmt(m.mass_defect) << ',' << fmt(m.semigroup_defect) << '\n';
  }
}

void cmd_mmd(const json& config, const Overrides& o, std::ostream& out) {
  const Weight w = config_weight(config);
  const std::int64_t radius = config_radius(config, o, w, 32);
  if (config.contains("measures")) {
    const auto& ms = config.at("measures");
    if (!ms.is_array() || ms.size() != 2) throw ConfigError("'measures' must hold exactly two measures");
    out << fmt(mmd(measure_from_json(ms[0]), measure_from_json(ms[1]), w, radius)) << '\n';
    return;
  }
  const TorusPoint x = config.contains("x") ? point_from_json(config.at("x"))
                                            : TorusPoint::identity(w.dim());
  if (x.dim() != w.dim()) throw ConfigError("'x' has the wrong dimension");
  const auto steps = get_or<int>(config, "steps", 20);

  out << "# mmd(delta_x, delta_(x + s e_1)) for s = 2^-n, n = 1..steps\n"
      << "# weight: " << to_json(w).dump() << "\n"
      << "# radius: " << radius << "\n"
      << "separation,mmd\n";
  const AtomicMeasure base = AtomicMeasure::dirac(x);
  for (int n = 1; n <= steps; ++n) {
    const double s = std::ldexp(1.0, -n);
    std::vector<double> shift(w.dim(), 0.0);
    shift[0] = s;
    const AtomicMeasure moved = AtomicMeasure::dirac(x + TorusPoint(shift));
    out << fmt(s) << ',' << fmt(mmd(base, moved, w, radius)) << '\n';
  }
}

void cmd_spectrum(const json& config, const Overrides& o, std::ostream& out) {
  (void)o;
  const Weight w = config_weight(config);
  const FourierPoly f = config.contains("f") ? poly_from_json(config.at("f"), &w) : cosine(w, 1.0, 0.5);
  const auto bandwidth = get_or<std::int64_t>(config, "bandwidth", 32);
  const double tol = get_or<double>(config, "tol", 1e-8);
  const std::size_t n = check_grid_size(f, bandwidth);

  std::vector<Complex> zs;
  if (config.contains("probes")) {
    for (const auto& z : config.at("probes")) zs.push_back(complex_from_json(z));
  } else {
    // Values of f at eight points of the check grid (on the range), and the
    // same values pushed 0.5 off the real axis.
    const auto samples = sample_on_grid(f, n);
    const std::size_t stride = std::max<std::size_t>(samples.size() / 8, 1);
    for (std::size_t i = 0; i < samples.size(); i += stride) {
      zs.push_back(samples[i]);
      zs.push_back(samples[i] + Complex(0.0, 0.5));
    }
  }

  json probes = json::array();
  for (const Complex z : zs) {
    json p = to_json(spectrum_probe(f, z, bandwidth, tol));
    p["distance_to_range"] = range_distance(f, z, n);
    probes.push_back(p);
  }
  write_json(out, {{"f", to_json(f)}, {"bandwidth", bandwidth}, {"check_grid", n}, {"probes", probes}});
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reproducing kernel Hilbert algebras on the torus"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  std::int64_t window = 0;
  double trunc_eps = 0.0;

  using Command = void (*)(const json&, const Overrides&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"weight-report", "Subconvolutivity, subadditivity and submultiplicativity report (JSON)",
       cmd_weight_report},
      {"algebra", "Banach inequality, inversion, square roots and spectrum probes (JSON)", cmd_algebra},
      {"kernel", "Shape function sweep (CSV)", cmd_kernel},
      {"markov", "Markov family sweep over tau (CSV)", cmd_markov},
      {"mmd", "MMD between two measures (scalar) or a Dirac separation sweep (CSV)", cmd_mmd},
      {"spectrum", "Spectrum probes of a single function (JSON)", cmd_spectrum},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_path, "Output file (default: standard output)");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--window", window, "Window radius rho");
    sub->add_option("--trunc-eps", trunc_eps, "Truncate boxes where the tail mass drops below this");
    subs.push_back(sub);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  CLI::App* sub = subs[which];

  Overrides o;
  if (sub->count("--seed")) o.seed = seed;
  if (sub->count("--window")) o.window = window;
  if (sub->count("--trunc-eps")) o.trunc_eps = trunc_eps;

  try {
    json config = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
      try {
        config = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
      }
      if (!config.is_object()) throw ConfigError("config must be a JSON object");
    }

    std::ostringstream buffer;
    std::get<2>(commands[which])(config, o, buffer);
    if (out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot open output file '" + out_path + "'");
      file << buffer.str();
    }
    return kExitOk;
  } catch (const ResourceError& e) {
    err << "resource cap exceeded: " << e.what() << '\n';
    return kExitResource;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionMismatch& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Unsupported& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace rkha::cli
