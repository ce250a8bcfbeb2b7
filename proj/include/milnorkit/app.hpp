#pragma once

// The milnorkit command-line front end. `run` parses flags (and an optional
// JSON config whose fields mirror the long flag names with '-' -> '_'),
// dispatches one command, and writes a JSON or CSV report.
//
// Exit status: 0 holds/valid, 2 fails/invalid, 1 error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "milnorkit/corpus.hpp"
#include "milnorkit/loja.hpp"
#include "milnorkit/map_json.hpp"
#include "milnorkit/milnor.hpp"
#include "milnorkit/report_json.hpp"
#include "milnorkit/verify.hpp"

namespace milnorkit::app {

inline constexpr int kExitHolds = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFails = 2;

struct Options {
  std::string command = "analyze";
  std::string map;
  std::string out;
  std::string format = "json";
  double epsilon = 0.5;
  std::size_t levels = 32;
  std::size_t directions = 64;
  std::uint64_t seed = 42;
  double delta = 1e-3;
  double tol_dep = 1e-8;
  double tol_f = 1e-8;
  std::optional<double> r_min;
  double span_tol = 1e-6;
  std::string variant = "strong";
  std::string c_mode = "fixed_one";
  std::vector<double> center;
  std::vector<double> epsilons;
  std::size_t tube_samples = 1000;
  std::vector<std::size_t> axes{0, 1};
  std::vector<double> bounds;
  std::size_t resolution = 64;
  std::string suite = "all";
  std::size_t trials = 100;
};

namespace detail {

template <class T>
T config_value(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError("config: field '" + key + "' has the wrong type");
  }
}

/// Applies a JSON config object onto `o`; unknown fields are rejected.
inline void apply_config(Options& o, const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("config: top level must be an object");
  const std::map<std::string, std::function<void(const nlohmann::json&, const std::string&)>> setters{
      {"command", [&](auto& v, auto& k) { o.command = config_value<std::string>(v, k); }},
      {"map", [&](auto& v, auto& k) { o.map = config_value<std::string>(v, k); }},
      {"out", [&](auto& v, auto& k) { o.out = config_value<std::string>(v, k); }},
      {"format", [&](auto& v, auto& k) { o.format = config_value<std::string>(v, k); }},
      {"epsilon", [&](auto& v, auto& k) { o.epsilon = config_value<double>(v, k); }},
      {"levels", [&](auto& v, auto& k) { o.levels = config_value<std::size_t>(v, k); }},
      {"directions", [&](auto& v, auto& k) { o.directions = config_value<std::size_t>(v, k); }},
      {"seed", [&](auto& v, auto& k) { o.seed = config_value<std::uint64_t>(v, k); }},
      {"delta", [&](auto& v, auto& k) { o.delta = config_value<double>(v, k); }},
      {"tol_dep", [&](auto& v, auto& k) { o.tol_dep = config_value<double>(v, k); }},
      {"tol_f", [&](auto& v, auto& k) { o.tol_f = config_value<double>(v, k); }},
      {"r_min", [&](auto& v, auto& k) { o.r_min = config_value<double>(v, k); }},
      {"span_tol", [&](auto& v, auto& k) { o.span_tol = config_value<double>(v, k); }},
      {"variant", [&](auto& v, auto& k) { o.variant = config_value<std::string>(v, k); }},
      {"c_mode", [&](auto& v, auto& k) { o.c_mode = config_value<std::string>(v, k); }},
      {"center", [&](auto& v, auto& k) { o.center = config_value<std::vector<double>>(v, k); }},
      {"epsilons", [&](auto& v, auto& k) { o.epsilons = config_value<std::vector<double>>(v, k); }},
      {"tube_samples", [&](auto& v, auto& k) { o.tube_samples = config_value<std::size_t>(v, k); }},
      {"axes", [&](auto& v, auto& k) { o.axes = config_value<std::vector<std::size_t>>(v, k); }},
      {"bounds", [&](auto& v, auto& k) { o.bounds = config_value<std::vector<double>>(v, k); }},
      {"resolution", [&](auto& v, auto& k) { o.resolution = config_value<std::size_t>(v, k); }},
      {"suite", [&](auto& v, auto& k) { o.suite = config_value<std::string>(v, k); }},
      {"trials", [&](auto& v, auto& k) { o.trials = config_value<std::size_t>(v, k); }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw InputError("config: unknown field '" + key + "'");
    it->second(value, key);
  }
}

inline Options load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = milnorkit::detail::parse_text(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  Options o;
  apply_config(o, j);
  return o;
}

/// `corpus:NAME` selects a built-in map; anything else is a file path.
inline AnalyticMap resolve_map(const std::string& source) {
  if (source.empty()) throw InputError("--map is required for this command");
  constexpr std::string_view prefix = "corpus:";
  if (source.starts_with(prefix)) {
    const std::string name = source.substr(prefix.size());
    for (auto& [n, m] : corpus::all())
      if (n == name) return m;
    throw InputError("unknown corpus map '" + name + "'");
  }
  return load_map(source);
}

inline LojaVariant parse_variant(const std::string& s) {
  if (s == "strong") return LojaVariant::strong;
  if (s == "weak") return LojaVariant::weak;
  throw InputError("--variant must be strong or weak");
}

inline CMode parse_c_mode(const std::string& s) {
  if (s == "fixed_one") return CMode::fixed_one;
  if (s == "two_param") return CMode::two_param;
  throw InputError("--c-mode must be fixed_one or two_param");
}

inline std::string csv_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class Csv {
 public:
  explicit Csv(const std::vector<std::string>& header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  void numbers(const std::vector<double>& cells) {
    std::vector<std::string> s;
    for (double v : cells) s.push_back(csv_number(v));
    row(s);
  }

  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

inline std::vector<std::string> coordinate_header(std::size_t n) {
  std::vector<std::string> h;
  for (std::size_t i = 0; i < n; ++i) h.push_back("x" + std::to_string(i));
  return h;
}

/// One row per point: x0..x{n-1}, f_norm, radius, rho, sigma_k_norm, sigma_aug_norm
/// (rho = -1 where undefined).
inline std::string sample_csv(const AnalyticMap& map, const std::vector<Point>& points) {
  auto header = coordinate_header(map.n());
  for (const char* c : {"f_norm", "radius", "rho", "sigma_k_norm", "sigma_aug_norm"}) header.emplace_back(c);
  Csv csv(header);
  for (const Point& x : points) {
    const DependenceProbe p = probe(map, x);
    const RhoValue r = rho(map.gradient_frame(x));
    std::vector<double> row = x.vector();
    row.insert(row.end(), {p.f_norm, p.radius, r.defined ? r.rho : -1.0, p.sigma_k_norm, p.sigma_aug_norm});
    csv.numbers(row);
  }
  return csv.str();
}

struct Outcome {
  ojson report;
  std::string csv;
  int exit_code = kExitHolds;
};

inline RegionSpec region_of(const Options& o, const AnalyticMap& map) {
  Point center = Point::origin(map.n());
  if (!o.center.empty()) {
    if (o.center.size() != map.n()) throw InputError("--center must have " + std::to_string(map.n()) + " coordinates");
    center = Point(o.center);
  }
  return RegionSpec::ball(center, o.epsilon, o.levels, o.directions, o.seed);
}

inline ojson header(const Options& o, const AnalyticMap* map) {
  ojson h{{"command", o.command}};
  if (map) h["map"] = map->label();
  h["seed"] = o.seed;
  return h;
}

inline ojson tolerances(const Options& o) {
  return ojson{{"tol_dep", o.tol_dep}, {"tol_f", o.tol_f}};
}

inline Outcome cmd_loja_fit(const Options& o, const AnalyticMap& map) {
  const RegionSpec region = region_of(o, map);
  const LojaEstimate e = loja_fit(map, region.center, region, parse_variant(o.variant), parse_c_mode(o.c_mode));
  Outcome r;
  r.report = header(o, &map);
  r.report["region"] = to_json(region);
  r.report["estimate"] = to_json(e);
  r.report["verdict"] = e.valid ? "valid" : "invalid";
  r.exit_code = e.valid ? kExitHolds : kExitFails;
  r.csv = sample_csv(map, sample_region(region));
  return r;
}

inline Outcome cmd_weight(const Options& o, const AnalyticMap& map) {
  const RegionSpec region = region_of(o, map);
  const WeightReport w = rho_inf_estimate(map, region);
  Outcome r;
  r.report = header(o, &map);
  r.report["region"] = to_json(region);
  r.report["weight"] = to_json(w);
  r.report["equivalence"] = to_json(equivalence_report(map, region));
  if (map.k() == 2) r.report["jacequiv"] = to_json(jacequiv_crosscheck(map, region));
  const bool positive = w.rho_inf_hat > kPositive;
  r.report["verdict"] = positive ? "positive" : "zero";
  r.exit_code = positive ? kExitHolds : kExitFails;
  r.csv = sample_csv(map, sample_region(region));
  return r;
}

inline Outcome cmd_milnor_scan(const Options& o, const AnalyticMap& map) {
  const RegionSpec region = region_of(o, map);
  const ConditionReport a = milnor_a_scan(map, region, o.tol_dep, o.tol_f);
  const ConditionReport b = milnor_b_scan(map, region, o.tol_dep, o.tol_f, o.r_min);
  Outcome r;
  r.report = header(o, &map);
  r.report["region"] = to_json(region);
  r.report["a"] = to_json(a);
  r.report["b"] = to_json(b);
  if (!o.epsilons.empty())
    r.report["radius"] = to_json(milnor_radius_estimate(map, o.epsilons, o.levels, o.directions, o.seed, o.tol_dep, o.tol_f));
  const bool holds = a.holds && b.holds;
  r.report["verdict"] = holds ? "holds-on-samples" : "fails";
  r.exit_code = holds ? kExitHolds : kExitFails;
  r.csv = sample_csv(map, sample_region(region));
  return r;
}

inline Outcome cmd_pair_scan(const Options& o, const AnalyticMap& map) {
  const MilnorPairEstimate e = milnor_pair_scan(map, o.epsilon, o.delta, o.tube_samples, o.seed, o.tol_dep);
  Outcome r;
  r.report = header(o, &map);
  r.report["pair"] = to_json(e);
  r.exit_code = e.holds ? kExitHolds : kExitFails;
  std::vector<Point> pts;
  for (const auto& p : e.tube_points) pts.push_back(p.x);
  r.csv = sample_csv(map, pts);
  return r;
}

inline Outcome cmd_condition_c(const Options& o, const AnalyticMap& map) {
  if (map.k() != 2) throw InputError("condition-c requires a map with k = 2");
  const RegionSpec region = region_of(o, map);
  const ConditionCReport c = condition_c_scan(map, region, o.span_tol);
  Outcome r;
  r.report = header(o, &map);
  r.report["region"] = to_json(region);
  r.report["c"] = to_json(c);
  r.report["simple_c_facts"] = to_json(simple_c_facts(map, region));
  r.exit_code = c.report.holds ? kExitHolds : kExitFails;
  r.csv = sample_csv(map, sample_region(region));
  return r;
}

inline Outcome cmd_analyze(const Options& o, const AnalyticMap& map) {
  const RegionSpec region = region_of(o, map);
  Outcome r;
  r.report = header(o, &map);
  r.report["region"] = to_json(region);
  r.report["tolerances"] = tolerances(o);
  r.report["weight"] = to_json(rho_inf_estimate(map, region));
  const LojaEstimate e = loja_fit(map, region.center, region, parse_variant(o.variant), parse_c_mode(o.c_mode));
  r.report["loja"] = to_json(e);
  const ConditionReport a = milnor_a_scan(map, region, o.tol_dep, o.tol_f);
  const ConditionReport b = milnor_b_scan(map, region, o.tol_dep, o.tol_f, o.r_min);
  r.report["a"] = to_json(a);
  r.report["b"] = to_json(b);
  bool holds = e.valid && a.holds && b.holds;
  if (map.k() == 2) {
    const ConditionCReport c = condition_c_scan(map, region, o.span_tol);
    r.report["c"] = to_json(c);
    holds = holds && c.report.holds;
  }
  r.report["verdict"] = holds ? "holds-on-samples" : "fails";
  r.exit_code = holds ? kExitHolds : kExitFails;
  r.csv = sample_csv(map, sample_region(region));
  return r;
}

/// Values are row-major: row r runs along axes[1], column c along axes[0];
/// -1 marks cells where rho is undefined.
inline Outcome cmd_rho_grid(const Options& o, const AnalyticMap& map) {
  if (o.axes.size() != 2 || o.axes[0] >= map.n() || o.axes[1] >= map.n() || o.axes[0] == o.axes[1])
    throw InputError("--axes must name two distinct variable indices below " + std::to_string(map.n()));
  if (o.resolution < 2) throw InputError("--resolution must be at least 2");
  std::vector<double> bounds = o.bounds.empty() ? std::vector<double>{-o.epsilon, o.epsilon} : o.bounds;
  if (bounds.size() != 2 || !(bounds[0] < bounds[1])) throw InputError("--bounds must be two increasing numbers");
  const Point base = region_of(o, map).center;

  auto header_row = coordinate_header(map.n());
  header_row.emplace_back("rho");
  Csv csv(header_row);
  ojson values = ojson::array();
  std::size_t defined = 0;
  double lo = 1.0, hi = 0.0;
  const double step = (bounds[1] - bounds[0]) / static_cast<double>(o.resolution - 1);
  for (std::size_t row = 0; row < o.resolution; ++row) {
    for (std::size_t col = 0; col < o.resolution; ++col) {
      Vector x = base.vector();
      x[o.axes[0]] = bounds[0] + step * static_cast<double>(col);
      x[o.axes[1]] = bounds[0] + step * static_cast<double>(row);
      const RhoValue v = rho(map.gradient_frame(Point(x)));
      const double value = v.defined ? v.rho : -1.0;
      if (v.defined) {
        ++defined;
        lo = std::min(lo, v.rho);
        hi = std::max(hi, v.rho);
      }
      values.push_back(value);
      x.push_back(value);
      csv.numbers(x);
    }
  }
  Outcome r;
  r.report = header(o, &map);
  r.report["axes"] = o.axes;
  r.report["bounds"] = bounds;
  r.report["resolution"] = o.resolution;
  r.report["base_point"] = to_json(base);
  r.report["defined_cells"] = defined;
  r.report["min_rho"] = defined ? ojson(lo) : ojson(nullptr);
  r.report["max_rho"] = defined ? ojson(hi) : ojson(nullptr);
  r.report["values"] = std::move(values);
  r.csv = csv.str();
  return r;
}

inline Outcome cmd_verify(const Options& o) {
  const VerifySummary s = verify(o.suite, o.trials, o.seed);
  Outcome r;
  r.report = header(o, nullptr);
  r.report["summary"] = to_json(s);
  r.exit_code = s.all_passed() ? kExitHolds : kExitFails;
  Csv csv({"property", "passed", "failed"});
  for (const auto& p : s.properties) csv.row({p.name, std::to_string(p.passed), std::to_string(p.failed)});
  r.csv = csv.str();
  return r;
}

}  // namespace detail

/// Runs one fully resolved job and writes its report to `out` (or o.out).
inline int run(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    if (o.format != "json" && o.format != "csv") throw InputError("--format must be json or csv");
    detail::Outcome result;
    if (o.command == "verify") {
      result = detail::cmd_verify(o);
    } else {
      const AnalyticMap map = detail::resolve_map(o.map);
      if (o.command == "analyze") result = detail::cmd_analyze(o, map);
      else if (o.command == "loja-fit") result = detail::cmd_loja_fit(o, map);
      else if (o.command == "weight") result = detail::cmd_weight(o, map);
      else if (o.command == "milnor-scan") result = detail::cmd_milnor_scan(o, map);
      else if (o.command == "pair-scan") result = detail::cmd_pair_scan(o, map);
      else if (o.command == "condition-c") result = detail::cmd_condition_c(o, map);
      else if (o.command == "rho-grid") result = detail::cmd_rho_grid(o, map);
      else throw InputError("unknown command '" + o.command + "'");
    }
    result.report["exit_code"] = result.exit_code;
    const std::string text = o.format == "json" ? result.report.dump(2) + "\n" : result.csv;
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream f(o.out, std::ios::binary);
      if (!f) throw InputError("cannot write '" + o.out + "'");
      f << text;
    }
    return result.exit_code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const InsufficientDataError& e) {
    err << "insufficient data in " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

/// Parses argv, merges an optional --config file (flags win), then runs.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App cli{"Numerical probes for real analytic map germs: Łojasiewicz weights and exponents, Milnor conditions."};
  Options d;
  Options flags;
  std::string config;
  std::vector<std::pair<CLI::Option*, std::function<void(Options&)>>> bound;
  auto opt = [&](const std::string& name, auto Options::*field, const std::string& help) {
    CLI::Option* o = cli.add_option(name, flags.*field, help);
    bound.emplace_back(o, [field, &flags](Options& target) { target.*field = flags.*field; });
    return o;
  };
  cli.add_option("--config", config, "JSON file whose fields mirror the long flags ('-' -> '_'); flags override it");
  opt("--command", &Options::command, "analyze | loja-fit | weight | milnor-scan | pair-scan | condition-c | rho-grid | verify")
      ->capture_default_str();
  opt("--map", &Options::map, "map JSON file, or corpus:NAME for a built-in map");
  opt("--out", &Options::out, "report path (default: stdout)");
  opt("--format", &Options::format, "json | csv")->capture_default_str();
  opt("--epsilon", &Options::epsilon, "ball radius")->capture_default_str();
  opt("--levels", &Options::levels, "radial levels; level j has radius epsilon * 2^-j")->capture_default_str();
  opt("--directions", &Options::directions, "directions per level")->capture_default_str();
  opt("--seed", &Options::seed, "RNG seed")->capture_default_str();
  opt("--delta", &Options::delta, "tube radius for pair-scan")->capture_default_str();
  opt("--tol-dep", &Options::tol_dep, "dependence threshold on normalized sigma_min")->capture_default_str();
  opt("--tol-f", &Options::tol_f, "|G| threshold for 'on X'")->capture_default_str();
  cli.add_option("--r-min", flags.r_min, "condition (b) radius floor (default: epsilon / 100)");
  bound.emplace_back(cli.get_option("--r-min"), [&flags](Options& t) { t.r_min = flags.r_min; });
  opt("--span-tol", &Options::span_tol, "condition (c) span residual threshold")->capture_default_str();
  opt("--variant", &Options::variant, "loja-fit: strong | weak")->capture_default_str();
  opt("--c-mode", &Options::c_mode, "loja-fit: fixed_one | two_param")->capture_default_str();
  opt("--center", &Options::center, "base point (default: origin)");
  opt("--epsilons", &Options::epsilons, "milnor-scan: descending radii for the radius estimate");
  opt("--tube-samples", &Options::tube_samples, "pair-scan: tube draws (>= 1000)")->capture_default_str();
  opt("--axes", &Options::axes, "rho-grid: two variable indices")->capture_default_str();
  opt("--bounds", &Options::bounds, "rho-grid: lo hi (default: -epsilon epsilon)");
  opt("--resolution", &Options::resolution, "rho-grid: cells per axis")->capture_default_str();
  opt("--suite", &Options::suite, "verify: all | spectra | loja | milnor")->capture_default_str();
  opt("--trials", &Options::trials, "verify: trials per suite")->capture_default_str();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e, out, err);
    return code == 0 ? kExitHolds : kExitError;
  }
  Options o = d;
  try {
    if (!config.empty()) o = detail::load_config(config);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  for (auto& [option, apply] : bound)
    if (option->count() > 0) apply(o);
  return run(o, out, err);
}

}  // namespace milnorkit::app
