#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mongeray/mongeray.hpp"

namespace {

using mongeray::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double lo = 1e-5, hi = 1e-1;
  int n = 33;
};

struct RunConfig {
  std::string command;
  std::string preset = "power:1";
  std::optional<double> s;
  bool reflect = false;
  std::optional<double> c;  // empty means auto
  std::optional<GridSpec> a_grid;
  std::optional<double> tol;
  std::uint64_t seed = 42;
  long samples = 1000000;
  int bins_x = 20, bins_y = 20;
  std::string out;
  std::string format = "json";
  std::string suite = "all";
  std::string figure = "rays";
  std::string table = "eta";
  std::vector<std::string> points;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw UsageError("--a-grid expects lo:hi:n, got '" + text + "'");
  }
  if (!(g.lo > 0.0 && g.hi > g.lo && g.hi < 1.0 && g.n >= 2)) {
    throw UsageError("--a-grid needs 0 < lo < hi < 1 and n >= 2");
  }
  return g;
}

std::string grid_text(const GridSpec& g) {
  std::ostringstream os;
  os.precision(17);
  os << g.lo << ':' << g.hi << ':' << g.n;
  return os.str();
}

void parse_bins(const std::string& text, RunConfig& cfg) {
  const auto colon = text.find(':');
  try {
    std::size_t used = 0;
    if (colon == std::string::npos) {
      cfg.bins_x = cfg.bins_y = std::stoi(text, &used);
      if (used != text.size()) throw UsageError("");
    } else {
      cfg.bins_x = std::stoi(text.substr(0, colon));
      cfg.bins_y = std::stoi(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw UsageError("--bins expects n or nx:ny, got '" + text + "'");
  }
  if (cfg.bins_x < 1 || cfg.bins_y < 1) throw UsageError("--bins must be positive");
}

std::optional<double> parse_c(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("--c expects a number or 'auto', got '" + text + "'");
}

/// Fills every field the command line left unset from a JSON object with the
/// same names (dashes become underscores).
void merge_config_file(const std::string& path, RunConfig& cfg, const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  auto given = [&](const char* flag) { return app.count(flag) > 0; };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") {
        if (cfg.command.empty()) cfg.command = value.get<std::string>();
      } else if (key == "preset") {
        if (!given("--preset")) cfg.preset = value.get<std::string>();
      } else if (key == "s") {
        if (!given("--s")) cfg.s = value.get<double>();
      } else if (key == "reflect") {
        if (!given("--reflect")) cfg.reflect = value.get<bool>();
      } else if (key == "c") {
        if (!given("--c")) cfg.c = value.is_string() ? parse_c(value.get<std::string>()) : value.get<double>();
      } else if (key == "a_grid") {
        if (!given("--a-grid")) cfg.a_grid = parse_grid(value.get<std::string>());
      } else if (key == "tol") {
        if (!given("--tol")) cfg.tol = value.get<double>();
      } else if (key == "seed") {
        if (!given("--seed")) cfg.seed = value.get<std::uint64_t>();
      } else if (key == "samples") {
        if (!given("--samples")) cfg.samples = value.get<long>();
      } else if (key == "bins") {
        if (!given("--bins")) parse_bins(value.is_string() ? value.get<std::string>() : std::to_string(value.get<int>()), cfg);
      } else if (key == "out") {
        if (!given("--out")) cfg.out = value.get<std::string>();
      } else if (key == "format") {
        if (!given("--format")) cfg.format = value.get<std::string>();
      } else if (key == "suite") {
        if (!given("--suite")) cfg.suite = value.get<std::string>();
      } else if (key == "figure") {
        if (!given("--figure")) cfg.figure = value.get<std::string>();
      } else if (key == "table") {
        if (!given("--table")) cfg.table = value.get<std::string>();
      } else if (key == "points") {
        if (!given("--point")) cfg.points = value.get<std::vector<std::string>>();
      } else {
        throw UsageError("config file: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
}

void validate(const RunConfig& cfg) {
  static const std::vector<std::string> commands{"build", "verify", "probe", "map-eval", "pushforward", "render"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end()) {
    throw UsageError("unknown command '" + cfg.command + "'");
  }
  if (cfg.format != "json" && cfg.format != "csv") throw UsageError("--format must be csv or json");
  if (cfg.tol && !(*cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  if (cfg.samples < 1) throw UsageError("--samples must be positive");
  if (cfg.s && !(*cfg.s > 0.0)) throw UsageError("--s must be positive");
  if (cfg.table != "eta" && cfg.table != "potential") throw UsageError("--table must be eta or potential");
}

json config_json(const RunConfig& cfg) {
  json j{{"command", cfg.command}, {"preset", cfg.preset}};
  if (cfg.s) j["s"] = *cfg.s;
  j["reflect"] = cfg.reflect;
  j["c"] = cfg.c ? json(*cfg.c) : json("auto");
  if (cfg.a_grid) j["a_grid"] = grid_text(*cfg.a_grid);
  if (cfg.tol) j["tol"] = *cfg.tol;
  j["seed"] = cfg.seed;
  if (cfg.command == "pushforward") {
    j["samples"] = cfg.samples;
    j["bins"] = std::to_string(cfg.bins_x) + ":" + std::to_string(cfg.bins_y);
  }
  if (cfg.command == "verify") j["suite"] = cfg.suite;
  if (cfg.command == "render") j["figure"] = cfg.figure;
  if (cfg.command == "build") j["table"] = cfg.table;
  j["format"] = cfg.format;
  return j;
}

mongeray::Preset resolve_preset(const RunConfig& cfg) {
  auto preset = [&] {
    try {
      return mongeray::parse_preset(cfg.preset);
    } catch (const mongeray::DomainError& e) {
      throw UsageError(e.what());
    }
  }();
  if (cfg.s) {
    if (preset.profile.kind() != mongeray::ProfileKind::power) throw UsageError("--s applies to power presets only");
    preset.profile = mongeray::RayProfile::power(*cfg.s);
  }
  if (cfg.reflect) preset.reflected = true;
  return preset;
}

mongeray::Point parse_point(const std::string& text) {
  mongeray::Point p;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> p.x1 >> comma >> p.x2) || comma != ',' || !in.eof()) {
    throw UsageError("--point expects x1,x2, got '" + text + "'");
  }
  return p;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct Outcome {
  bool passed = true;
  json failures = json::array();
};

Outcome run_build(const RunConfig& cfg, const mongeray::DensityPair& pair, std::ostream& out) {
  if (cfg.format == "csv") {
    if (cfg.table == "eta") {
      const auto ts = mongeray::geometric_grid(1e-8, 1.0, 81);
      mongeray::write_eta_csv(out, pair.eta_solution(), ts);
    } else {
      const mongeray::PotentialEvaluator u(pair.profile(), cfg.tol.value_or(1e-14));
      std::vector<mongeray::Point> pts;
      const int n = 24;
      for (int i = 1; i < n; ++i) {
        for (int j = 1; j < n; ++j) {
          const mongeray::Point x{-1.0 + 2.0 * i / n, (0.5 * (2.0 * i / n)) * j / n};
          if (mongeray::in_domain(mongeray::Domain::delta(), x)) pts.push_back(x);
        }
      }
      mongeray::write_potential_csv(out, u, pts);
    }
    return {};
  }
  json j{{"config", config_json(cfg)}, {"pair", mongeray::to_json(pair)}};
  j["c_bound"] = mongeray::c_bound(pair.zeta_sup(), pair.eta_sup());
  j["eta_grid_max_abs"] = pair.eta_solution().grid_max_abs();
  out << j.dump(2) << '\n';
  return {};
}

Outcome run_verify(const RunConfig& cfg, const mongeray::DensityPair& pair, std::ostream& out) {
  mongeray::Suite suite;
  try {
    suite = mongeray::parse_suite(cfg.suite);
  } catch (const mongeray::DomainError& e) {
    throw UsageError(e.what());
  }
  std::vector<double> grid = mongeray::default_balance_grid();
  if (cfg.a_grid) grid = mongeray::geometric_grid(cfg.a_grid->lo, cfg.a_grid->hi, cfg.a_grid->n);
  const auto checks = mongeray::run_suite(pair, suite, grid, cfg.seed);
  Outcome o;
  o.passed = mongeray::all_passed(checks);
  for (const auto& c : checks) {
    if (!c.passed) o.failures.push_back(mongeray::to_json(c));
  }
  json j{{"config", config_json(cfg)}, {"pair", mongeray::to_json(pair)}, {"passed", o.passed},
         {"checks", mongeray::to_json(checks)}};
  out << j.dump(2) << '\n';
  return o;
}

Outcome run_probe(const RunConfig& cfg, const mongeray::DensityPair& pair, std::ostream& out) {
  const GridSpec g = cfg.a_grid.value_or(GridSpec{});
  const auto bounds = mongeray::select_regularity_bounds(pair);
  auto rep = mongeray::bounds_report(pair, bounds, mongeray::geometric_grid(g.lo, g.hi, g.n));
  rep.preset = cfg.preset;
  Outcome o;
  o.passed = rep.bounds_ok;
  if (!o.passed) o.failures.push_back(json{{"check", "probe_bounds"}, {"violations", rep.violations}});
  if (cfg.format == "csv") {
    mongeray::write_probe_csv(out, rep);
  } else {
    const auto reg = mongeray::density_regularity_report(pair, mongeray::geometric_grid(1e-12, 1e-6, 25), {1.0, 2.0});
    json j{{"config", config_json(cfg)}, {"report", mongeray::to_json(rep)},
           {"density_regularity", mongeray::to_json(reg)}};
    out << j.dump(2) << '\n';
  }
  return o;
}

Outcome run_map_eval(const RunConfig& cfg, const mongeray::DensityPair& pair, std::ostream& out) {
  mongeray::RootOptions ropts;
  if (cfg.tol) ropts = mongeray::RootOptions{*cfg.tol, *cfg.tol, *cfg.tol, 300};
  const mongeray::TransportEvaluator map(pair, ropts);
  std::vector<mongeray::Point> pts;
  for (const auto& t : cfg.points) pts.push_back(parse_point(t));
  if (pts.empty()) {
    const GridSpec g = cfg.a_grid.value_or(GridSpec{0.05, 0.95, 10});
    for (double a : mongeray::geometric_grid(g.lo, g.hi, g.n)) {
      for (int k = 1; k < 10; ++k) pts.push_back(mongeray::ray_point(pair.profile(), {a, -a + (1.0 + a) * k / 10.0}));
    }
  }
  if (cfg.format == "csv") {
    mongeray::write_map_csv(out, map, pts);
  } else {
    json rows = json::array();
    for (auto x : pts) {
      const auto y = map(x);
      rows.push_back(json{{"x", {x.x1, x.x2}}, {"T", {y.x1, y.x2}},
                          {"a", mongeray::ray_index(pair.profile(), {x.x1, std::abs(x.x2)})}});
    }
    out << json{{"config", config_json(cfg)}, {"pair", mongeray::to_json(pair)}, {"samples", rows}}.dump(2) << '\n';
  }
  return {};
}

Outcome run_pushforward(const RunConfig& cfg, const mongeray::DensityPair& pair, std::ostream& out) {
  const double limit = cfg.tol.value_or(1e-3);
  const mongeray::RayTransportProblem problem(pair);
  const auto rep = mongeray::pushforward_check(problem, cfg.samples, cfg.seed, problem.bins(cfg.bins_x, cfg.bins_y));
  Outcome o;
  o.passed = !rep.aborted && rep.max_deviation <= limit;
  if (!o.passed) {
    o.failures.push_back(json{{"check", "pushforward_max_deviation"}, {"max_deviation", rep.max_deviation},
                              {"limit", limit}, {"aborted", rep.aborted}});
  }
  json j{{"config", config_json(cfg)}, {"pair", mongeray::to_json(pair)}, {"limit", limit}, {"passed", o.passed},
         {"report", mongeray::to_json(rep)}};
  out << j.dump(2) << '\n';
  return o;
}

Outcome run_render(const RunConfig& cfg, const mongeray::DensityPair& pair, std::ostream& out) {
  mongeray::Figure fig;
  try {
    fig = mongeray::parse_figure(cfg.figure);
  } catch (const mongeray::DomainError& e) {
    throw UsageError(e.what());
  }
  mongeray::render_svg(out, pair, fig);
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone transport along prescribed rays: construction, verification and probes"};
  RunConfig cfg;
  std::string c_text, grid_str, bins_str, config_path;
  app.add_option("command", cfg.command, "build | verify | probe | map-eval | pushforward | render");
  app.add_option("--preset", cfg.preset, "power:<s>, exponential, cor2.2, cor2.3, cor2.4, cor2.5:<alpha>, rem2.7");
  app.add_option("--s", cfg.s, "override the exponent of a power preset");
  app.add_flag("--reflect", cfg.reflect, "use the reflected pair on the doubled triangle");
  app.add_option("--c", c_text, "perturbation size, or 'auto'");
  app.add_option("--a-grid", grid_str, "geometric ray-index grid lo:hi:n");
  app.add_option("--tol", cfg.tol, "tolerance (root finder for map-eval, max bin deviation for pushforward)");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--samples", cfg.samples, "Monte Carlo sample count");
  app.add_option("--bins", bins_str, "histogram bins n or nx:ny");
  app.add_option("--out", cfg.out, "output path (default stdout)");
  app.add_option("--format", cfg.format, "csv or json");
  app.add_option("--suite", cfg.suite, "verify suite: all, mass, closed, potential, map, floor");
  app.add_option("--figure", cfg.figure, "render figure: rays or reflected");
  app.add_option("--table", cfg.table, "build CSV table: eta or potential");
  app.add_option("--point", cfg.points, "map-eval point x1,x2 (repeatable)");
  app.add_option("--config", config_path, "JSON config file mirroring the flags");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!c_text.empty()) cfg.c = parse_c(c_text);
    if (!grid_str.empty()) cfg.a_grid = parse_grid(grid_str);
    if (!bins_str.empty()) parse_bins(bins_str, cfg);
    if (!config_path.empty()) merge_config_file(config_path, cfg, app);
    validate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    const auto preset = resolve_preset(cfg);
    mongeray::DensityPair pair = [&] {
      try {
        return mongeray::make_pair(preset, cfg.c);
      } catch (const mongeray::ConstructionError& e) {
        throw UsageError(e.what());
      }
    }();
    Output output(cfg.out);
    std::ostream& out = output.stream();
    Outcome o;
    if (cfg.command == "build") o = run_build(cfg, pair, out);
    else if (cfg.command == "verify") o = run_verify(cfg, pair, out);
    else if (cfg.command == "probe") o = run_probe(cfg, pair, out);
    else if (cfg.command == "map-eval") o = run_map_eval(cfg, pair, out);
    else if (cfg.command == "pushforward") o = run_pushforward(cfg, pair, out);
    else o = run_render(cfg, pair, out);
    if (!o.passed) {
      std::cerr << json{{"status", "fail"}, {"command", cfg.command}, {"failures", o.failures}}.dump(2) << '\n';
      return 1;
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"status", "fail"}, {"command", cfg.command}, {"error", e.what()}}.dump(2) << '\n';
    return 1;
  }
}
