// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance [--only k] [--expect-fail k]...
//
// Exit status is 0 when every criterion passes, other than those named with
// --expect-fail. A criterion named with --expect-fail that passes is reported
// and also makes the run fail, so the list cannot go stale silently.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mongeray/mongeray.hpp"

using namespace mongeray;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::function<Verdict()> run;
  double time_limit = 0.0;  // seconds, 0 = none
};

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fix(double v, int digits = 4) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Presets {
  DensityPair s05 = make_pair(parse_preset("power:0.5"));
  DensityPair s1 = make_pair(parse_preset("power:1"));
  DensityPair s2 = make_pair(parse_preset("power:2"));
  DensityPair s4 = make_pair(parse_preset("power:4"));
  DensityPair ex = make_pair(parse_preset("exponential"));

  std::vector<std::pair<std::string, const DensityPair*>> balance_set() const {
    return {{"s=1/2", &s05}, {"s=1", &s1}, {"s=2", &s2}, {"exp", &ex}};
  }
};

Verdict mass_balance(const Presets& p) {
  Verdict v{true, ""};
  double worst = 0.0;
  for (const auto& [name, pair] : p.balance_set()) {
    const auto r = check_mass_balance(*pair, default_balance_grid(), 1e-6);
    v.passed = v.passed && r.passed;
    worst = std::max(worst, r.worst);
    v.detail += name + ":" + sci(r.worst) + " ";
  }
  v.detail = "max rel imbalance " + sci(worst) + " <= 1e-6 [" + v.detail + "]";
  return v;
}

Verdict closed_forms(const Presets& p) {
  Verdict v{true, ""};
  double we = 0.0, wz = 0.0;
  for (const auto& [name, pair] : p.balance_set()) {
    for (const auto& r : check_closed_forms(*pair, default_balance_grid(), 1e-8)) {
      v.passed = v.passed && r.passed;
      double& w = r.name == "closed_form_eta" ? we : wz;
      w = std::max(w, r.worst);
    }
  }
  v.detail = "eta rel err " + sci(we) + ", zeta rel err " + sci(wz) + " <= 1e-8";
  return v;
}

Verdict potential(const Presets& p) {
  Verdict v{true, ""};
  double lip = -1.0, eq = 0.0, curl = 0.0, slack = 1.0;
  for (const auto& [name, pair] : p.balance_set()) {
    for (const auto& r : check_potential(pair->profile())) {
      v.passed = v.passed && r.passed;
      if (r.name == "potential_lipschitz") lip = std::max(lip, r.worst);
      if (r.name == "potential_equality_on_rays") eq = std::max(eq, r.worst);
      if (r.name == "potential_curl") curl = std::max(curl, r.worst);
      if (r.name == "potential_strict_slack") slack = std::min(slack, r.worst);
    }
  }
  v.detail = "max u(x)-u(y)-|x-y| " + sci(lip) + " <= 1e-9, same-ray gap " + sci(eq) + " <= 1e-6, curl " + sci(curl) +
             " <= 1e-5, min off-ray slack " + sci(slack) + " > 0";
  return v;
}

std::vector<std::pair<std::string, DensityPair>> all_presets() {
  std::vector<std::pair<std::string, DensityPair>> out;
  for (const char* name : {"cor2.2", "cor2.3", "cor2.4", "cor2.5:1", "power:2", "rem2.7"}) {
    out.emplace_back(name, make_pair(parse_preset(name)));
  }
  return out;
}

Verdict upper_bound() {
  Verdict v{true, ""};
  double worst = -1.0;
  for (const auto& [name, pair] : all_presets()) {
    for (double a : default_probe_grid()) {
      const double excess = z_of_a(pair, a) - a;
      worst = std::max(worst, excess);
      if (excess > 1e-10) {
        v.passed = false;
        v.detail += name + "@a=" + sci(a) + " ";
      }
    }
  }
  v.detail = "max z(a)-a " + sci(worst) + " <= 1e-10 over 6 presets x 33 grid points " + v.detail;
  return v;
}

Verdict lower_bound(const Presets& p) {
  Verdict v{true, ""};
  const auto grid = geometric_grid(1e-5, 1e-2, 25);
  for (const auto& [name, pair] : p.balance_set()) {
    const auto rep = bounds_report(*pair, select_regularity_bounds(*pair), grid);
    const double min_ratio = rep.min_ratio_small_a;
    bool ok = min_ratio > 0.0;
    std::string part = name + ": min " + fix(min_ratio, 5);
    if (pair->profile().kind() == ProfileKind::power) {
      const double lam = rep.lambda_star;
      const double r4 = z_of_a(*pair, 1e-4) / 1e-4;
      ok = ok && min_ratio >= 0.5 * lam && std::abs(r4 - lam) <= 0.05;
      part += " z(1e-4)/1e-4 " + fix(r4, 5) + " lambda* " + fix(lam, 5);
    }
    v.passed = v.passed && ok;
    v.detail += part + "; ";
  }
  return v;
}

Verdict exponents(const Presets& p) {
  Verdict v{true, ""};
  const std::vector<std::pair<const DensityPair*, double>> cases{{&p.s05, 2.0 / 3.0}, {&p.s1, 0.5}, {&p.s2, 1.0 / 3.0}};
  for (const auto& [pair, expected] : cases) {
    const auto fit = exponent_fit(*pair, 1e-5, 1e-2, 25);
    const bool ok = std::abs(fit.slope - expected) <= 0.05;
    v.passed = v.passed && ok;
    v.detail += pair->profile().name() + " slope " + fix(fit.slope) + " (want " + fix(expected) + "); ";
  }
  return v;
}

Verdict no_holder(const Presets& p) {
  const auto lo = exponent_fit(p.ex, 1e-6, 1e-5, 9);
  const auto hi = exponent_fit(p.ex, 1e-2, 1e-1, 9);
  return {lo.slope < hi.slope, "slope [1e-6,1e-5] " + fix(lo.slope, 6) + " < slope [1e-2,1e-1] " + fix(hi.slope, 6)};
}

Verdict pushforward(const Presets& p) {
  Verdict v{true, ""};
  for (const auto* pair : {&p.s1, &p.s05}) {
    const DensityPair use = pair == &p.s05 ? pair->reflected_pair() : *pair;
    const RayTransportProblem problem(use);
    const auto rep = pushforward_check(problem, 1000000, 42, problem.bins(20, 20));
    const bool ok = !rep.aborted && rep.max_deviation <= 1e-3;
    v.passed = v.passed && ok;
    v.detail += (use.reflected() ? "reflected " : "") + use.profile().name() + " max dev " + sci(rep.max_deviation) +
                " (" + fix(rep.max_sigma_ratio, 2) + " sigma, failures " + std::to_string(rep.failures) + "); ";
  }
  const auto control = p.s1.with_c(0.0);
  const RayTransportProblem problem(control);
  const auto rep = pushforward_check(problem, 1000000, 7, problem.bins(20, 20));
  const bool ok = !rep.aborted && rep.max_sigma_ratio <= 5.0;
  v.passed = v.passed && ok;
  v.detail += "c=0 control max " + fix(rep.max_sigma_ratio, 2) + " sigma <= 5";
  return v;
}

Verdict monotone(const Presets& p) {
  Verdict v{true, ""};
  double mono = 1.0, keep = 0.0;
  for (const auto& [name, pair] : p.balance_set()) {
    for (const auto& r : check_map(*pair)) {
      v.passed = v.passed && r.passed;
      if (r.name == "map_monotone_on_rays") mono = std::min(mono, r.worst);
      else keep = std::max(keep, r.worst);
    }
  }
  v.detail = "min (T(x)-T(y)).(x-y) " + sci(mono) + " >= -1e-10, ray drift " + sci(keep) + " <= 1e-9";
  return v;
}

Verdict eta_regularity(const Presets& p) {
  Verdict v{true, ""};
  for (const auto* pair : {&p.s2, &p.s4}) {
    const auto est = pair->eta_solution().holder_estimate();
    const double want = 2.0 / pair->profile().exponent();
    const bool ok = std::abs(est.exponent - want) <= 0.1;
    v.passed = v.passed && ok;
    v.detail += pair->profile().name() + " exponent " + fix(est.exponent) + " (want " + fix(want) + "); ";
  }
  for (const auto& [name, pair] : std::vector<std::pair<std::string, const DensityPair*>>{
           {"s=1/2", &p.s05}, {"s=1", &p.s1}, {"s=2", &p.s2}, {"s=4", &p.s4}, {"exp", &p.ex}}) {
    const double e = pair->eta_solution()(1e-8);
    const bool ok = std::abs(e) <= 1e-3;
    v.passed = v.passed && ok;
    v.detail += "eta(1e-8) " + name + " " + sci(e) + (ok ? "" : " > 1e-3") + "; ";
  }
  const double e1 = p.s1.eta_solution()(1.0);
  const bool ok = std::abs(e1 - 206.0 / 27.0) <= 1e-10;
  v.passed = v.passed && ok;
  v.detail += "s=1 eta(1)-206/27 " + sci(e1 - 206.0 / 27.0);
  return v;
}

Verdict product_map() {
  Verdict v{true, ""};
  const ProductMap same([](double, double) { return 1.0; }, [](double, double) { return 1.0; });
  double worst = 0.0;
  for (int i = 1; i < 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const Point x{i / 20.0, j / 20.0};
      worst = std::max(worst, distance(same(x), x));
    }
  }
  v.passed = worst <= 1e-12;
  v.detail = "identity error " + sci(worst) + " <= 1e-12; ";

  // Slice-wise tilt: G_{x1}(y) = y - beta(x1) y (1 - y) <= y = F_{x1}(y).
  const double pi = std::acos(-1.0);
  auto beta = [pi](double x1) { return 0.5 * std::sin(pi * x1) * std::sin(pi * x1); };
  const ProductMap tilt([](double, double) { return 1.0; },
                        [beta](double x1, double x2) { return 1.0 + beta(x1) * (2.0 * x2 - 1.0); });
  const ProductMapProblem problem(tilt);
  const auto rep = pushforward_check(problem, 100000, 42, problem.bins(20, 20));
  const bool ok = !rep.aborted && rep.max_deviation <= 3e-3;
  v.passed = v.passed && ok;
  v.detail += "tilted slices max dev " + sci(rep.max_deviation) + " <= 3e-3";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only, expect_fail;
  app.add_option("--only", only, "run only these criteria");
  app.add_option("--expect-fail", expect_fail, "criteria documented as unattainable");
  CLI11_PARSE(app, argc, argv);

  const Presets presets;
  const std::vector<Criterion> criteria{
      {1, "mass balance on Gamma_a", [&] { return mass_balance(presets); }, 60.0},
      {2, "closed-form Gamma_a integrals", [&] { return closed_forms(presets); }},
      {3, "potential: Lipschitz, equality on rays, curl", [&] { return potential(presets); }},
      {4, "upper bound z(a) <= a", [] { return upper_bound(); }},
      {5, "lower bound and limit ratio", [&] { return lower_bound(presets); }},
      {6, "Holder exponents of z vs t", [&] { return exponents(presets); }, 120.0},
      {7, "exponential profile: decaying exponent", [&] { return no_holder(presets); }},
      {8, "push-forward histogram", [&] { return pushforward(presets); }},
      {9, "monotone and ray-preserving map", [&] { return monotone(presets); }},
      {10, "eta regularity at the origin", [&] { return eta_regularity(presets); }},
      {11, "product-structure map", [] { return product_map(); }},
  };

  const std::set<int> only_set(only.begin(), only.end()), expected(expect_fail.begin(), expect_fail.end());
  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only_set.empty() && !only_set.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && dt > c.time_limit) {
      v.passed = false;
      v.detail += " [runtime " + fix(dt, 1) + " s exceeds " + fix(c.time_limit, 0) + " s]";
    }
    const bool known = expected.count(c.id) > 0;
    std::string tag = v.passed ? "PASS" : "FAIL";
    if (known) tag += v.passed ? " (listed as expected failure)" : " (expected)";
    std::printf("[%s] %2d %s: %s (%.1f s)\n", tag.c_str(), c.id, c.title.c_str(), v.detail.c_str(), dt);
    std::fflush(stdout);
    if (v.passed == known) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
