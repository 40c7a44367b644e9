#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "mongeray/densities.hpp"
#include "mongeray/errors.hpp"
#include "mongeray/geometry.hpp"
#include "mongeray/numerics.hpp"
#include "mongeray/potential.hpp"
#include "mongeray/pushforward.hpp"
#include "mongeray/transport.hpp"

namespace mongeray {

/// One verified relation: worst observed value against its threshold.
struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double threshold = 0.0;
  long samples = 0;
  std::string detail;
};

inline bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

inline std::vector<double> default_balance_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}; }

/// Uniform point of Delta at distance >= margin from its boundary.
inline Point sample_delta(CounterRng& rng, double margin = 0.0) {
  for (;;) {
    const Point x{-1.0 + 2.0 * rng.uniform(), rng.uniform()};
    if (in_domain(Domain::delta(), x) && distance_to_delta_boundary(x) >= margin) return x;
  }
}

/// |int_{Gamma_a} (f - g)| / area(Gamma_a) on the a-grid. The integrand is
/// c (zeta + eta); the prefactor of a reflected pair cancels in the ratio.
inline CheckResult check_mass_balance(const DensityPair& pair, const std::vector<double>& a_grid,
                                      double threshold = 1e-6) {
  CheckResult r{"mass_balance", true, 0.0, threshold, 0, ""};
  const auto& profile = pair.profile();
  auto diff = [&](Point x) { return 1.0 - pair.target_factor(x); };
  for (double a : a_grid) {
    const double area = 0.5 * profile.eval(a) * (1.0 + a) * (1.0 + a);
    const double v = integrate_gamma_region(diff, profile, a, 1e-9 * area).value;
    const double rel = std::abs(v) / area;
    if (rel > r.worst) {
      r.worst = rel;
      r.detail = "a=" + std::to_string(a);
    }
    ++r.samples;
  }
  r.passed = r.worst <= threshold;
  return r;
}

/// Quadrature over Gamma_a against the closed forms
///   int eta = N(omega(a)(1+a)) / omega(a),   -int zeta = omega(a) a^2 (1+a)^2.
inline std::vector<CheckResult> check_closed_forms(const DensityPair& pair, const std::vector<double>& a_grid,
                                                   double threshold = 1e-8) {
  CheckResult eta_r{"closed_form_eta", true, 0.0, threshold, 0, ""};
  CheckResult zeta_r{"closed_form_zeta", true, 0.0, threshold, 0, ""};
  const auto& profile = pair.profile();
  const auto& eta_fn = pair.eta_solution();
  for (double a : a_grid) {
    const double w = profile.eval(a);
    const double eta_exact = eta_fn.N(w * (1.0 + a)) / w;
    const double zeta_exact = w * a * a * (1.0 + a) * (1.0 + a);
    const double eta_q =
        integrate_gamma_region([&](Point x) { return eta_fn.at(x.x2); }, profile, a, 1e-10 * std::abs(eta_exact)).value;
    const double zeta_q =
        -integrate_gamma_region([](Point x) { return zeta(x.x1); }, profile, a, 1e-10 * zeta_exact).value;
    const double e1 = std::abs(eta_q - eta_exact) / std::abs(eta_exact);
    const double e2 = std::abs(zeta_q - zeta_exact) / zeta_exact;
    if (e1 > eta_r.worst) eta_r = {eta_r.name, true, e1, threshold, eta_r.samples, "a=" + std::to_string(a)};
    if (e2 > zeta_r.worst) zeta_r = {zeta_r.name, true, e2, threshold, zeta_r.samples, "a=" + std::to_string(a)};
    ++eta_r.samples;
    ++zeta_r.samples;
  }
  eta_r.passed = eta_r.worst <= threshold;
  zeta_r.passed = zeta_r.worst <= threshold;
  return {eta_r, zeta_r};
}

struct PotentialCheckOptions {
  long lipschitz_pairs = 10000;
  long same_ray_pairs = 1000;
  long curl_points = 1000;
  double curl_step = 1e-4;
  double curl_margin = 0.02;
  std::uint64_t seed = 42;
};

/// 1-Lipschitz bound, equality on rays, strict slack across separated rays
/// and vanishing curl of the direction field.
inline std::vector<CheckResult> check_potential(const RayProfile& profile, const PotentialCheckOptions& opt = {}) {
  const PotentialEvaluator u(profile);
  CheckResult lip{"potential_lipschitz", true, -std::numeric_limits<double>::infinity(), 1e-9, 0, ""};
  CheckResult slack{"potential_strict_slack", true, std::numeric_limits<double>::infinity(), 0.0, 0, ""};
  for (long i = 0; i < opt.lipschitz_pairs; ++i) {
    CounterRng rng(opt.seed, static_cast<std::uint64_t>(i));
    const Point x = sample_delta(rng), y = sample_delta(rng);
    const double d = distance(x, y);
    const double ux = u(x), uy = u(y);
    lip.worst = std::max(lip.worst, ux - uy - d);
    if (std::abs(ray_index(profile, x) - ray_index(profile, y)) >= 0.01) {
      slack.worst = std::min(slack.worst, d - std::abs(ux - uy));
      ++slack.samples;
    }
    ++lip.samples;
  }
  lip.passed = lip.worst <= lip.threshold;
  slack.passed = slack.samples == 0 || slack.worst > 0.0;
  slack.detail = "minimum of |x-y| - |u(x)-u(y)| over pairs with |a(x)-a(y)| >= 0.01";

  CheckResult eq{"potential_equality_on_rays", true, 0.0, 1e-6, 0, ""};
  for (long i = 0; i < opt.same_ray_pairs; ++i) {
    CounterRng rng(opt.seed + 1, static_cast<std::uint64_t>(i));
    const double a = 1e-3 + (1.0 - 2e-3) * rng.uniform();
    double p1 = -a + (1.0 + a) * rng.uniform(), p2 = -a + (1.0 + a) * rng.uniform();
    if (p1 > p2) std::swap(p1, p2);
    const Point x = ray_point(profile, {a, p1}), y = ray_point(profile, {a, p2});
    if (!(x.x2 > 0.0) || !in_domain(Domain::delta(), y)) continue;
    eq.worst = std::max(eq.worst, std::abs(u(y) - u(x) - distance(x, y)));
    ++eq.samples;
  }
  eq.passed = eq.worst <= eq.threshold;

  CheckResult curl{"potential_curl", true, 0.0, 1e-5, 0, ""};
  for (long i = 0; i < opt.curl_points; ++i) {
    CounterRng rng(opt.seed + 2, static_cast<std::uint64_t>(i));
    const Point x = sample_delta(rng, opt.curl_margin);
    const double c = std::abs(curl_residual(profile, x, opt.curl_step));
    if (c > curl.worst) {
      curl.worst = c;
      curl.detail = "x=(" + std::to_string(x.x1) + "," + std::to_string(x.x2) + ")";
    }
    ++curl.samples;
  }
  curl.passed = curl.worst <= curl.threshold;
  return {lip, slack, eq, curl};
}

struct MapCheckOptions {
  long rays = 1000;
  int points_per_ray = 10;
  std::uint64_t seed = 42;
};

/// Monotonicity along rays and ray preservation of the map.
inline std::vector<CheckResult> check_map(const DensityPair& pair, const MapCheckOptions& opt = {}) {
  const TransportEvaluator map(pair);
  const auto& profile = pair.profile();
  CheckResult mono{"map_monotone_on_rays", true, std::numeric_limits<double>::infinity(), -1e-10, 0, ""};
  CheckResult keep{"map_ray_preservation", true, 0.0, 1e-9, 0, ""};
  for (long i = 0; i < opt.rays; ++i) {
    CounterRng rng(opt.seed, static_cast<std::uint64_t>(i));
    const double a = 1e-3 + (1.0 - 2e-3) * rng.uniform();
    std::vector<double> ps(static_cast<std::size_t>(opt.points_per_ray));
    for (double& p : ps) p = -a + (1.0 + a) * (0.001 + 0.998 * rng.uniform());
    std::sort(ps.begin(), ps.end());
    std::vector<Point> xs, ys;
    for (double p : ps) {
      const Point x = ray_point(profile, {a, p});
      const Point y = map(x);
      xs.push_back(x);
      ys.push_back(y);
      keep.worst = std::max(keep.worst, std::abs(ray_index(profile, y) - a));
      ++keep.samples;
    }
    for (std::size_t j = 0; j < xs.size(); ++j) {
      for (std::size_t k = j + 1; k < xs.size(); ++k) {
        mono.worst = std::min(mono.worst, dot(ys[k] - ys[j], xs[k] - xs[j]));
        ++mono.samples;
      }
    }
  }
  mono.passed = mono.worst >= mono.threshold;
  keep.passed = keep.worst <= keep.threshold;
  return {mono, keep};
}

/// g / prefactor >= 1/2 on a grid over the domain.
inline CheckResult check_density_floor(const DensityPair& pair, int n = 200) {
  CheckResult r{"density_floor", true, std::numeric_limits<double>::infinity(), 0.5, 0, ""};
  const Domain dom = pair.domain();
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      const double x1 = -1.0 + 2.0 * i / n;
      const double x2 = dom.lower(x1) + (dom.upper(x1) - dom.lower(x1)) * j / n;
      const Point x{x1, x2};
      if (!in_domain(dom, x)) continue;
      r.worst = std::min(r.worst, pair.target(x) / pair.prefactor());
      ++r.samples;
    }
  }
  r.passed = r.worst >= r.threshold;
  return r;
}

enum class Suite { all, mass, closed, potential, map, floor };

inline Suite parse_suite(const std::string& name) {
  if (name == "all") return Suite::all;
  if (name == "mass") return Suite::mass;
  if (name == "closed") return Suite::closed;
  if (name == "potential") return Suite::potential;
  if (name == "map") return Suite::map;
  if (name == "floor") return Suite::floor;
  throw DomainError("unknown suite '" + name + "'");
}

inline std::vector<CheckResult> run_suite(const DensityPair& pair, Suite suite, const std::vector<double>& a_grid,
                                          std::uint64_t seed = 42) {
  std::vector<CheckResult> out;
  auto append = [&](std::vector<CheckResult> more) { out.insert(out.end(), more.begin(), more.end()); };
  const bool all = suite == Suite::all;
  if (all || suite == Suite::mass) out.push_back(check_mass_balance(pair, a_grid));
  if (all || suite == Suite::closed) append(check_closed_forms(pair, a_grid));
  if (all || suite == Suite::potential) {
    PotentialCheckOptions opt;
    opt.seed = seed;
    append(check_potential(pair.profile(), opt));
  }
  if (all || suite == Suite::map) {
    MapCheckOptions opt;
    opt.seed = seed;
    append(check_map(pair, opt));
  }
  if (all || suite == Suite::floor) out.push_back(check_density_floor(pair));
  return out;
}

}  // namespace mongeray
