#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mongeray/densities.hpp"
#include "mongeray/errors.hpp"
#include "mongeray/regression.hpp"
#include "mongeray/transport.hpp"

namespace mongeray {

/// Geometric grid of n points from lo to hi inclusive.
inline std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo && n >= 2)) throw DomainError("geometric_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  out.back() = hi;
  return out;
}

/// Default probe grid: ratio 10^(1/8) over [1e-5, 1e-1].
inline std::vector<double> default_probe_grid() { return geometric_grid(1e-5, 1e-1, 33); }

/// z(a) = T1(a omega(a) e2): horizontal position of the image of the point
/// where l_a crosses the vertical axis.
inline double z_of_a(const DensityPair& pair, double a) { return map_on_ray(pair, a, 0.0); }

/// log t for t = a omega(a), finite even where t underflows.
inline double log_axis_height(const RayProfile& profile, double a) { return std::log(a) + profile.log_eval(a); }

/// Limit of z(a)/a as a -> 0 when omega/omega' ~ a/s.
///
/// Near the origin the weighted target density tends to 1 + c zeta(0) = 1 - 2c
/// and the ray weight to x1 + a + a/s. Balancing the masses left of the axis
/// and left of the image with mu = (z + a)/a gives
///   (1 - 2c)(mu^2/2 + mu/s) = 1/2 + 1/s,
/// whose positive root yields lambda* = mu - 1. s = infinity covers profiles
/// with omega/omega' = o(a), such as the exponential one.
inline double limit_ratio_oracle(double s, double c) {
  if (!(s > 0.0)) throw DomainError("limit_ratio_oracle: s must be positive");
  if (!(c >= 0.0 && c < 0.5)) throw DomainError("limit_ratio_oracle: c outside [0, 1/2)");
  const double inv_s = std::isinf(s) ? 0.0 : 1.0 / s;
  const double rhs = (0.5 + inv_s) / (1.0 - 2.0 * c);
  const double mu = -inv_s + std::sqrt(inv_s * inv_s + 2.0 * rhs);
  return mu - 1.0;
}

inline double limit_ratio_oracle(const RayProfile& profile, double c) {
  switch (profile.kind()) {
    case ProfileKind::power:
      return limit_ratio_oracle(profile.exponent(), c);
    case ProfileKind::exponential:
      return limit_ratio_oracle(std::numeric_limits<double>::infinity(), c);
    case ProfileKind::custom:
      break;
  }
  throw DomainError("limit_ratio_oracle: only power and exponential profiles have a closed-form limit");
}

/// Expected slope of log z against log t: 1/(s+1) for power profiles.
inline double theoretical_exponent(const RayProfile& profile) {
  return profile.kind() == ProfileKind::power ? 1.0 / (profile.exponent() + 1.0) : std::nan("");
}

/// Least-squares slope of log z(a) against log t(a), t = a omega(a), on a
/// geometric grid over [a_lo, a_hi].
inline LinearFit exponent_fit(const DensityPair& pair, double a_lo, double a_hi, int n) {
  if (!(a_lo > 0.0 && a_lo < a_hi && a_hi < 1.0)) throw DomainError("exponent_fit: need 0 < a_lo < a_hi < 1");
  if (n < 8) throw DomainError("exponent_fit: need n >= 8");
  std::vector<double> xs, ys;
  for (double a : geometric_grid(a_lo, a_hi, n)) {
    const double z = z_of_a(pair, a);
    if (!(z > 0.0)) throw FitError("exponent_fit: z(a) <= 0 at a = " + std::to_string(a));
    xs.push_back(log_axis_height(pair.profile(), a));
    ys.push_back(std::log(z));
  }
  return fit_line(xs, ys);
}

/// Neighbourhood constant c0 with zeta <= -2 c0 and eta <= c0 near the origin.
struct RegularityBounds {
  double c0 = std::nan("");
  double delta = 0.05;
  double lower_floor = std::nan("");  // 1/(1 - c0)^(1/2) - 1
  bool valid = false;
};

/// Largest c0 with zeta <= -2 c0 on [-delta, delta] and eta <= c0 on (0, delta],
/// both verified by sampling.
inline RegularityBounds select_regularity_bounds(const DensityPair& pair, double delta = 0.05, int samples = 1000) {
  RegularityBounds out;
  out.delta = delta;
  double zeta_max = -std::numeric_limits<double>::infinity();
  double eta_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double x = -delta + 2.0 * delta * i / samples;
    zeta_max = std::max(zeta_max, zeta(x));
    if (x > 0.0) eta_max = std::max(eta_max, pair.eta_solution()(x));
  }
  const double c0 = std::min(-0.5 * zeta_max, 1.0 - 1e-12);
  if (c0 > 0.0 && eta_max <= c0) {
    out.c0 = c0;
    out.lower_floor = 1.0 / std::sqrt(1.0 - c0) - 1.0;
    out.valid = true;
  }
  return out;
}

struct ProbeReport {
  std::string preset;
  double c = 0.0;
  bool reflected = false;
  std::vector<double> a_grid;
  std::vector<double> z_values;
  std::vector<double> ratio;
  std::vector<double> t_values;      // a omega(a); may underflow to 0
  std::vector<double> log_t_values;  // always finite
  LinearFit fit;
  double fitted_exponent = 0.0;
  double theoretical_exponent = std::nan("");
  double lambda_star = std::nan("");
  double max_ratio = 0.0;
  double min_ratio_small_a = std::numeric_limits<double>::infinity();  // over a <= 1e-2
  double ratio_at_smallest_a = std::nan("");
  RegularityBounds bounds;
  bool upper_bound_ok = true;
  bool lower_bound_ok = true;
  bool bounds_ok = true;
  std::vector<double> violations;  // offending a values
};

inline constexpr double kUpperRatioSlack = 1e-10;
inline constexpr double kSmallAThreshold = 1e-2;

/// Sweeps z(a) over the grid and checks 0 < z(a)/a <= 1 (up to root-finder
/// slack). For power profiles the minimum ratio over a <= 1e-2 must also
/// reach lambda*/2.
inline ProbeReport bounds_report(const DensityPair& pair, const RegularityBounds& bounds, std::vector<double> a_grid) {
  if (a_grid.empty()) throw DomainError("bounds_report: empty grid");
  std::sort(a_grid.begin(), a_grid.end());
  if (!(a_grid.front() > 0.0 && a_grid.back() < 1.0)) throw DomainError("bounds_report: grid outside (0,1)");
  ProbeReport rep;
  rep.preset = pair.profile().name();
  rep.c = pair.c();
  rep.reflected = pair.reflected();
  rep.bounds = bounds;
  rep.a_grid = a_grid;
  const auto& profile = pair.profile();
  for (double a : a_grid) {
    const double z = z_of_a(pair, a);
    const double r = z / a;
    rep.z_values.push_back(z);
    rep.ratio.push_back(r);
    rep.t_values.push_back(a * profile.eval(a));
    rep.log_t_values.push_back(log_axis_height(profile, a));
    rep.max_ratio = std::max(rep.max_ratio, r);
    if (z > a + kUpperRatioSlack * std::max(1.0, a) || r > 1.0 + kUpperRatioSlack) {
      rep.upper_bound_ok = false;
      rep.violations.push_back(a);
    }
    if (a <= kSmallAThreshold) rep.min_ratio_small_a = std::min(rep.min_ratio_small_a, r);
    if (!(r > 0.0) && pair.c() > 0.0) {
      rep.lower_bound_ok = false;
      rep.violations.push_back(a);
    }
  }
  rep.ratio_at_smallest_a = rep.ratio.front();
  if (profile.kind() != ProfileKind::custom) rep.lambda_star = limit_ratio_oracle(profile, pair.c());
  rep.theoretical_exponent = theoretical_exponent(profile);
  if (profile.kind() == ProfileKind::power && pair.c() > 0.0 && std::isfinite(rep.min_ratio_small_a) &&
      !(rep.min_ratio_small_a >= 0.5 * rep.lambda_star)) {
    rep.lower_bound_ok = false;
  }

  std::vector<double> ys;
  bool positive = true;
  for (double z : rep.z_values) {
    positive = positive && z > 0.0;
    ys.push_back(z > 0.0 ? std::log(z) : 0.0);
  }
  if (positive && a_grid.size() >= 2) {
    rep.fit = fit_line(rep.log_t_values, ys);
    rep.fitted_exponent = rep.fit.slope;
  }
  rep.bounds_ok = rep.upper_bound_ok && rep.lower_bound_ok;
  return rep;
}

struct DensityRegularityReport {
  std::string preset;
  std::vector<double> t_grid;
  std::vector<double> eta_values;
  double fitted_exponent = std::nan("");
  double expected_exponent = std::nan("");  // 2/s for power profiles
  double fit_r2 = 0.0;
  std::vector<double> log2_scaled;  // eta(t) * log(t)^2
  std::vector<double> p_values;
  // sobolev_partial[k][i]: int_{t_i}^{t_max} |eta'|^p_k dt on the grid.
  std::vector<std::vector<double>> sobolev_partial;
  double eta_at_tiny = 0.0;  // eta(1e-8)
};

/// Holder fit of eta at the origin plus indicators for the slowly decaying
/// (exponential) and Sobolev-type questions. Nothing here is asserted.
inline DensityRegularityReport density_regularity_report(const DensityPair& pair, std::vector<double> t_grid,
                                                         const std::vector<double>& p_values = {}) {
  if (t_grid.size() < 2) throw DomainError("density_regularity_report: need >= 2 grid points");
  std::sort(t_grid.begin(), t_grid.end());
  const auto& profile = pair.profile();
  const auto& eta_fn = pair.eta_solution();
  DensityRegularityReport rep;
  rep.preset = profile.name();
  rep.t_grid = t_grid;
  std::vector<double> xs, ys;
  for (double t : t_grid) {
    const double v = eta_fn(t);
    rep.eta_values.push_back(v);
    const double lt = std::log(t);
    rep.log2_scaled.push_back(v * lt * lt);
    if (std::abs(v) > 0.0) {
      xs.push_back(lt);
      ys.push_back(std::log(std::abs(v)));
    }
  }
  if (xs.size() >= 2) {
    const auto fit = fit_line(xs, ys);
    rep.fitted_exponent = fit.slope;
    rep.fit_r2 = fit.r2;
  }
  if (profile.kind() == ProfileKind::power) rep.expected_exponent = 2.0 / profile.exponent();
  rep.eta_at_tiny = eta_fn(1e-8);

  rep.p_values = p_values;
  if (!p_values.empty()) {
    std::vector<double> deriv;
    for (double t : t_grid) {
      const double h = 1e-4 * t;
      deriv.push_back((eta_fn(t + h) - eta_fn(t - h)) / (2.0 * h));
    }
    for (double p : p_values) {
      // Trapezoid rule in log t: dt = t dlog t.
      std::vector<double> partial(t_grid.size(), 0.0);
      for (std::size_t i = t_grid.size() - 1; i-- > 0;) {
        const double fa = std::pow(std::abs(deriv[i]), p) * t_grid[i];
        const double fb = std::pow(std::abs(deriv[i + 1]), p) * t_grid[i + 1];
        partial[i] = partial[i + 1] + 0.5 * (fa + fb) * std::log(t_grid[i + 1] / t_grid[i]);
      }
      rep.sobolev_partial.push_back(std::move(partial));
    }
  }
  return rep;
}

}  // namespace mongeray
