#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mongeray/errors.hpp"
#include "mongeray/geometry.hpp"
#include "mongeray/regression.hpp"

namespace mongeray {

/// Horizontal part of the target perturbation: zeta(x1) = -12 x1^2 + 12 x1 - 2.
inline double zeta(double x1) { return (-12.0 * x1 + 12.0) * x1 - 2.0; }

/// sup |zeta| on [-1, 1], attained at x1 = -1.
inline constexpr double kZetaSup = 26.0;

/// t * a'(t) at t = omega(a)(1+a), written through omega'/omega.
inline double scaled_height_derivative(const RayProfile& profile, double a) {
  const double rho1 = profile.log_slope(a);
  return (1.0 + a) / ((1.0 + a) * rho1 + 1.0);
}

/// eta at the height t = omega(a)(1+a), expressed in the ray index a.
///
/// eta = N'' for N(t) = t^2 a(t)^2, i.e. 2a^2 + 8 t a a' + 2 t^2 (a'^2 + a a'').
/// With k = t a' and t^2 a'' = -k^2 D'/D this only needs omega'/omega and
/// omega''/omega, which stay finite where omega itself underflows.
inline double eta_on_ray_index(const RayProfile& profile, double a) {
  if (a <= 0.0) return 0.0;
  const double rho1 = profile.log_slope(a);
  const double rho2 = profile.curvature_ratio(a);
  const double k = (1.0 + a) / ((1.0 + a) * rho1 + 1.0);
  const double dlog_d = (rho2 * (1.0 + a) + 2.0 * rho1) / (rho1 * (1.0 + a) + 1.0);
  return 2.0 * a * a + 8.0 * a * k + 2.0 * k * k - 2.0 * a * k * k * dlog_d;
}

struct EtaValue {
  double value = 0.0;
  bool ill_conditioned = false;
};

inline EtaValue eta_checked(const RayProfile& profile, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("eta: t outside (0,1]");
  const double a = ray_index_from_height(profile, t);
  const double v = eta_on_ray_index(profile, a);
  return {v, t < kIllConditionedHeight || !std::isfinite(v)};
}

/// Target perturbation eta(t) forced by mass balance on every Gamma_a.
inline double eta(const RayProfile& profile, double t) { return eta_checked(profile, t).value; }

/// eta at height exp(log_t); log_t = -inf maps to the limit value 0.
inline double eta_at_log_height(const RayProfile& profile, double log_t) {
  return eta_on_ray_index(profile, ray_index_from_log_height(profile, log_t));
}

/// N(t) = t^2 a(t)^2.
inline double eta_primitive2(const RayProfile& profile, double t) {
  const double a = ray_index_from_height(profile, t);
  return t * t * a * a;
}

/// N'(t) = 2 t a^2 + 2 t^2 a a'.
inline double eta_primitive1(const RayProfile& profile, double t) {
  if (t <= 0.0) return 0.0;
  const double a = ray_index_from_height(profile, t);
  if (a <= 0.0) return 0.0;
  return 2.0 * t * (a * a + a * scaled_height_derivative(profile, a));
}

/// Uniform interior grid t_i = i / (n + 1), i = 1..n.
inline std::vector<double> interior_grid(int n) {
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / (n + 1);
  return ts;
}

struct HolderEstimate {
  double exponent = 0.0;
  double constant = 0.0;
  double r2 = 0.0;
};

/// eta together with the samples used to bound it. Samples are taken once at
/// construction, so a const EtaSolution is safe to share between threads.
class EtaSolution {
 public:
  static constexpr int kSupGridSize = 10000;

  explicit EtaSolution(RayProfile profile) : profile_(std::move(profile)) {
    grid_ = interior_grid(kSupGridSize);
    samples_.reserve(grid_.size());
    for (double t : grid_) {
      const double v = eta(profile_, t);
      if (!std::isfinite(v)) throw ConstructionError("eta: non-finite sample on (0,1)");
      samples_.push_back(v);
      max_abs_ = std::max(max_abs_, std::abs(v));
    }
    if (profile_.kind() == ProfileKind::custom) {
      value_at_zero_ = eta(profile_, kIllConditionedHeight);
    }
  }

  const RayProfile& profile() const noexcept { return profile_; }

  double operator()(double t) const { return eta(profile_, t); }
  /// eta on [0, 1]; t = 0 gives the limit value.
  double at(double t) const { return t <= 0.0 ? value_at_zero_ : eta(profile_, std::min(t, 1.0)); }
  double N(double t) const { return eta_primitive2(profile_, t); }
  double dN(double t) const { return eta_primitive1(profile_, t); }

  /// Largest |eta| over the interior sup grid.
  double grid_max_abs() const noexcept { return max_abs_; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  double value_at_zero() const noexcept { return value_at_zero_; }

  /// Fits |eta(t)| ~ C t^gamma on a geometric grid in [t_lo, t_hi].
  HolderEstimate holder_estimate(double t_lo = 1e-12, double t_hi = 1e-6, int n = 25) const {
    std::vector<double> xs, ys;
    for (int i = 0; i < n; ++i) {
      const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n - 1));
      const double v = std::abs(eta(profile_, t));
      if (v > 0.0) {
        xs.push_back(std::log(t));
        ys.push_back(std::log(v));
      }
    }
    const auto fit = fit_line(xs, ys);
    return {fit.slope, std::exp(fit.intercept), fit.r2};
  }

 private:
  RayProfile profile_;
  std::vector<double> grid_;
  std::vector<double> samples_;
  double max_abs_ = 0.0;
  double value_at_zero_ = 0.0;
};

inline constexpr double kEtaSupInflation = 1.05;
inline constexpr double kCSafety = 0.99;

/// c = 0.99 / (2 (zeta_sup + eta_sup)).
inline double choose_c_from_sups(double zeta_sup, double eta_sup) {
  return kCSafety / (2.0 * (zeta_sup + eta_sup));
}

/// Largest admissible c bound for the given sups (strict).
inline double c_bound(double zeta_sup, double eta_sup) { return 1.0 / (2.0 * (zeta_sup + eta_sup)); }

inline double estimate_eta_sup(const EtaSolution& sol) { return kEtaSupInflation * sol.grid_max_abs(); }

inline double choose_c(const RayProfile& profile) {
  const EtaSolution sol(profile);
  return choose_c_from_sups(kZetaSup, estimate_eta_sup(sol));
}

enum class Which { source, target };

/// Source f = indicator of the domain, target g = indicator * (1 + c(zeta + eta)).
/// On the reflected domain both carry a factor 1/2 and eta is evaluated at |x2|.
class DensityPair {
 public:
  /// Builds the pair on Delta. Without a c the admissible value is chosen
  /// automatically; an explicit c is validated against the sup bound.
  static DensityPair make(RayProfile profile, std::optional<double> c = std::nullopt) {
    DensityPair p(std::move(profile));
    p.c_ = c.value_or(choose_c_from_sups(p.zeta_sup_, p.eta_sup_));
    p.validate();
    return p;
  }

  const RayProfile& profile() const noexcept { return eta_.profile(); }
  const EtaSolution& eta_solution() const noexcept { return eta_; }
  Domain domain() const noexcept { return reflected_ ? Domain::delta_prime() : Domain::delta(); }
  double c() const noexcept { return c_; }
  double zeta_sup() const noexcept { return zeta_sup_; }
  double eta_sup() const noexcept { return eta_sup_; }
  bool reflected() const noexcept { return reflected_; }
  double prefactor() const noexcept { return reflected_ ? 0.5 : 1.0; }

  /// 1 + c (zeta(x1) + eta(|x2|)), without the domain indicator or prefactor.
  double target_factor(Point x) const { return 1.0 + c_ * (zeta(x.x1) + eta_.at(std::abs(x.x2))); }

  double source(Point x) const { return in_domain(domain(), x) ? prefactor() : 0.0; }
  double target(Point x) const { return in_domain(domain(), x) ? prefactor() * target_factor(x) : 0.0; }

  double eval(Which which, Point x) const { return which == Which::source ? source(x) : target(x); }

  DensityPair reflected_pair() const {
    if (reflected_) throw InvalidStateError("reflect_pair: pair is already reflected");
    DensityPair out = *this;
    out.reflected_ = true;
    return out;
  }

  DensityPair with_c(double c) const {
    DensityPair out = *this;
    out.c_ = c;
    out.validate();
    return out;
  }

 private:
  explicit DensityPair(RayProfile profile) : eta_(std::move(profile)) {
    zeta_sup_ = kZetaSup;
    eta_sup_ = estimate_eta_sup(eta_);
  }

  void validate() const {
    if (!(c_ >= 0.0) || !std::isfinite(c_)) throw ConstructionError("density pair: c must be >= 0");
    if (!(c_ < c_bound(zeta_sup_, eta_sup_))) {
      throw ConstructionError("density pair: c violates c < 1 / (2 (|zeta|_inf + |eta|_inf))");
    }
  }

  EtaSolution eta_;
  double c_ = 0.0;
  double zeta_sup_ = kZetaSup;
  double eta_sup_ = 0.0;
  bool reflected_ = false;
};

inline double eval_density(const DensityPair& pair, Which which, Point x) { return pair.eval(which, x); }
inline DensityPair reflect_pair(const DensityPair& pair) { return pair.reflected_pair(); }

}  // namespace mongeray
