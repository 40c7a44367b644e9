#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "mongeray/errors.hpp"
#include "mongeray/roots.hpp"

namespace mongeray {

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point operator+(Point p, Point q) { return {p.x1 + q.x1, p.x2 + q.x2}; }
  friend Point operator-(Point p, Point q) { return {p.x1 - q.x1, p.x2 - q.x2}; }
  friend Point operator*(double k, Point p) { return {k * p.x1, k * p.x2}; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double dot(Point p, Point q) { return p.x1 * q.x1 + p.x2 * q.x2; }
inline double norm(Point p) { return std::hypot(p.x1, p.x2); }
inline double distance(Point p, Point q) { return norm(p - q); }

enum class ProfileKind { power, exponential, custom };

/// The increasing function omega: [0,1] -> [0,1/2] whose values fix the
/// slope of every transport ray. Besides omega and its first two
/// derivatives, the profile exposes log(omega) and the ratios omega'/omega,
/// omega''/omega so that callers can work near a = 0 without underflow.
class RayProfile {
 public:
  using Fn = std::function<double(double)>;

  /// omega(a) = a^s / 2.
  static RayProfile power(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("power profile needs s > 0");
    RayProfile p;
    p.kind_ = ProfileKind::power;
    p.s_ = s;
    return p;
  }

  /// omega(a) = exp(1 - 1/a) / 2, omega(0) = 0.
  static RayProfile exponential() {
    RayProfile p;
    p.kind_ = ProfileKind::exponential;
    return p;
  }

  /// User-supplied profile. All three functions must be analytic; no finite
  /// difference fallback is provided. Invariants are checked on a grid.
  static RayProfile custom(Fn omega, Fn d1, Fn d2, std::string name = "custom") {
    if (!omega || !d1 || !d2) {
      throw ConstructionError("custom profile requires omega, omega' and omega''");
    }
    RayProfile p;
    p.kind_ = ProfileKind::custom;
    p.omega_ = std::move(omega);
    p.d1_ = std::move(d1);
    p.d2_ = std::move(d2);
    p.name_ = std::move(name);
    p.validate();
    return p;
  }

  ProfileKind kind() const noexcept { return kind_; }
  /// Power exponent s; NaN for other kinds.
  double exponent() const noexcept { return kind_ == ProfileKind::power ? s_ : std::nan(""); }

  std::string name() const {
    switch (kind_) {
      case ProfileKind::power: {
        std::ostringstream os;
        os.precision(17);
        os << "power:" << s_;
        return os.str();
      }
      case ProfileKind::exponential:
        return "exponential";
      case ProfileKind::custom:
        return name_;
    }
    return {};
  }

  double eval(double a) const {
    switch (kind_) {
      case ProfileKind::power:
        return a <= 0.0 ? 0.0 : 0.5 * std::pow(a, s_);
      case ProfileKind::exponential:
        return a <= 0.0 ? 0.0 : 0.5 * std::exp(1.0 - 1.0 / a);
      case ProfileKind::custom:
        return omega_(a);
    }
    return 0.0;
  }
  double operator()(double a) const { return eval(a); }

  double d1(double a) const {
    switch (kind_) {
      case ProfileKind::power:
        return 0.5 * s_ * std::pow(a, s_ - 1.0);
      case ProfileKind::exponential:
        return a <= 0.0 ? 0.0 : eval(a) / (a * a);
      case ProfileKind::custom:
        return d1_(a);
    }
    return 0.0;
  }

  double d2(double a) const {
    switch (kind_) {
      case ProfileKind::power:
        return 0.5 * s_ * (s_ - 1.0) * std::pow(a, s_ - 2.0);
      case ProfileKind::exponential:
        return a <= 0.0 ? 0.0 : eval(a) * (1.0 - 2.0 * a) / (a * a * a * a);
      case ProfileKind::custom:
        return d2_(a);
    }
    return 0.0;
  }

  /// log(omega(a)); -infinity at a = 0.
  double log_eval(double a) const {
    if (a <= 0.0) return -std::numeric_limits<double>::infinity();
    switch (kind_) {
      case ProfileKind::power:
        return s_ * std::log(a) - std::numbers::ln2;
      case ProfileKind::exponential:
        return 1.0 - 1.0 / a - std::numbers::ln2;
      case ProfileKind::custom:
        return std::log(omega_(a));
    }
    return 0.0;
  }

  /// omega'(a) / omega(a).
  double log_slope(double a) const {
    switch (kind_) {
      case ProfileKind::power:
        return s_ / a;
      case ProfileKind::exponential:
        return 1.0 / (a * a);
      case ProfileKind::custom:
        return d1_(a) / omega_(a);
    }
    return 0.0;
  }

  /// omega''(a) / omega(a).
  double curvature_ratio(double a) const {
    switch (kind_) {
      case ProfileKind::power:
        return s_ * (s_ - 1.0) / (a * a);
      case ProfileKind::exponential:
        return (1.0 - 2.0 * a) / (a * a * a * a);
      case ProfileKind::custom:
        return d2_(a) / omega_(a);
    }
    return 0.0;
  }

  /// omega(a) / omega'(a), the offset in the ray weight x1 + a + omega/omega'.
  double ratio(double a) const {
    switch (kind_) {
      case ProfileKind::power:
        return a / s_;
      case ProfileKind::exponential:
        return a * a;
      case ProfileKind::custom:
        return omega_(a) / d1_(a);
    }
    return 0.0;
  }

 private:
  RayProfile() = default;

  void validate() const {
    if (std::abs(omega_(0.0)) > 1e-12) throw ConstructionError("custom profile: omega(0) != 0");
    if (std::abs(omega_(1.0) - 0.5) > 1e-12) throw ConstructionError("custom profile: omega(1) != 1/2");
    constexpr int n = 1000;
    for (int i = 1; i < n; ++i) {
      const double a = static_cast<double>(i) / n;
      const double w = omega_(a), w1 = d1_(a), w2 = d2_(a);
      if (!std::isfinite(w) || !std::isfinite(w1) || !std::isfinite(w2)) {
        throw ConstructionError("custom profile: non-finite value on (0,1)");
      }
      if (!(w1 > 0.0)) throw ConstructionError("custom profile: omega' must be positive on (0,1)");
    }
  }

  ProfileKind kind_ = ProfileKind::power;
  double s_ = 1.0;
  Fn omega_, d1_, d2_;
  std::string name_;
};

enum class DomainKind { delta, delta_prime };

/// Open triangle with vertices (-1,0), (1,1) and either (1,0) or (1,-1).
struct Domain {
  DomainKind kind = DomainKind::delta;

  static Domain delta() { return {DomainKind::delta}; }
  static Domain delta_prime() { return {DomainKind::delta_prime}; }

  std::array<Point, 3> vertices() const {
    if (kind == DomainKind::delta) return {Point{-1, 0}, Point{1, 1}, Point{1, 0}};
    return {Point{-1, 0}, Point{1, 1}, Point{1, -1}};
  }
  double area() const { return kind == DomainKind::delta ? 1.0 : 2.0; }

  /// Lower and upper boundary of the vertical section at x1 in (-1, 1).
  double lower(double x1) const { return kind == DomainKind::delta ? 0.0 : -0.5 * (x1 + 1.0); }
  double upper(double x1) const { return 0.5 * (x1 + 1.0); }
};

inline bool in_domain(const Domain& domain, Point x) {
  if (!(x.x1 > -1.0 && x.x1 < 1.0)) return false;
  return x.x2 > domain.lower(x.x1) && x.x2 < domain.upper(x.x1);
}

/// A point addressed by its ray index a and its abscissa p along l_a.
struct RayCoord {
  double a = 0.0;
  double p = 0.0;
};

inline Point ray_point(const RayProfile& profile, RayCoord rc) {
  if (!(rc.a >= 0.0 && rc.a <= 1.0)) throw DomainError("ray_point: ray index outside [0,1]");
  if (!(rc.p >= -rc.a && rc.p <= 1.0)) throw DomainError("ray_point: abscissa outside [-a,1]");
  return {rc.p, profile.eval(rc.a) * (rc.p + rc.a)};
}

/// The index a of the ray through an interior point of Delta.
inline double ray_index(const RayProfile& profile, Point x) {
  if (!(x.x2 > 0.0)) throw DegenerateRayError("ray_index: point on or below the base x2 = 0");
  if (!in_domain(Domain::delta(), x)) throw DomainError("ray_index: point outside Delta");
  const double log_x2 = std::log(x.x2);
  auto residual = [&](double a) { return profile.log_eval(a) + std::log(x.x1 + a) - log_x2; };
  return find_root_monotone(residual, std::max(0.0, -x.x1), 1.0, RootOptions{});
}

/// Solves log(omega(a)(1 + a)) = log_t for a in [0, 1].
inline double ray_index_from_log_height(const RayProfile& profile, double log_t) {
  if (!(log_t <= 0.0)) throw DomainError("ray_index_from_log_height: height above 1");
  if (log_t == 0.0) return 1.0;
  if (std::isinf(log_t)) return 0.0;
  auto residual = [&](double a) { return profile.log_eval(a) + std::log1p(a) - log_t; };
  return find_root_monotone(residual, 0.0, 1.0, RootOptions{});
}

/// The ray index whose right endpoint (1, omega(a)(1+a)) sits at height t.
inline double ray_index_from_height(const RayProfile& profile, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("ray_index_from_height: t outside [0,1]");
  if (t == 0.0) return 0.0;
  if (t == 1.0) return 1.0;
  return ray_index_from_log_height(profile, std::log(t));
}

inline constexpr double kIllConditionedHeight = 1e-12;

struct RayIndexDerivatives {
  double a = 0.0;
  double da = 0.0;
  double d2a = 0.0;
  bool ill_conditioned = false;
};

/// a(t) and its first two derivatives from implicit differentiation of
/// t = omega(a)(1+a): with D = omega'(1+a) + omega, a' = 1/D and
/// a'' = -D'/D^3, D' = omega''(1+a) + 2 omega'.
inline RayIndexDerivatives ray_index_derivatives(const RayProfile& profile, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("ray_index_derivatives: t outside (0,1]");
  RayIndexDerivatives out;
  out.a = ray_index_from_height(profile, t);
  const double a = out.a;
  const double d = profile.d1(a) * (1.0 + a) + profile.eval(a);
  const double dd = profile.d2(a) * (1.0 + a) + 2.0 * profile.d1(a);
  out.da = 1.0 / d;
  out.d2a = -dd / (d * d * d);
  out.ill_conditioned = t < kIllConditionedHeight || !std::isfinite(out.da) || !std::isfinite(out.d2a);
  return out;
}

/// Jacobian dx2/da of the ray foliation at (a, x1): omega'(a)(x1 + a) + omega(a).
inline double ray_weight(const RayProfile& profile, double a, double x1) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("ray_weight: ray index outside (0,1)");
  if (!(x1 >= -a && x1 <= 1.0)) throw DomainError("ray_weight: abscissa outside [-a,1]");
  return profile.d1(a) * (x1 + a) + profile.eval(a);
}

}  // namespace mongeray
