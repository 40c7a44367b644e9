#pragma once

#include <algorithm>
#include <cmath>

#include "mongeray/errors.hpp"
#include "mongeray/geometry.hpp"
#include "mongeray/quadrature.hpp"

namespace mongeray {

/// Unit vector along the ray through x: (1, omega(a)) / sqrt(1 + omega(a)^2).
inline Point direction_field(const RayProfile& profile, Point x) {
  const double w = profile.eval(ray_index(profile, x));
  const double n = std::sqrt(1.0 + w * w);
  return {1.0 / n, w / n};
}

/// Central-difference curl d1 F2 - d2 F1 of a planar field.
template <class Field>
double finite_difference_curl(const Field& field, Point x, double h) {
  const double d1f2 = (field(Point{x.x1 + h, x.x2}).x2 - field(Point{x.x1 - h, x.x2}).x2) / (2.0 * h);
  const double d2f1 = (field(Point{x.x1, x.x2 + h}).x1 - field(Point{x.x1, x.x2 - h}).x1) / (2.0 * h);
  return d1f2 - d2f1;
}

/// Euclidean distance from an interior point to the boundary of Delta.
inline double distance_to_delta_boundary(Point x) {
  const double to_base = x.x2;
  const double to_right = 1.0 - x.x1;
  const double to_top = (0.5 * (x.x1 + 1.0) - x.x2) * 2.0 / std::sqrt(5.0);
  return std::min({to_base, to_right, to_top});
}

/// Finite-difference curl of the direction field; zero for a gradient field.
inline double curl_residual(const RayProfile& profile, Point x, double h) {
  if (!(h > 0.0)) throw DomainError("curl_residual: step must be positive");
  if (!in_domain(Domain::delta(), x) || distance_to_delta_boundary(x) < 2.0 * h) {
    throw DomainError("curl_residual: point closer than 2h to the boundary");
  }
  return finite_difference_curl([&](Point y) { return direction_field(profile, y); }, x, h);
}

/// d2 a + d1 a / omega(a) by central differences of ray_index. The
/// direction field is irrotational exactly when this vanishes.
inline double ray_index_gradient_identity(const RayProfile& profile, Point x, double h) {
  if (!in_domain(Domain::delta(), x) || distance_to_delta_boundary(x) < 2.0 * h) {
    throw DomainError("ray_index_gradient_identity: point closer than 2h to the boundary");
  }
  const double d1 = (ray_index(profile, {x.x1 + h, x.x2}) - ray_index(profile, {x.x1 - h, x.x2})) / (2.0 * h);
  const double d2 = (ray_index(profile, {x.x1, x.x2 + h}) - ray_index(profile, {x.x1, x.x2 - h})) / (2.0 * h);
  return d2 + d1 / profile.eval(ray_index(profile, x));
}

/// Kantorovich potential u with Du = b, normalised by u(0,0) = 0.
///
/// The default path climbs the vertical axis to (0, a omega(a)) and then
/// follows l_a, on which u has slope one. The axis integral is carried out in
/// the ray index: tau = alpha omega(alpha) gives
///   u(0, a omega(a)) = int_0^a omega (omega + alpha omega') / sqrt(1 + omega^2) d alpha.
class PotentialEvaluator {
 public:
  explicit PotentialEvaluator(RayProfile profile, double tol = 1e-14)
      : profile_(std::move(profile)), tol_(tol) {}

  const RayProfile& profile() const noexcept { return profile_; }

  Point b(Point x) const { return direction_field(profile_, x); }

  /// u on the vertical axis at height a omega(a).
  double axis_value(double a) const {
    auto integrand = [&](double alpha) {
      const double w = profile_.eval(alpha);
      return w * (w + alpha * profile_.d1(alpha)) / std::sqrt(1.0 + w * w);
    };
    return integrate_1d(integrand, 0.0, a, QuadratureOptions{tol_, 1e-13, 4000}).value;
  }

  double operator()(Point x) const {
    if (!(x.x2 > 0.0)) throw DegenerateRayError("potential_u: point on the base x2 = 0");
    const double a = ray_index(profile_, x);
    const double w = profile_.eval(a);
    // x - (0, a w) = x1 (1, w), so the signed distance along the ray is x1 sqrt(1 + w^2).
    return axis_value(a) + x.x1 * std::sqrt(1.0 + w * w);
  }

  /// Same potential integrated along the base and then vertically:
  /// u(x1, 0) + int_0^{x2} b2(x1, tau) d tau.
  double along_base_then_vertical(Point x) const {
    if (!in_domain(Domain::delta(), x)) throw DomainError("potential_u: point outside Delta");
    double base = x.x1;
    if (x.x1 < 0.0) {
      // Left of the origin the base is made of ray endpoints (-a, 0), where b1 = 1/sqrt(1 + omega(a)^2).
      auto inv = [&](double a) {
        const double w = profile_.eval(a);
        return 1.0 / std::sqrt(1.0 + w * w);
      };
      base = -integrate_1d(inv, 0.0, -x.x1, QuadratureOptions{tol_, 1e-13, 4000}).value;
    }
    auto b2 = [&](double tau) { return b(Point{x.x1, tau}).x2; };
    return base + integrate_1d(b2, 0.0, x.x2, QuadratureOptions{tol_, 1e-13, 4000}).value;
  }

 private:
  RayProfile profile_;
  double tol_;
};

inline double potential_u(const RayProfile& profile, Point x) { return PotentialEvaluator(profile)(x); }

}  // namespace mongeray
